//! Numerical integration of the full equation of motion and what is
//! measured on the result.
//!
//! Integration is fixed-step RK4 so that runs are bit-for-bit reproducible.
//! Contact loss is only flagged, never acted on: the trajectory keeps
//! following the no-slip equation after the margin turns negative.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::{self, Write};

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::ExactBranch;
use crate::model::{contact_margin, rhs, ParamName, Params, State};
use crate::ode::{rk4_fixed, rk4_step};
use crate::perturb::{
    rotating_residual, small_amp_solution, FirstOrderSolution, Rotation, SmallAmpSolution,
};

pub const DEFAULT_STEP: f64 = crate::stability::DEFAULT_STEP;
/// Length of the final window inspected by [`detect_capture`].
pub const DEFAULT_WINDOW: f64 = 20.0 * PI;
/// Residual standard deviation (rad) below which a run counts as locked.
pub const CAPTURE_TOL: f64 = 0.02;
/// Allowed distance of the measured rotation rate from an integer.
pub const RATE_TOL: f64 = 0.05;
/// Width in `tau` to which contact-loss times are refined.
pub const EVENT_TOL: f64 = 1e-8;
/// Largest sweep accepted by [`sweep`].
pub const MAX_CELLS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub tau: f64,
    pub phi: f64,
    pub phi_dot: f64,
    pub margin: f64,
}

impl Sample {
    pub fn state(&self) -> State {
        State::new(self.phi, self.phi_dot)
    }
}

/// Uniformly sampled solution of the equation of motion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Integration step.
    pub step: f64,
    /// Integration steps between stored samples.
    pub stride: usize,
    pub params: Params,
}

impl Trajectory {
    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        &self.samples[self.samples.len() - 1]
    }

    pub fn span(&self) -> f64 {
        self.last().tau - self.first().tau
    }

    /// CSV with header `tau,phi,phi_dot,margin`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "tau,phi,phi_dot,margin")?;
        for s in &self.samples {
            writeln!(
                w,
                "{},{},{},{}",
                fmt17(s.tau),
                fmt17(s.phi),
                fmt17(s.phi_dot),
                fmt17(s.margin)
            )?;
        }
        Ok(())
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn field(p: &Params) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] + '_ {
    move |t, y| [y[1], rhs(t, &State::new(y[0], y[1]), p)]
}

fn sample(tau: f64, y: &[f64; 2], p: &Params) -> Sample {
    let s = State::new(y[0], y[1]);
    Sample {
        tau,
        phi: y[0],
        phi_dot: y[1],
        margin: contact_margin(tau, &s, p),
    }
}

/// Integrate from `tau = 0` to `tau_end`, storing every step.
pub fn integrate(p: &Params, s0: &State, tau_end: f64, step: f64) -> Result<Trajectory> {
    integrate_strided(p, s0, tau_end, step, 1)
}

/// Integrate from `tau = 0` to `tau_end`, storing every `stride`-th step.
///
/// The number of steps is `tau_end / step` rounded up to a multiple of
/// `stride`; sample times are exact multiples of `stride * step`.
pub fn integrate_strided(
    p: &Params,
    s0: &State,
    tau_end: f64,
    step: f64,
    stride: usize,
) -> Result<Trajectory> {
    p.validate()?;
    if !s0.is_finite() {
        return Err(Error::invalid("initial", "initial state must be finite"));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::invalid(
            "step",
            format!("must be positive, got {step}"),
        ));
    }
    if !(tau_end > 0.0) || !tau_end.is_finite() {
        return Err(Error::invalid(
            "tau_end",
            format!("must be positive, got {tau_end}"),
        ));
    }
    if stride == 0 {
        return Err(Error::invalid("stride", "must be at least 1"));
    }
    let steps = ((tau_end / step).round() as usize).max(1);
    let n_out = steps.div_ceil(stride);
    let f = field(p);

    let mut y = [s0.phi, s0.phi_dot];
    let mut samples = Vec::with_capacity(n_out + 1);
    samples.push(sample(0.0, &y, p));
    let mut last_good = 0.0;
    for i in 0..n_out * stride {
        let t = i as f64 * step;
        y = rk4_step(&f, t, &y, step);
        if !(y[0].is_finite() && y[1].is_finite()) {
            return Err(Error::NonFinite {
                last_good_tau: last_good,
            });
        }
        last_good = (i + 1) as f64 * step;
        if (i + 1) % stride == 0 {
            samples.push(sample(last_good, &y, p));
        }
    }
    Ok(Trajectory {
        samples,
        step,
        stride,
        params: *p,
    })
}

/// Locking diagnosis of a trajectory's final window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaptureReport {
    /// Mean rotation rate over the window.
    pub rho_hat: f64,
    /// Circular mean of `phi - round(rho_hat) tau` over the window.
    pub psi_hat: f64,
    pub converged: bool,
    pub contact_lost_at: Option<f64>,
    /// Time before the inspected window.
    pub transient_discarded: f64,
    /// Spread of `phi - round(rho_hat) tau` after removing the `2 tau` harmonic.
    pub residual_std: f64,
}

impl CaptureReport {
    /// The locked direction, if converged to a rotation.
    pub fn rotation(&self) -> Option<Rotation> {
        if self.converged {
            Rotation::from_rho(self.rho_hat.round() as i32)
        } else {
            None
        }
    }
}

/// Measure rotation rate and phase lock over the final `window` of `t`.
pub fn detect_capture(t: &Trajectory, window: f64) -> Result<CaptureReport> {
    if !(window > 0.0) {
        return Err(Error::invalid("window", "must be positive"));
    }
    let span = t.span();
    if span < 2.0 * window {
        return Err(Error::TooShort {
            span,
            required: 2.0 * window,
        });
    }
    let end = t.last();
    let start_tau = end.tau - window;
    let first = t
        .samples
        .iter()
        .position(|s| s.tau >= start_tau - 1e-9 * window)
        .unwrap_or(0);
    let tail = &t.samples[first..];
    let head = &tail[0];

    let rho_hat = (end.phi - head.phi) / (end.tau - head.tau);
    let rho = rho_hat.round();
    let offsets: Vec<f64> = tail.iter().map(|s| s.phi - rho * s.tau).collect();

    let (sum_s, sum_c) = offsets
        .iter()
        .fold((0.0, 0.0), |(a, b), d| (a + d.sin(), b + d.cos()));
    let psi_hat = sum_s.atan2(sum_c);

    let residual_std = detrended_std(tail.iter().map(|s| s.tau), &offsets);
    let converged =
        residual_std < CAPTURE_TOL && (rho_hat - rho).abs() < RATE_TOL && rho.abs() <= 1.0;

    Ok(CaptureReport {
        rho_hat,
        psi_hat,
        converged,
        contact_lost_at: first_contact_loss(t),
        transient_discarded: head.tau - t.first().tau,
        residual_std,
    })
}

/// Standard deviation of `y` after a least-squares fit of
/// `c0 + c1 sin(2 tau) + c2 cos(2 tau)`.
fn detrended_std(taus: impl Iterator<Item = f64>, y: &[f64]) -> f64 {
    let basis: Vec<Vector3<f64>> = taus
        .map(|tau| {
            let (s, c) = (2.0 * tau).sin_cos();
            Vector3::new(1.0, s, c)
        })
        .collect();
    let mut ata = Matrix3::zeros();
    let mut aty = Vector3::zeros();
    for (b, &v) in basis.iter().zip(y) {
        ata += b * b.transpose();
        aty += b * v;
    }
    let coef = ata.lu().solve(&aty).unwrap_or_else(|| {
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        Vector3::new(mean, 0.0, 0.0)
    });
    let ss: f64 = basis
        .iter()
        .zip(y)
        .map(|(b, &v)| (v - coef.dot(b)).powi(2))
        .sum();
    (ss / y.len() as f64).sqrt()
}

/// State at `tau0 + span` starting from `s` at `tau0`, with steps no longer
/// than `max_step`.
fn advance(p: &Params, tau0: f64, s: &State, span: f64, max_step: f64) -> State {
    if span <= 0.0 {
        return *s;
    }
    let n = ((span / max_step) - 1e-9).ceil().max(1.0) as usize;
    let y = rk4_fixed(&field(p), tau0, &[s.phi, s.phi_dot], span, n);
    State::new(y[0], y[1])
}

/// Earliest time at which the contact margin reaches zero, refined by
/// bisection on re-integrated dynamics to [`EVENT_TOL`].
pub fn first_contact_loss(t: &Trajectory) -> Option<f64> {
    let i = t.samples.iter().position(|s| s.margin <= 0.0)?;
    if i == 0 {
        return Some(t.samples[0].tau);
    }
    let prev = &t.samples[i - 1];
    let start = prev.state();
    let margin_at = |ds: f64| {
        let s = advance(&t.params, prev.tau, &start, ds, t.step);
        contact_margin(prev.tau + ds, &s, &t.params)
    };
    let (mut lo, mut hi) = (0.0, t.samples[i].tau - prev.tau);
    while hi - lo > EVENT_TOL {
        let mid = 0.5 * (lo + hi);
        if margin_at(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(prev.tau + hi)
}

/// A closed-form locked solution to compare integration against.
pub trait AnalyticBranch {
    /// Rotation rate, `+1` or `-1`.
    fn rho(&self) -> i32;
    fn state_at(&self, tau: f64) -> State;
    fn accel_at(&self, tau: f64) -> f64;
}

impl AnalyticBranch for ExactBranch {
    fn rho(&self) -> i32 {
        1
    }

    fn state_at(&self, tau: f64) -> State {
        State::new(tau + self.psi, 1.0)
    }

    fn accel_at(&self, _tau: f64) -> f64 {
        0.0
    }
}

impl AnalyticBranch for FirstOrderSolution {
    fn rho(&self) -> i32 {
        1
    }

    fn state_at(&self, tau: f64) -> State {
        self.eval(tau)
    }

    fn accel_at(&self, tau: f64) -> f64 {
        self.accel(tau)
    }
}

impl AnalyticBranch for SmallAmpSolution {
    fn rho(&self) -> i32 {
        self.rho.rho()
    }

    fn state_at(&self, tau: f64) -> State {
        self.eval(tau)
    }

    fn accel_at(&self, tau: f64) -> f64 {
        self.accel(tau)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonMetrics {
    pub max_abs_phase_error: f64,
    pub rms_phase_error: f64,
    /// Largest residual of the analytic solution in the equation of motion.
    pub residual_max: f64,
    /// Start of the compared tail.
    pub tail_start: f64,
}

/// Start of the post-transient tail: the later of half the run and 100 time
/// units, but never inside the final capture window.
pub fn tail_start(t: &Trajectory, window: f64) -> f64 {
    let t0 = t.first().tau;
    let end = t.last().tau;
    (t0 + (0.5 * t.span()).max(100.0)).min(end - window)
}

/// Phase error of `branch` against the post-transient part of `t`.
///
/// The trajectory must be locked with the branch's rotation rate, otherwise
/// [`Error::BranchMismatch`]. Whole turns between the two are removed
/// before measuring.
pub fn compare_to_analytic(
    t: &Trajectory,
    branch: &dyn AnalyticBranch,
) -> Result<ComparisonMetrics> {
    let cap = detect_capture(t, DEFAULT_WINDOW)?;
    let measured = cap.rho_hat.round() as i32;
    if !cap.converged || measured != branch.rho() {
        return Err(Error::BranchMismatch {
            measured,
            expected: branch.rho(),
        });
    }
    let from = tail_start(t, DEFAULT_WINDOW);
    let tail: Vec<&Sample> = t.samples.iter().filter(|s| s.tau >= from).collect();
    let raw: Vec<f64> = tail
        .iter()
        .map(|s| s.phi - branch.state_at(s.tau).phi)
        .collect();
    let turns = (raw.iter().sum::<f64>() / raw.len() as f64 / (2.0 * PI)).round();
    let errs: Vec<f64> = raw.iter().map(|e| e - 2.0 * PI * turns).collect();

    let max_abs_phase_error = errs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let rms_phase_error = (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt();
    let p = &t.params;
    let residual_max = tail
        .iter()
        .map(|s| {
            let st = branch.state_at(s.tau);
            rotating_residual(s.tau, &st, branch.accel_at(s.tau), p.gamma, p.eps(), p.mu()).abs()
        })
        .fold(0.0, f64::max);
    Ok(ComparisonMetrics {
        max_abs_phase_error,
        rms_phase_error,
        residual_max,
        tail_start: from,
    })
}

/// Seed near the analytic branch of the given direction, or a generic seed
/// when that branch does not exist.
pub fn seed_state(rotation: Rotation, p: &Params) -> State {
    match (
        rotation,
        small_amp_solution(rotation, p.gamma, p.eps(), p.mu()),
    ) {
        (Rotation::Clockwise, Ok(s)) => State::new(s.phi0, 1.0),
        (Rotation::Counterclockwise, Ok(s)) => State::new(s.phi0, -1.0),
        (Rotation::Clockwise, Err(_)) => State::new(-FRAC_PI_2, 1.0),
        (Rotation::Counterclockwise, Err(_)) => State::new(FRAC_PI_2, -1.0),
    }
}

/// One sweep axis: a parameter and its grid values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub name: ParamName,
    pub values: Vec<f64>,
}

impl SweepAxis {
    /// `count` evenly spaced values from `start` to `stop` inclusive.
    pub fn linspace(name: ParamName, start: f64, stop: f64, count: usize) -> Result<SweepAxis> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(Error::invalid("axis", "range must be finite"));
        }
        if count == 0 {
            return Err(Error::invalid("axis", "count must be at least 1"));
        }
        let values = if count == 1 {
            vec![start]
        } else {
            (0..count)
                .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                .collect()
        };
        Ok(SweepAxis { name, values })
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    /// Parse `name:start:stop:count`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::invalid(
                "axis",
                format!("expected name:start:stop:count, got `{s}`"),
            ));
        }
        let num = |x: &str| {
            x.parse::<f64>()
                .map_err(|_| Error::invalid("axis", format!("`{x}` is not a number")))
        };
        let count = parts[3]
            .parse::<usize>()
            .map_err(|_| Error::invalid("axis", format!("`{}` is not a count", parts[3])))?;
        SweepAxis::linspace(parts[0].parse()?, num(parts[1])?, num(parts[2])?, count)
    }
}

/// How each sweep cell is integrated and judged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepProtocol {
    pub tau_end: f64,
    pub step: f64,
    pub stride: usize,
    pub window: f64,
}

impl Default for SweepProtocol {
    fn default() -> Self {
        SweepProtocol {
            tau_end: 1500.0,
            step: DEFAULT_STEP,
            stride: 10,
            window: DEFAULT_WINDOW,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellVerdict {
    #[serde(rename = "CW")]
    Cw,
    #[serde(rename = "CCW")]
    Ccw,
    Both,
    None,
    ContactLoss,
}

impl std::fmt::Display for CellVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CellVerdict::Cw => "CW",
            CellVerdict::Ccw => "CCW",
            CellVerdict::Both => "Both",
            CellVerdict::None => "None",
            CellVerdict::ContactLoss => "ContactLoss",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeCell {
    pub axis1: f64,
    pub axis2: f64,
    pub verdict: CellVerdict,
    pub psi_cw: Option<f64>,
    pub psi_ccw: Option<f64>,
    pub contact_loss_tau: Option<f64>,
    pub error: Option<String>,
}

/// Grid of regime verdicts, `axis1` outer and `axis2` inner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeMap {
    pub axis1: SweepAxis,
    pub axis2: SweepAxis,
    pub cells: Vec<RegimeCell>,
}

impl RegimeMap {
    pub fn cell(&self, i: usize, j: usize) -> &RegimeCell {
        &self.cells[i * self.axis2.values.len() + j]
    }

    /// CSV with header `axis1,axis2,verdict,psi_cw,psi_ccw,contact_loss_tau`;
    /// missing values are empty fields.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
        writeln!(w, "axis1,axis2,verdict,psi_cw,psi_ccw,contact_loss_tau")?;
        for c in &self.cells {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                fmt17(c.axis1),
                fmt17(c.axis2),
                c.verdict,
                opt(c.psi_cw),
                opt(c.psi_ccw),
                opt(c.contact_loss_tau)
            )?;
        }
        Ok(())
    }
}

struct BranchRun {
    locked: Option<f64>,
    contact_loss: Option<f64>,
}

fn run_branch(rotation: Rotation, p: &Params, protocol: &SweepProtocol) -> Result<BranchRun> {
    let t = integrate_strided(
        p,
        &seed_state(rotation, p),
        protocol.tau_end,
        protocol.step,
        protocol.stride,
    )?;
    let cap = detect_capture(&t, protocol.window)?;
    let locked =
        (cap.rotation() == Some(rotation) && cap.contact_lost_at.is_none()).then_some(cap.psi_hat);
    Ok(BranchRun {
        locked,
        contact_loss: cap.contact_lost_at,
    })
}

fn evaluate_cell(
    p: &Params,
    protocol: &SweepProtocol,
) -> (
    CellVerdict,
    Option<f64>,
    Option<f64>,
    Option<f64>,
    Option<String>,
) {
    let cw = run_branch(Rotation::Clockwise, p, protocol);
    let ccw = run_branch(Rotation::Counterclockwise, p, protocol);
    let error = [&cw, &ccw]
        .iter()
        .filter_map(|r| r.as_ref().err().map(|e| e.to_string()))
        .reduce(|a, b| format!("{a}; {b}"));
    let (psi_cw, loss_cw) = cw
        .map(|r| (r.locked, r.contact_loss))
        .unwrap_or((None, None));
    let (psi_ccw, loss_ccw) = ccw
        .map(|r| (r.locked, r.contact_loss))
        .unwrap_or((None, None));
    let contact_loss_tau = match (loss_cw, loss_ccw) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let verdict = match (psi_cw.is_some(), psi_ccw.is_some()) {
        (true, true) => CellVerdict::Both,
        (true, false) => CellVerdict::Cw,
        (false, true) => CellVerdict::Ccw,
        (false, false) if contact_loss_tau.is_some() => CellVerdict::ContactLoss,
        (false, false) => CellVerdict::None,
    };
    (verdict, psi_cw, psi_ccw, contact_loss_tau, error)
}

/// Classify every cell of the `axis1 x axis2` grid around `base`.
///
/// Each cell runs a clockwise-seeded and a counterclockwise-seeded
/// integration (see [`seed_state`]). A direction counts when its run locks
/// to that direction without losing contact. Cells are evaluated in
/// parallel; the output order is the grid order. Failures inside a cell are
/// stored in [`RegimeCell::error`].
pub fn sweep(
    base: &Params,
    axis1: &SweepAxis,
    axis2: &SweepAxis,
    protocol: &SweepProtocol,
) -> Result<RegimeMap> {
    let cells = axis1.values.len() * axis2.values.len();
    if cells == 0 || cells > MAX_CELLS {
        return Err(Error::invalid(
            "axis",
            format!("grid has {cells} cells, allowed 1..={MAX_CELLS}"),
        ));
    }
    if axis1
        .values
        .iter()
        .chain(&axis2.values)
        .any(|v| !v.is_finite())
    {
        return Err(Error::invalid("axis", "values must be finite"));
    }
    let n2 = axis2.values.len();
    let cells = (0..cells)
        .into_par_iter()
        .map(|idx| {
            let (v1, v2) = (axis1.values[idx / n2], axis2.values[idx % n2]);
            let p = base.with(axis1.name, v1).with(axis2.name, v2);
            let (verdict, psi_cw, psi_ccw, contact_loss_tau, error) = evaluate_cell(&p, protocol);
            RegimeCell {
                axis1: v1,
                axis2: v2,
                verdict,
                psi_cw,
                psi_ccw,
                contact_loss_tau,
                error,
            }
        })
        .collect();
    Ok(RegimeMap {
        axis1: axis1.clone(),
        axis2: axis2.clone(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_phases;
    use approx::assert_relative_eq;

    fn circular() -> Params {
        Params::new(0.1, 0.2, 0.2)
    }

    #[test]
    fn exact_solution_is_invariant() {
        let psi = exact_phases(0.1, 0.2).unwrap().stable.psi;
        let t = integrate(&circular(), &State::new(psi, 1.0), 20.0 * PI, DEFAULT_STEP).unwrap();
        let worst = t
            .samples
            .iter()
            .map(|s| (s.phi - s.tau - psi).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn free_rotation_decays_exponentially() {
        let p = Params::new(0.1, 0.0, 0.0);
        let t = integrate_strided(&p, &State::new(0.0, 1.0), 50.0, DEFAULT_STEP, 100).unwrap();
        for s in &t.samples {
            let expected = (-0.1 * s.tau).exp();
            assert!((s.phi_dot - expected).abs() <= 1e-9 * expected);
        }
    }

    #[test]
    fn sample_grid_and_margins() {
        let p = Params::new(0.02, 0.1875, 0.125);
        let t = integrate_strided(&p, &State::new(-1.7, 1.0), 10.0, 1e-3, 7).unwrap();
        assert_eq!(t.samples.len(), 10000usize.div_ceil(7) + 1);
        for (i, s) in t.samples.iter().enumerate() {
            assert_eq!(s.tau, (i * 7) as f64 * 1e-3);
            assert!((s.margin - contact_margin(s.tau, &s.state(), &p)).abs() <= 1e-12);
        }
    }

    #[test]
    fn integration_is_deterministic() {
        let p = Params::new(0.01, 0.8, 0.8);
        let a = integrate(&p, &State::new(0.0, 0.0), 30.0, 1e-3).unwrap();
        let b = integrate(&p, &State::new(0.0, 0.0), 30.0, 1e-3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = circular();
        assert!(integrate(&p, &State::new(0.0, 1.0), 10.0, 0.0).is_err());
        assert!(integrate(&p, &State::new(0.0, 1.0), -1.0, 1e-3).is_err());
        assert!(integrate(&p, &State::new(f64::NAN, 1.0), 1.0, 1e-3).is_err());
    }

    #[test]
    fn blow_up_reports_last_good_time() {
        let p = Params::new(-50.0, 0.0, 0.0);
        match integrate(&p, &State::new(0.0, 1.0), 100.0, 1e-2) {
            Err(Error::NonFinite { last_good_tau }) => {
                assert!(last_good_tau > 0.0 && last_good_tau < 100.0)
            }
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn capture_of_exact_solution() {
        let psi = exact_phases(0.1, 0.2).unwrap().stable.psi;
        let t =
            integrate_strided(&circular(), &State::new(psi, 1.0), 200.0, DEFAULT_STEP, 10).unwrap();
        let c = detect_capture(&t, DEFAULT_WINDOW).unwrap();
        assert!(c.converged);
        assert!((c.rho_hat - 1.0).abs() < 1e-9);
        assert!((c.psi_hat - -2.094395).abs() < 1e-6);
        assert_eq!(c.contact_lost_at, None);
        assert_eq!(c.rotation(), Some(Rotation::Clockwise));
    }

    #[test]
    fn capture_of_decaying_rotation() {
        let p = Params::new(0.1, 0.0, 0.0);
        let t = integrate_strided(&p, &State::new(0.0, 1.0), 400.0, DEFAULT_STEP, 10).unwrap();
        let c = detect_capture(&t, DEFAULT_WINDOW).unwrap();
        assert!(c.converged);
        assert!(c.rho_hat.abs() < 1e-9);
        assert_eq!(c.rotation(), None);
    }

    #[test]
    fn capture_needs_two_windows() {
        let t = integrate(&circular(), &State::new(0.0, 1.0), 100.0, 1e-2).unwrap();
        assert!(matches!(
            detect_capture(&t, DEFAULT_WINDOW),
            Err(Error::TooShort { .. })
        ));
    }

    #[test]
    fn harmonic_is_removed_before_threshold() {
        let taus: Vec<f64> = (0..2000).map(|i| i as f64 * 0.03).collect();
        let y: Vec<f64> = taus
            .iter()
            .map(|t| 0.4 + 0.1 * (2.0 * t + 0.3).cos())
            .collect();
        assert!(detrended_std(taus.iter().copied(), &y) < 1e-12);
    }

    #[test]
    fn no_contact_loss_on_stable_branch_or_free_spin() {
        let psi = exact_phases(0.1, 0.2).unwrap().stable.psi;
        let t =
            integrate_strided(&circular(), &State::new(psi, 1.0), 50.0, DEFAULT_STEP, 10).unwrap();
        assert_eq!(first_contact_loss(&t), None);
        let free = integrate(
            &Params::new(0.0, 0.0, 0.0),
            &State::new(0.3, 1.0),
            20.0,
            1e-2,
        )
        .unwrap();
        assert_eq!(first_contact_loss(&free), None);
    }

    #[test]
    fn contact_loss_refinement_is_self_consistent() {
        let p = Params::new(0.01, 0.8, 0.8);
        let t = integrate(&p, &State::new(0.0, 0.0), 50.0, DEFAULT_STEP).unwrap();
        let tau = first_contact_loss(&t).expect("contact is lost");
        let s = advance(&p, 0.0, &State::new(0.0, 0.0), tau, DEFAULT_STEP);
        assert!(contact_margin(tau, &s, &p).abs() < 1e-6);

        // starts in contact, then loses it between samples
        let s0 = State::new(0.0, 2.0);
        let t = integrate_strided(&p, &s0, 50.0, DEFAULT_STEP, 13).unwrap();
        assert!(t.first().margin > 0.0);
        let tau = first_contact_loss(&t).expect("contact is lost");
        assert!(tau > 0.0);
        let s = advance(&p, 0.0, &s0, tau, DEFAULT_STEP);
        assert!(contact_margin(tau, &s, &p).abs() < 1e-6);
        assert!(t
            .samples
            .iter()
            .take_while(|x| x.tau < tau)
            .all(|x| x.margin > 0.0));
    }

    #[test]
    fn compare_exact_branch() {
        let stable = exact_phases(0.1, 0.2).unwrap().stable;
        let t = integrate_strided(
            &circular(),
            &State::new(stable.psi, 1.0),
            300.0,
            DEFAULT_STEP,
            10,
        )
        .unwrap();
        let m = compare_to_analytic(&t, &stable).unwrap();
        assert!(m.max_abs_phase_error < 1e-6);
        assert!(m.residual_max < 1e-12);
    }

    #[test]
    fn compare_detects_branch_mismatch() {
        let p = Params::new(0.02, 0.1875, 0.125);
        let t = integrate_strided(
            &p,
            &seed_state(Rotation::Clockwise, &p),
            600.0,
            DEFAULT_STEP,
            10,
        )
        .unwrap();
        let ccw = small_amp_solution(Rotation::Counterclockwise, p.gamma, p.eps(), p.mu()).unwrap();
        assert!(matches!(
            compare_to_analytic(&t, &ccw),
            Err(Error::BranchMismatch {
                measured: 1,
                expected: -1
            })
        ));
    }

    #[test]
    fn first_order_comparison_is_small() {
        let p = Params::from_eps_mu(0.2, 0.02, 0.3);
        let sol = FirstOrderSolution::new(p.gamma, p.eps(), p.mu()).unwrap();
        let t = integrate_strided(&p, &sol.eval(0.0), 300.0, DEFAULT_STEP, 10).unwrap();
        let m = compare_to_analytic(&t, &sol).unwrap();
        assert!(m.max_abs_phase_error < 5.0 * 0.02 * 0.02, "{m:?}");
    }

    #[test]
    fn axis_parsing() {
        let a: SweepAxis = "gamma:0.01:0.05:5".parse().unwrap();
        assert_eq!(a.name, ParamName::Gamma);
        assert_eq!(a.values.len(), 5);
        assert_relative_eq!(a.values[4], 0.05, epsilon = 1e-15);
        assert!("gamma:0:1".parse::<SweepAxis>().is_err());
        assert!("zeta:0:1:3".parse::<SweepAxis>().is_err());
        assert!("gamma:0:1:0".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn seeds_fall_back_outside_windows() {
        let p = Params::from_eps_mu(0.05, 0.03125, 0.15625);
        assert_eq!(
            seed_state(Rotation::Counterclockwise, &p),
            State::new(FRAC_PI_2, -1.0)
        );
        let p = Params::from_eps_mu(0.02, 0.03125, 0.15625);
        let s = seed_state(Rotation::Counterclockwise, &p);
        assert_relative_eq!(s.phi, 2.2652945924214527, epsilon = 1e-14);
    }

    #[test]
    fn csv_layout() {
        let t = integrate_strided(&circular(), &State::new(0.0, 1.0), 0.01, 1e-3, 5).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("tau,phi,phi_dot,margin"));
        let row: Vec<f64> = lines
            .nth(1)
            .unwrap()
            .split(',')
            .map(|x| x.parse().unwrap())
            .collect();
        let s = t.samples[1];
        assert_eq!(row, vec![s.tau, s.phi, s.phi_dot, s.margin]);
    }

    #[test]
    fn sweep_rejects_oversized_grid() {
        let a = SweepAxis::linspace(ParamName::Gamma, 0.0, 1.0, 101).unwrap();
        let b = SweepAxis::linspace(ParamName::Eps, 0.0, 1.0, 100).unwrap();
        assert!(sweep(&circular(), &a, &b, &SweepProtocol::default()).is_err());
    }
}
