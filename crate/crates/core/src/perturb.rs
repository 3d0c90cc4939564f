//! First-order solutions for slightly elliptic waist motion.
//!
//! With `eps = (alpha - beta) / 2` and `mu = (alpha + beta) / 2` the equation
//! of motion reads
//!
//! ```text
//! phi'' + gamma phi' + mu cos(phi - tau) = eps cos(phi + tau)
//! ```
//!
//! Two regimes are covered:
//!
//! * damping and mean amplitude of order one, `eps` small: the rotation
//!   `tau + phi0` of the circular problem picks up a `2 tau` vibration
//!   `eps (C sin(2 tau + phi0) + D cos(2 tau + phi0))` ([`FirstOrderSolution`]);
//! * `gamma`, `mu` and `eps` all small: both a clockwise rotation near
//!   `tau + phi0` and a counterclockwise rotation near `-tau + phi0` exist,
//!   the latter only for `gamma < eps` ([`SmallAmpSolution`]).

use serde::{Deserialize, Serialize};

use crate::acos_clamped;
use crate::error::{Error, Result};
use crate::model::State;

/// Threshold for [`Error::DegenerateDenominator`] in [`cd_coefficients`].
const DENOM_TOL: f64 = 1e-12;

/// Rotation direction of a locked solution, `rho = +1` or `rho = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rotation {
    /// `rho = +1`: the hoop turns with the waist.
    #[serde(alias = "cw")]
    Clockwise,
    /// `rho = -1`: inverse twirling against the waist motion.
    #[serde(alias = "ccw")]
    Counterclockwise,
}

impl Rotation {
    pub fn rho(self) -> i32 {
        match self {
            Rotation::Clockwise => 1,
            Rotation::Counterclockwise => -1,
        }
    }

    pub fn from_rho(rho: i32) -> Option<Rotation> {
        match rho {
            1 => Some(Rotation::Clockwise),
            -1 => Some(Rotation::Counterclockwise),
            _ => None,
        }
    }
}

impl std::str::FromStr for Rotation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cw" | "clockwise" | "+1" | "1" => Ok(Rotation::Clockwise),
            "ccw" | "counterclockwise" | "-1" => Ok(Rotation::Counterclockwise),
            other => Err(Error::invalid(
                "seed_branch",
                format!("expected cw or ccw, got `{other}`"),
            )),
        }
    }
}

/// `tau + phi0 + eps (C sin(2 tau + phi0) + D cos(2 tau + phi0))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstOrderSolution {
    pub phi0: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub eps: f64,
    pub mu: f64,
    pub gamma: f64,
}

impl FirstOrderSolution {
    /// Stable first-order rotation for the given regime.
    pub fn new(gamma: f64, eps: f64, mu: f64) -> Result<Self> {
        let phi0 = phi0_stable(gamma, mu)?;
        let (c, d) = cd_coefficients(gamma, mu)?;
        Ok(FirstOrderSolution {
            phi0,
            c,
            d,
            eps,
            mu,
            gamma,
        })
    }

    /// Angle and rate at time `tau`.
    pub fn eval(&self, tau: f64) -> State {
        eval_first_order(tau, self)
    }

    pub fn accel(&self, tau: f64) -> f64 {
        let (s, c) = (2.0 * tau + self.phi0).sin_cos();
        -4.0 * self.eps * (self.c * s + self.d * c)
    }

    /// Residual of the full equation of motion along the approximation.
    pub fn residual(&self, tau: f64) -> f64 {
        let st = self.eval(tau);
        rotating_residual(tau, &st, self.accel(tau), self.gamma, self.eps, self.mu)
    }
}

/// Small-amplitude locked rotation.
///
/// * clockwise: `tau + phi0 - eps vib_amp cos(phi0 + 2 tau)` with
///   `cos phi0 = -gamma/mu` and `vib_amp = 1/4`;
/// * counterclockwise: `-tau + phi0 + vib_amp cos(phi0 - 2 tau)` with
///   `cos phi0 = -gamma/eps` and `vib_amp = mu/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallAmpSolution {
    pub rho: Rotation,
    pub phi0: f64,
    pub vib_amp: f64,
    pub gamma: f64,
    pub eps: f64,
    pub mu: f64,
}

impl SmallAmpSolution {
    pub fn eval(&self, tau: f64) -> State {
        match self.rho {
            Rotation::Clockwise => {
                let (s, c) = (self.phi0 + 2.0 * tau).sin_cos();
                let a = self.eps * self.vib_amp;
                State::new(tau + self.phi0 - a * c, 1.0 + 2.0 * a * s)
            }
            Rotation::Counterclockwise => {
                let (s, c) = (self.phi0 - 2.0 * tau).sin_cos();
                State::new(
                    -tau + self.phi0 + self.vib_amp * c,
                    -1.0 + 2.0 * self.vib_amp * s,
                )
            }
        }
    }

    pub fn accel(&self, tau: f64) -> f64 {
        match self.rho {
            Rotation::Clockwise => 4.0 * self.eps * self.vib_amp * (self.phi0 + 2.0 * tau).cos(),
            Rotation::Counterclockwise => -4.0 * self.vib_amp * (self.phi0 - 2.0 * tau).cos(),
        }
    }

    pub fn residual(&self, tau: f64) -> f64 {
        let st = self.eval(tau);
        rotating_residual(tau, &st, self.accel(tau), self.gamma, self.eps, self.mu)
    }
}

/// `phi'' + gamma phi' + mu cos(phi - tau) - eps cos(phi + tau)`.
pub fn rotating_residual(tau: f64, s: &State, accel: f64, gamma: f64, eps: f64, mu: f64) -> f64 {
    accel + gamma * s.phi_dot + mu * (s.phi - tau).cos() - eps * (s.phi + tau).cos()
}

fn check_window(gamma: f64, mu: f64) -> Result<()> {
    if !gamma.is_finite() || !mu.is_finite() {
        return Err(Error::invalid("gamma", "gamma and mu must be finite"));
    }
    if gamma < 0.0 {
        return Err(Error::invalid(
            "gamma",
            format!("must be non-negative, got {gamma}"),
        ));
    }
    if gamma > mu {
        return Err(Error::NoRotatingSolution {
            condition: "0 <= gamma <= mu",
        });
    }
    Ok(())
}

/// Zero-order phase `-acos(-gamma/mu)` of the attracting rotation.
pub fn phi0_stable(gamma: f64, mu: f64) -> Result<f64> {
    check_window(gamma, mu)?;
    if mu == 0.0 {
        // gamma == 0 too; the phase is the undamped limit
        return Ok(-std::f64::consts::FRAC_PI_2);
    }
    Ok(-acos_clamped(-gamma / mu, "0 <= gamma <= mu")?)
}

/// Stiffness `sqrt(mu^2 - gamma^2)` of the linearization about the rotation.
pub fn stiffness(gamma: f64, mu: f64) -> f64 {
    (mu * mu - gamma * gamma).max(0.0).sqrt()
}

/// Shared denominator `mu^2 + 3 gamma^2 - 8 p + 16` of the correction.
fn cd_denominator(gamma: f64, mu: f64) -> f64 {
    mu * mu + 3.0 * gamma * gamma - 8.0 * stiffness(gamma, mu) + 16.0
}

/// Coefficients `(C, D)` of the periodic `2 tau` correction: the unique
/// periodic solution of `f'' + gamma f' + p f = cos(2 tau + phi0)`.
pub fn cd_coefficients(gamma: f64, mu: f64) -> Result<(f64, f64)> {
    check_window(gamma, mu)?;
    let den = cd_denominator(gamma, mu);
    if den.abs() < DENOM_TOL {
        return Err(Error::DegenerateDenominator { value: den });
    }
    let p = stiffness(gamma, mu);
    Ok((2.0 * gamma / den, (p - 4.0) / den))
}

/// Angle and rate of the first-order rotation at `tau`.
pub fn eval_first_order(tau: f64, sol: &FirstOrderSolution) -> State {
    let (s, c) = (2.0 * tau + sol.phi0).sin_cos();
    State::new(
        tau + sol.phi0 + sol.eps * (sol.c * s + sol.d * c),
        1.0 + sol.eps * (2.0 * sol.c * c - 2.0 * sol.d * s),
    )
}

/// Largest ellipticity for which the first-order rotation avoids parametric
/// resonance at every stiffness: `2 gamma / sqrt((gamma C + 1)^2 + gamma^2 D^2)`.
pub fn stability_bound_eps(gamma: f64, mu: f64) -> Result<f64> {
    let (c, d) = cd_coefficients(gamma, mu)?;
    let a = gamma * c + 1.0;
    let b = gamma * d;
    Ok(2.0 * gamma / (a * a + b * b).sqrt())
}

/// Largest ellipticity for which the first-order rotation keeps a positive
/// contact margin.
pub fn contact_bound_eps(gamma: f64, mu: f64) -> Result<f64> {
    check_window(gamma, mu)?;
    let p = stiffness(gamma, mu);
    let g2 = gamma * gamma;
    let m2 = mu * mu;
    let num = m2 + 3.0 * g2 - 8.0 * p + 16.0;
    let den = m2 + 8.0 * g2 - 12.0 * p + 36.0;
    Ok(0.5 * (1.0 + 2.0 * p) * (num / den).sqrt())
}

/// Locked rotation in the small damping and amplitude regime.
///
/// Clockwise requires `0 < gamma < mu`, counterclockwise `0 < gamma < eps`;
/// outside those windows the stable branch does not exist.
pub fn small_amp_solution(
    rho: Rotation,
    gamma: f64,
    eps: f64,
    mu: f64,
) -> Result<SmallAmpSolution> {
    for (field, v) in [("gamma", gamma), ("eps", eps), ("mu", mu)] {
        if !v.is_finite() {
            return Err(Error::invalid(field, format!("must be finite, got {v}")));
        }
    }
    match rho {
        Rotation::Clockwise => {
            if !(gamma > 0.0 && gamma < mu) {
                return Err(Error::NoRotatingSolution {
                    condition: "0 < gamma < mu",
                });
            }
            Ok(SmallAmpSolution {
                rho,
                phi0: -acos_clamped(-gamma / mu, "0 < gamma < mu")?,
                vib_amp: 0.25,
                gamma,
                eps,
                mu,
            })
        }
        Rotation::Counterclockwise => {
            if !(gamma > 0.0 && gamma < eps) {
                return Err(Error::NoRotatingSolution {
                    condition: "0 < gamma < eps",
                });
            }
            Ok(SmallAmpSolution {
                rho,
                phi0: acos_clamped(-gamma / eps, "0 < gamma < eps")?,
                vib_amp: 0.25 * mu,
                gamma,
                eps,
                mu,
            })
        }
    }
}

/// Outcome of a contact bound check: `ok` iff `value < bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub ok: bool,
    pub value: f64,
    pub bound: f64,
}

/// First-order contact condition for the small-amplitude branches.
///
/// Clockwise bounds `eps` by `(1 + 2 sqrt(mu^2 - gamma^2)) / 3`;
/// counterclockwise bounds `mu` by `(1 + 2 sqrt(eps^2 - gamma^2)) / 3`.
pub fn small_amp_contact_bound(rho: Rotation, gamma: f64, eps: f64, mu: f64) -> BoundCheck {
    let (value, other) = match rho {
        Rotation::Clockwise => (eps, mu),
        Rotation::Counterclockwise => (mu, eps),
    };
    let bound = (1.0 + 2.0 * stiffness(gamma, other)) / 3.0;
    BoundCheck {
        ok: value < bound,
        value,
        bound,
    }
}

/// Largest `|residual|` of the first-order rotation sampled on `[t0, t1]`.
pub fn max_residual(sol: &FirstOrderSolution, t0: f64, t1: f64, samples: usize) -> f64 {
    let n = samples.max(2);
    (0..n)
        .map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64)
        .map(|tau| sol.residual(tau).abs())
        .fold(0.0, f64::max)
}
