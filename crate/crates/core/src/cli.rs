//! `hulahoop` command line front end.
//!
//! Parameters come from `--gamma/--alpha/--beta` or a JSON config file (see
//! [`RunConfig`]); flags override config values. Exit codes: 0 on success,
//! 2 on usage or validation errors, 1 on analysis failures such as a missing
//! rotating solution.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;
use crate::exact::{exact_contact_ok, exact_phases, exact_stability, ExactBranch};
use crate::model::{nondimensionalize, DimensionalParams, ParamName, Params, State};
use crate::perturb::{
    cd_coefficients, contact_bound_eps, phi0_stable, small_amp_contact_bound, small_amp_solution,
    stability_bound_eps, FirstOrderSolution, Rotation,
};
use crate::sim::{
    compare_to_analytic, detect_capture, integrate_strided, seed_state, sweep, AnalyticBranch,
    SweepAxis, SweepProtocol, DEFAULT_STEP, DEFAULT_WINDOW,
};
use crate::stability::{assemble_hill, floquet_classify, monodromy, numeric_eps_critical};

const DEFAULT_TAU_END: f64 = 1500.0;
const DEFAULT_STRIDE: usize = 10;

/// Dimensional parameter block; unit suffixes are part of the field names.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionalBlock {
    pub m_kg: f64,
    #[serde(rename = "R_m")]
    pub big_r_m: f64,
    pub r_m: f64,
    #[serde(rename = "k_N_m_s")]
    pub k_n_m_s: f64,
    pub a_m: f64,
    pub b_m: f64,
    pub omega_rad_s: f64,
}

impl From<DimensionalBlock> for DimensionalParams {
    fn from(b: DimensionalBlock) -> Self {
        DimensionalParams {
            m: b.m_kg,
            big_r: b.big_r_m,
            r: b.r_m,
            k: b.k_n_m_s,
            a: b.a_m,
            b: b.b_m,
            omega: b.omega_rad_s,
        }
    }
}

/// JSON run configuration. Exactly one of `params` and `dimensional` must be
/// present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: Option<Params>,
    pub dimensional: Option<DimensionalBlock>,
    pub initial: Option<State>,
    pub tau_end: Option<f64>,
    pub step: Option<f64>,
    pub stride: Option<usize>,
    pub seed_branch: Option<Rotation>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub axis1: Option<String>,
    pub axis2: Option<String>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("config: cannot read {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    /// Nondimensional parameters from whichever block is present.
    pub fn resolve_params(&self) -> Result<Params, CliError> {
        match (&self.params, &self.dimensional) {
            (Some(p), None) => {
                p.validate()?;
                Ok(*p)
            }
            (None, Some(d)) => Ok(nondimensionalize(&DimensionalParams::from(*d))?),
            (Some(_), Some(_)) => Err(CliError::Validation(
                "params: give either `params` or `dimensional`, not both".into(),
            )),
            (None, None) => Err(CliError::Validation(
                "params: config needs a `params` or a `dimensional` block".into(),
            )),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input; exit code 2.
    Validation(String),
    /// Analysis failure; exit code 1.
    Runtime(Error),
    /// File output failure; exit code 1.
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } => CliError::Validation(e.to_string()),
            other => CliError::Runtime(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Runtime(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Runtime(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "IoError: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "hulahoop",
    version,
    about = "Twirling analysis for a hula-hoop on an elliptically moving waist"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
struct RunArgs {
    #[arg(long)]
    step: Option<f64>,
    #[arg(long = "tau-end")]
    tau_end: Option<f64>,
    /// Integration steps per stored sample.
    #[arg(long)]
    stride: Option<usize>,
    /// Branch to seed (and compare against): cw or ccw.
    #[arg(long = "seed-branch")]
    seed_branch: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Constant-speed rotations for circular waist motion.
    Exact(ParamArgs),
    /// First-order rotation for elliptic motion and its bounds on eps.
    Approx(ParamArgs),
    /// Stability and contact bounds in one report.
    Bounds(ParamArgs),
    /// Floquet classification of the first-order rotation.
    Stability {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        step: Option<f64>,
        /// Also locate the numeric stability boundary in eps.
        #[arg(long)]
        critical: bool,
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
    },
    /// Integrate the equation of motion and report rotational capture.
    Simulate {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Trajectory CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Capture report JSON path (default: next to --out).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Integrate from an analytic branch and measure the phase error.
    Compare {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Analytic model: exact, first-order or small-amp.
        #[arg(long)]
        approx: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map rotation regimes over a parameter grid.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        run: RunArgs,
        /// First axis as name:start:stop:count.
        #[arg(long)]
        axis1: Option<String>,
        /// Second axis as name:start:stop:count.
        #[arg(long)]
        axis2: Option<String>,
        /// Regime map CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Run the command line with `args` (including the program name), writing
/// normal output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&report).expect("report serializes")
            } else {
                render_human(&report)
            };
            match writeln!(out, "{text}") {
                Ok(()) => 0,
                Err(_) => 1,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Merged parameters and run options for one invocation.
struct Inputs {
    params: Params,
    config: RunConfig,
}

fn load(args: &ParamArgs, beta_defaults_to_alpha: bool) -> Result<Inputs, CliError> {
    let config = match &args.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    let base = if args.config.is_some() {
        Some(config.resolve_params()?)
    } else {
        None
    };
    let pick = |flag: Option<f64>, from_cfg: Option<f64>, name: &'static str| {
        flag.or(from_cfg).ok_or_else(|| {
            CliError::Validation(format!("{name}: missing --{name} (or a --config)"))
        })
    };
    let gamma = pick(args.gamma, base.map(|p| p.gamma), "gamma")?;
    let alpha = pick(args.alpha, base.map(|p| p.alpha), "alpha")?;
    let beta = match (args.beta, base.map(|p| p.beta)) {
        (Some(b), _) | (None, Some(b)) => b,
        (None, None) if beta_defaults_to_alpha => alpha,
        (None, None) => {
            return Err(CliError::Validation(
                "beta: missing --beta (or a --config)".into(),
            ))
        }
    };
    let params = Params::new(gamma, alpha, beta);
    params.validate()?;
    Ok(Inputs { params, config })
}

fn check_writable(field: &str, path: &Path) -> Result<(), CliError> {
    let parent = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    if !parent.is_dir() {
        return Err(CliError::Validation(format!(
            "{field}: directory {} does not exist",
            parent.display()
        )));
    }
    if path.is_dir() {
        return Err(CliError::Validation(format!(
            "{field}: {} is a directory",
            path.display()
        )));
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

struct RunOptions {
    step: f64,
    tau_end: f64,
    stride: usize,
    seed: Rotation,
}

fn run_options(run: &RunArgs, cfg: &RunConfig) -> Result<RunOptions, CliError> {
    let step = run.step.or(cfg.step).unwrap_or(DEFAULT_STEP);
    let tau_end = run.tau_end.or(cfg.tau_end).unwrap_or(DEFAULT_TAU_END);
    let stride = run.stride.or(cfg.stride).unwrap_or(DEFAULT_STRIDE);
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Validation(format!(
            "step: must be positive, got {step}"
        )));
    }
    if !(tau_end > 0.0 && tau_end.is_finite()) {
        return Err(CliError::Validation(format!(
            "tau_end: must be positive, got {tau_end}"
        )));
    }
    if stride == 0 {
        return Err(CliError::Validation("stride: must be at least 1".into()));
    }
    let seed = match &run.seed_branch {
        Some(s) => s.parse::<Rotation>()?,
        None => cfg.seed_branch.unwrap_or(Rotation::Clockwise),
    };
    Ok(RunOptions {
        step,
        tau_end,
        stride,
        seed,
    })
}

fn dispatch(cli: &Cli) -> Result<Value, CliError> {
    match &cli.command {
        Command::Exact(args) => cmd_exact(args),
        Command::Approx(args) => cmd_approx(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Stability {
            params,
            step,
            critical,
            tolerance,
        } => cmd_stability(params, *step, *critical, *tolerance),
        Command::Simulate {
            params,
            run,
            out,
            report,
        } => cmd_simulate(params, run, out.as_deref(), report.as_deref()),
        Command::Compare {
            params,
            run,
            approx,
            out,
        } => cmd_compare(params, run, approx.as_deref(), out.as_deref()),
        Command::Sweep {
            params,
            run,
            axis1,
            axis2,
            out,
        } => cmd_sweep(
            params,
            run,
            axis1.as_deref(),
            axis2.as_deref(),
            out.as_deref(),
        ),
    }
}

fn branch_json(gamma: f64, alpha: f64, b: &ExactBranch) -> Result<Value, CliError> {
    let spectrum = exact_stability(gamma, alpha, b.psi)?;
    let (ok, margin) = exact_contact_ok(alpha, b.psi);
    Ok(json!({
        "psi": b.psi,
        "verdict": spectrum.verdict,
        "eigenvalues": spectrum.eigenvalues,
        "contact_margin": margin,
        "contact_ok": ok,
    }))
}

fn cmd_exact(args: &ParamArgs) -> Result<Value, CliError> {
    let inputs = load(args, true)?;
    let (p, shift) = inputs.params.normalized();
    let phases = exact_phases(p.gamma, p.alpha)?;
    Ok(json!({
        "gamma": p.gamma,
        "alpha": p.alpha,
        "time_shift": shift,
        "stable": branch_json(p.gamma, p.alpha, &phases.stable)?,
        "unstable": branch_json(p.gamma, p.alpha, &phases.unstable)?,
    }))
}

fn cmd_approx(args: &ParamArgs) -> Result<Value, CliError> {
    let p = load(args, false)?.params;
    let (gamma, eps, mu) = (p.gamma, p.eps(), p.mu());
    let phi0 = phi0_stable(gamma, mu)?;
    let (c, d) = cd_coefficients(gamma, mu)?;
    Ok(json!({
        "gamma": gamma,
        "eps": eps,
        "mu": mu,
        "phi0": phi0,
        "C": c,
        "D": d,
        "eps_max_stability": stability_bound_eps(gamma, mu)?,
        "eps_max_contact": contact_bound_eps(gamma, mu)?,
    }))
}

fn cmd_bounds(args: &ParamArgs) -> Result<Value, CliError> {
    let p = load(args, false)?.params;
    let (gamma, eps, mu) = (p.gamma, p.eps(), p.mu());
    let first_order = match (stability_bound_eps(gamma, mu), contact_bound_eps(gamma, mu)) {
        (Ok(stab), Ok(contact)) => json!({
            "exists": true,
            "stability": { "bound": stab, "ok": eps < stab },
            "contact": { "bound": contact, "ok": eps < contact },
        }),
        (Err(e @ Error::InvalidParameter { .. }), _)
        | (_, Err(e @ Error::InvalidParameter { .. })) => return Err(e.into()),
        _ => json!({ "exists": false }),
    };
    let small = |rho: Rotation| {
        let exists = small_amp_solution(rho, gamma, eps, mu).is_ok();
        let check = small_amp_contact_bound(rho, gamma, eps, mu);
        json!({
            "exists": exists,
            "contact": { "bound": check.bound, "value": check.value, "ok": check.ok },
        })
    };
    let twirlable = first_order["exists"] == json!(true)
        && first_order["stability"]["ok"] == json!(true)
        && first_order["contact"]["ok"] == json!(true);
    Ok(json!({
        "gamma": gamma,
        "eps": eps,
        "mu": mu,
        "first_order": first_order,
        "small_amplitude": { "cw": small(Rotation::Clockwise), "ccw": small(Rotation::Counterclockwise) },
        "twirlable": twirlable,
    }))
}

fn cmd_stability(
    args: &ParamArgs,
    step: Option<f64>,
    critical: bool,
    tolerance: f64,
) -> Result<Value, CliError> {
    let p = load(args, false)?.params;
    let (gamma, eps, mu) = (p.gamma, p.eps(), p.mu());
    let hill = assemble_hill(gamma, mu, eps)?;
    let m = monodromy(&hill, step.unwrap_or(DEFAULT_STEP))?;
    let report = floquet_classify(&m, gamma)?;
    let mut v = json!({
        "gamma": gamma,
        "eps": eps,
        "mu": mu,
        "p": hill.p,
        "multipliers": report.multipliers,
        "determinant": report.determinant,
        "verdict": report.verdict,
        "analytic_bound": stability_bound_eps(gamma, mu)?,
    });
    if critical {
        v["numeric_critical"] = json!(numeric_eps_critical(gamma, mu, tolerance)?);
    }
    Ok(v)
}

fn cmd_simulate(
    args: &ParamArgs,
    run: &RunArgs,
    out: Option<&Path>,
    report: Option<&Path>,
) -> Result<Value, CliError> {
    let inputs = load(args, false)?;
    let cfg = &inputs.config;
    let opts = run_options(run, cfg)?;
    let out = out.map(Path::to_path_buf).or_else(|| cfg.out.clone());
    let report = report
        .map(Path::to_path_buf)
        .or_else(|| cfg.report.clone())
        .or_else(|| out.as_ref().map(|o| o.with_extension("capture.json")));
    if let Some(o) = &out {
        check_writable("out", o)?;
    }
    if let Some(r) = &report {
        check_writable("report", r)?;
    }

    let p = inputs.params;
    let s0 = cfg.initial.unwrap_or_else(|| seed_state(opts.seed, &p));
    let traj = integrate_strided(&p, &s0, opts.tau_end, opts.step, opts.stride)?;
    let capture = detect_capture(&traj, DEFAULT_WINDOW)?;

    if let Some(o) = &out {
        let mut w = create(o)?;
        traj.write_csv(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| CliError::Io(format!("{}: {e}", o.display())))?;
    }
    if let Some(r) = &report {
        let mut w = create(r)?;
        serde_json::to_writer_pretty(&mut w, &capture)
            .map_err(|e| CliError::Io(e.to_string()))
            .and_then(|_| w.flush().map_err(|e| CliError::Io(e.to_string())))?;
    }
    Ok(json!({
        "gamma": p.gamma,
        "alpha": p.alpha,
        "beta": p.beta,
        "initial": s0,
        "samples": traj.samples.len(),
        "capture": capture,
    }))
}

enum Model {
    Exact(ExactBranch),
    FirstOrder(FirstOrderSolution),
    SmallAmp(crate::perturb::SmallAmpSolution),
}

impl Model {
    fn branch(&self) -> &dyn AnalyticBranch {
        match self {
            Model::Exact(b) => b,
            Model::FirstOrder(b) => b,
            Model::SmallAmp(b) => b,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Model::Exact(_) => "exact",
            Model::FirstOrder(_) => "first-order",
            Model::SmallAmp(_) => "small-amp",
        }
    }
}

fn cmd_compare(
    args: &ParamArgs,
    run: &RunArgs,
    approx: Option<&str>,
    out: Option<&Path>,
) -> Result<Value, CliError> {
    let inputs = load(args, false)?;
    let opts = run_options(run, &inputs.config)?;
    let out = out
        .map(Path::to_path_buf)
        .or_else(|| inputs.config.out.clone());
    if let Some(o) = &out {
        check_writable("out", o)?;
    }
    let p = inputs.params;
    let (gamma, eps, mu) = (p.gamma, p.eps(), p.mu());
    let default = match (opts.seed, eps == 0.0) {
        (Rotation::Clockwise, true) => "exact",
        (Rotation::Clockwise, false) => "first-order",
        (Rotation::Counterclockwise, _) => "small-amp",
    };
    let model = match approx.unwrap_or(default) {
        "exact" => {
            if eps != 0.0 {
                return Err(CliError::Validation(
                    "approx: exact needs alpha == beta".into(),
                ));
            }
            Model::Exact(exact_phases(gamma, p.alpha)?.stable)
        }
        "first-order" => Model::FirstOrder(FirstOrderSolution::new(gamma, eps, mu)?),
        "small-amp" => Model::SmallAmp(small_amp_solution(opts.seed, gamma, eps, mu)?),
        other => {
            return Err(CliError::Validation(format!(
                "approx: expected exact, first-order or small-amp, got `{other}`"
            )))
        }
    };
    let branch = model.branch();
    let s0 = branch.state_at(0.0);
    let traj = integrate_strided(&p, &s0, opts.tau_end, opts.step, opts.stride)?;
    if let Some(o) = &out {
        let mut w = create(o)?;
        traj.write_csv(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| CliError::Io(format!("{}: {e}", o.display())))?;
    }
    let metrics = compare_to_analytic(&traj, branch)?;
    let capture = detect_capture(&traj, DEFAULT_WINDOW)?;
    Ok(json!({
        "model": model.name(),
        "rho": branch.rho(),
        "gamma": gamma,
        "eps": eps,
        "mu": mu,
        "metrics": metrics,
        "capture": capture,
    }))
}

fn cmd_sweep(
    args: &ParamArgs,
    run: &RunArgs,
    axis1: Option<&str>,
    axis2: Option<&str>,
    out: Option<&Path>,
) -> Result<Value, CliError> {
    let inputs = load(args, false)?;
    let cfg = &inputs.config;
    let opts = run_options(run, cfg)?;
    let a1 = axis1
        .map(str::to_owned)
        .or_else(|| cfg.axis1.clone())
        .ok_or_else(|| {
            CliError::Validation("axis1: missing --axis1 name:start:stop:count".into())
        })?;
    let a1: SweepAxis = a1.parse()?;
    let a2: SweepAxis = match axis2.map(str::to_owned).or_else(|| cfg.axis2.clone()) {
        Some(s) => s.parse()?,
        None => SweepAxis {
            name: ParamName::Alpha,
            values: vec![inputs.params.alpha],
        },
    };
    if a1.name == a2.name && a2.values.len() > 1 {
        return Err(CliError::Validation("axis2: must differ from axis1".into()));
    }
    let out = out.map(Path::to_path_buf).or_else(|| cfg.out.clone());
    if let Some(o) = &out {
        check_writable("out", o)?;
    }
    let protocol = SweepProtocol {
        tau_end: opts.tau_end,
        step: opts.step,
        stride: opts.stride,
        window: DEFAULT_WINDOW,
    };
    let map = sweep(&inputs.params, &a1, &a2, &protocol)?;
    if let Some(o) = &out {
        let mut w = create(o)?;
        map.write_csv(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| CliError::Io(format!("{}: {e}", o.display())))?;
    }
    Ok(json!({
        "axis1": a1.name,
        "axis2": a2.name,
        "cells": map.cells,
    }))
}

/// Indented `key: value` text with numbers rounded to six digits.
pub fn render_human(v: &Value) -> String {
    let mut s = String::new();
    render_into(&mut s, v, 0);
    s.trim_end().to_owned()
}

/// Six digits after the point, switching to exponent form for tiny values.
pub fn fmt6(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-3 {
        format!("{x:.6e}")
    } else {
        format!("{x:.6}")
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => fmt6(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        other => other.to_string(),
    }
}

fn render_into(s: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) => {
                        s.push_str(&format!("{pad}{k}:\n"));
                        render_into(s, val, depth + 1);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                        s.push_str(&format!("{pad}{k}:\n"));
                        for (i, item) in items.iter().enumerate() {
                            s.push_str(&format!("{pad}  [{i}]\n"));
                            render_into(s, item, depth + 2);
                        }
                    }
                    _ => s.push_str(&format!("{pad}{k}: {}\n", inline(val))),
                }
            }
        }
        other => s.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(items) => format!(
            "[{}]",
            items.iter().map(inline).collect::<Vec<_>>().join(", ")
        ),
        other => scalar(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("hulahoop").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn unknown_subcommand_is_usage_error() {
        let (code, _, err) = run_capture(&["twirl"]);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, _) =
            run_capture(&["exact", "--gamma", "0.1", "--alpha", "0.2", "--zeta", "1"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn missing_parameter_names_field() {
        let (code, _, err) = run_capture(&["approx", "--gamma", "0.1", "--alpha", "0.2"]);
        assert_eq!(code, 2);
        assert!(err.contains("beta"));
    }

    #[test]
    fn human_rendering_rounds() {
        let v = json!({"a": 1.23456789, "b": {"c": [1.0, 2.5e-7]}, "d": "x"});
        let text = render_human(&v);
        assert!(text.contains("a: 1.234568"));
        assert!(text.contains("c: [1.000000, 2.500000e-7]"));
        assert!(text.contains("d: x"));
    }

    #[test]
    fn config_needs_exactly_one_block() {
        let cfg = RunConfig::default();
        assert!(
            matches!(cfg.resolve_params(), Err(CliError::Validation(m)) if m.starts_with("params"))
        );
        let cfg = RunConfig {
            params: Some(Params::new(0.1, 0.2, 0.2)),
            dimensional: Some(DimensionalBlock {
                m_kg: 1.0,
                big_r_m: 0.5,
                r_m: 0.1,
                k_n_m_s: 0.0,
                a_m: 0.1,
                b_m: 0.1,
                omega_rad_s: 1.0,
            }),
            ..Default::default()
        };
        assert!(cfg.resolve_params().is_err());
    }
}
