//! Floquet analysis of the variational equation about the first-order
//! rotation:
//!
//! ```text
//! u'' + gamma u' + (p + eps Phi(2 tau)) u = 0,
//! Phi = (gamma C + 1) sin(2 tau + phi0) + gamma D cos(2 tau + phi0)
//! ```
//!
//! The modulation has period `pi` in `tau`, so the monodromy matrix is the
//! period-`pi` map. Using `2 pi` would square the multipliers.
//!
//! Nothing here consults the analytic bound from
//! [`perturb::stability_bound_eps`](crate::perturb::stability_bound_eps)
//! except to size the bisection bracket in [`numeric_eps_critical`].

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::rk4_fixed;
use crate::perturb::{cd_coefficients, phi0_stable, stability_bound_eps, stiffness};
use crate::Verdict;

/// Multipliers within this distance of the unit circle are [`Verdict::Marginal`].
pub const MULTIPLIER_TOL: f64 = 1e-9;
/// Allowed `|det M - exp(-gamma pi)|` before the integration is deemed broken.
pub const DET_DRIFT_TOL: f64 = 1e-6;
/// Default integration step, shared with the trajectory integrator.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Fewest substeps per period accepted by [`monodromy`].
pub const MIN_SUBSTEPS: usize = 1000;

/// Damped Mathieu–Hill equation with the modulation of the first-order rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MathieuHill {
    pub gamma: f64,
    /// Mean stiffness `sqrt(mu^2 - gamma^2)`.
    pub p: f64,
    pub eps: f64,
    pub phi0: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D")]
    pub d: f64,
}

impl MathieuHill {
    /// `Phi(2 tau)`.
    pub fn modulation(&self, tau: f64) -> f64 {
        let (s, c) = (2.0 * tau + self.phi0).sin_cos();
        (self.gamma * self.c + 1.0) * s + self.gamma * self.d * c
    }

    pub fn stiffness_at(&self, tau: f64) -> f64 {
        self.p + self.eps * self.modulation(tau)
    }

    /// Amplitude of `Phi`: `sqrt((gamma C + 1)^2 + gamma^2 D^2)`.
    pub fn modulation_amplitude(&self) -> f64 {
        (self.gamma * self.c + 1.0).hypot(self.gamma * self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloquetReport {
    pub multipliers: [Complex64; 2],
    pub determinant: f64,
    pub verdict: Verdict,
}

/// Variational equation about the stable first-order rotation for
/// `0 <= gamma <= mu`.
pub fn assemble_hill(gamma: f64, mu: f64, eps: f64) -> Result<MathieuHill> {
    if !eps.is_finite() {
        return Err(Error::invalid("eps", format!("must be finite, got {eps}")));
    }
    let phi0 = phi0_stable(gamma, mu)?;
    let (c, d) = cd_coefficients(gamma, mu)?;
    Ok(MathieuHill {
        gamma,
        p: stiffness(gamma, mu),
        eps,
        phi0,
        c,
        d,
    })
}

/// Period-`pi` map of the variational equation.
///
/// Column `j` is the state after one period starting from the `j`-th unit
/// vector. `step` is rounded so that a whole number of RK4 steps (at least
/// [`MIN_SUBSTEPS`]) fits into the period.
pub fn monodromy(h: &MathieuHill, step: f64) -> Result<Matrix2<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::invalid(
            "step",
            format!("must be positive, got {step}"),
        ));
    }
    let n = (PI / step).round() as usize;
    if n < MIN_SUBSTEPS {
        return Err(Error::invalid(
            "step",
            format!("{step} gives {n} substeps per period, need at least {MIN_SUBSTEPS}"),
        ));
    }
    let f = |t: f64, y: &[f64; 2]| [y[1], -h.gamma * y[1] - h.stiffness_at(t) * y[0]];
    let c0 = rk4_fixed(&f, 0.0, &[1.0, 0.0], PI, n);
    let c1 = rk4_fixed(&f, 0.0, &[0.0, 1.0], PI, n);
    Ok(Matrix2::new(c0[0], c1[0], c0[1], c1[1]))
}

/// Floquet multipliers and verdict for a monodromy matrix.
///
/// Stable iff both multipliers lie inside `1 - MULTIPLIER_TOL`, unstable if
/// either exceeds `1 + MULTIPLIER_TOL`. The determinant is checked against
/// Liouville's `exp(-gamma pi)` to catch a misconfigured integration.
pub fn floquet_classify(m: &Matrix2<f64>, gamma: f64) -> Result<FloquetReport> {
    let det = m.determinant();
    let expected = (-gamma * PI).exp();
    if !((det - expected).abs() <= DET_DRIFT_TOL) {
        return Err(Error::DeterminantDrift { det, expected });
    }
    let multipliers = eig2(m);
    let largest = multipliers[0].norm().max(multipliers[1].norm());
    let verdict = if largest > 1.0 + MULTIPLIER_TOL {
        Verdict::Unstable
    } else if largest < 1.0 - MULTIPLIER_TOL {
        Verdict::Stable
    } else {
        Verdict::Marginal
    };
    Ok(FloquetReport {
        multipliers,
        determinant: det,
        verdict,
    })
}

/// Monodromy plus classification at the default step.
pub fn floquet(gamma: f64, mu: f64, eps: f64) -> Result<FloquetReport> {
    let h = assemble_hill(gamma, mu, eps)?;
    floquet_classify(&monodromy(&h, DEFAULT_STEP)?, gamma)
}

/// Smallest unstable ellipticity found by bisection on the Floquet verdict.
///
/// The bracket is `[0, 4 * analytic bound]`; the verdict must be stable at
/// the lower end and not stable at the upper end, else
/// [`Error::BracketFailure`]. Bisection stops once the bracket is narrower
/// than `tolerance` and returns its upper end.
pub fn numeric_eps_critical(gamma: f64, mu: f64, tolerance: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < mu) {
        return Err(Error::invalid(
            "gamma",
            format!("need 0 < gamma < mu, got gamma={gamma}, mu={mu}"),
        ));
    }
    if !(tolerance > 0.0) {
        return Err(Error::invalid("tolerance", "must be positive"));
    }
    let stable =
        |eps: f64| -> Result<bool> { Ok(floquet(gamma, mu, eps)?.verdict == Verdict::Stable) };
    let (mut lo, mut hi) = (0.0, 4.0 * stability_bound_eps(gamma, mu)?);
    if !stable(lo)? || stable(hi)? {
        return Err(Error::BracketFailure { lo, hi });
    }
    while hi - lo >= tolerance {
        let mid = 0.5 * (lo + hi);
        if stable(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Eigenvalues of a real 2x2 matrix, larger modulus first.
fn eig2(m: &Matrix2<f64>) -> [Complex64; 2] {
    let tr = m.trace();
    let det = m.determinant();
    let disc = 0.25 * tr * tr - det;
    let half = 0.5 * tr;
    if disc >= 0.0 {
        let r = disc.sqrt();
        // avoid cancellation in the smaller root
        let big = if half >= 0.0 { half + r } else { half - r };
        let small = if big != 0.0 { det / big } else { half - r };
        [Complex64::new(big, 0.0), Complex64::new(small, 0.0)]
    } else {
        let r = (-disc).sqrt();
        [Complex64::new(half, r), Complex64::new(half, -r)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn constant(gamma: f64, p: f64) -> MathieuHill {
        MathieuHill {
            gamma,
            p,
            eps: 0.0,
            phi0: 0.0,
            c: 0.0,
            d: 0.0,
        }
    }

    #[test]
    fn assemble_values() {
        let h = assemble_hill(0.0, 0.3, 0.0).unwrap();
        assert_relative_eq!(h.p, 0.3, epsilon = 1e-15);
        let h = assemble_hill(0.2, 0.3, 0.1).unwrap();
        assert_relative_eq!(h.p, 0.05f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(h.p, 0.223607, epsilon = 1e-6);
        assert_eq!(assemble_hill(0.2, 0.2, 0.1).unwrap().p, 0.0);
        assert!(assemble_hill(0.3, 0.2, 0.1).is_err());
    }

    #[test]
    fn modulation_has_period_pi() {
        let h = assemble_hill(0.2, 0.3, 0.1).unwrap();
        for i in 0..100 {
            let t = 0.137 * i as f64;
            assert_relative_eq!(h.modulation(t), h.modulation(t + PI), epsilon = 1e-12);
        }
    }

    #[test]
    fn undamped_constant_coefficients() {
        let p: f64 = 0.3;
        let m = monodromy(&constant(0.0, p), DEFAULT_STEP).unwrap();
        let r = floquet_classify(&m, 0.0).unwrap();
        assert_relative_eq!(r.determinant, 1.0, epsilon = 1e-10);
        for mu in r.multipliers {
            assert_relative_eq!(mu.norm(), 1.0, epsilon = 1e-9);
        }
        let arg = r.multipliers[0].arg().abs();
        assert_relative_eq!(arg, p.sqrt() * PI, epsilon = 1e-9);
    }

    #[test]
    fn damped_constant_coefficients() {
        let m = monodromy(&constant(0.1, 0.03), DEFAULT_STEP).unwrap();
        assert_relative_eq!(m.determinant(), (-0.1 * PI).exp(), epsilon = 1e-12);
        assert_relative_eq!(m.determinant(), 0.730403, epsilon = 1e-6);
        let r = floquet_classify(&m, 0.1).unwrap();
        assert_eq!(r.verdict, Verdict::Stable);
        // closed form: exp(l pi) with l = -0.05 +- i sqrt(0.0275)
        let expected = Complex64::new(-0.05 * PI, 0.0275f64.sqrt() * PI).exp();
        assert_relative_eq!(r.multipliers[0].re, expected.re, epsilon = 1e-10);
        assert_relative_eq!(
            r.multipliers[0].im.abs(),
            expected.im.abs(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn liouville_holds_with_modulation() {
        let h = assemble_hill(0.2, 0.3, 0.1).unwrap();
        let m = monodromy(&h, DEFAULT_STEP).unwrap();
        assert!((m.determinant() - (-0.2 * PI).exp()).abs() < 1e-8);
        assert_relative_eq!(m.determinant(), 0.533488, epsilon = 1e-6);
    }

    #[test]
    fn identity_is_marginal() {
        let r = floquet_classify(&Matrix2::identity(), 0.0).unwrap();
        assert_eq!(r.verdict, Verdict::Marginal);
        assert_eq!(r.multipliers, [Complex64::new(1.0, 0.0); 2]);
    }

    #[test]
    fn determinant_drift_is_reported() {
        let m = Matrix2::new(2.0, 0.0, 0.0, 1.0);
        assert!(matches!(
            floquet_classify(&m, 0.0),
            Err(Error::DeterminantDrift { .. })
        ));
    }

    #[test]
    fn coarse_step_rejected() {
        assert!(monodromy(&constant(0.1, 0.3), 0.01).is_err());
    }

    #[test]
    fn large_ellipticity_is_unstable() {
        // far past the numeric boundary (about 1.49 here)
        assert_eq!(floquet(0.05, 0.2, 2.0).unwrap().verdict, Verdict::Unstable);
        // twice the analytic bound is still inside the stable region at this stiffness
        let twice = 2.0 * stability_bound_eps(0.05, 0.2).unwrap();
        assert_eq!(floquet(0.05, 0.2, twice).unwrap().verdict, Verdict::Stable);
    }

    #[test]
    fn zero_eps_matches_constant_coefficient_rule() {
        for (g, mu) in [(0.1, 0.2), (0.0, 0.3), (0.2, 0.2), (0.05, 1.3)] {
            let r = floquet(g, mu, 0.0).unwrap();
            let expected = if g > 0.0 && stiffness(g, mu) > 0.0 {
                Verdict::Stable
            } else {
                Verdict::Marginal
            };
            assert_eq!(r.verdict, expected, "gamma={g} mu={mu}");
        }
    }

    #[test]
    fn step_halving_changes_multipliers_little() {
        let h = assemble_hill(0.2, 0.3, 0.3).unwrap();
        let a = eig2(&monodromy(&h, DEFAULT_STEP).unwrap());
        let b = eig2(&monodromy(&h, 0.5 * DEFAULT_STEP).unwrap());
        for i in 0..2 {
            assert!((a[i] - b[i]).norm() < 1e-7);
        }
    }

    #[test]
    fn bisection_contract() {
        // a point whose bracket does flip: gamma = 0.2, mu = 0.3
        let tol = 1e-3;
        let e = numeric_eps_critical(0.2, 0.3, tol).unwrap();
        assert_ne!(floquet(0.2, 0.3, e).unwrap().verdict, Verdict::Stable);
        assert_eq!(floquet(0.2, 0.3, e - tol).unwrap().verdict, Verdict::Stable);
    }

    #[test]
    fn bracket_failure_when_verdict_never_flips() {
        assert!(matches!(
            numeric_eps_critical(0.05, 0.2, 1e-3),
            Err(Error::BracketFailure { .. })
        ));
    }

    #[test]
    fn stable_below_critical_on_grid() {
        let crit = numeric_eps_critical(0.2, 0.3, 1e-3).unwrap();
        for k in 1..10 {
            let e = crit * k as f64 / 10.0;
            assert_eq!(
                floquet(0.2, 0.3, e).unwrap().verdict,
                Verdict::Stable,
                "eps={e}"
            );
        }
    }
}
