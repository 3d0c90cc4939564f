//! Constant-speed rotations `phi = tau + psi` for circular waist motion
//! (`alpha == beta`).
//!
//! Substituting into `phi'' + gamma phi' + alpha cos(phi - tau) = 0` leaves
//! `cos psi = -gamma / alpha`, so a rotation exists only for
//! `|gamma| <= |alpha|`. The two principal phases `-acos(-gamma/alpha)` and
//! `+acos(-gamma/alpha)` are the attracting and repelling rotations when
//! `0 < gamma < alpha`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{acos_clamped, Verdict};

/// Tolerance on `cos psi + gamma / alpha` for a phase to count as a solution.
pub const SOLUTION_TOL: f64 = 1e-9;

/// `|sin psi|` below this is treated as zero in the stability verdict.
const SIN_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchKind {
    /// Phase `-acos(-gamma/alpha)`, `sin psi <= 0`.
    Stable,
    /// Phase `+acos(-gamma/alpha)`, `sin psi >= 0`.
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactBranch {
    pub psi: f64,
    pub branch: BranchKind,
    /// Number of whole turns added to the principal phase.
    pub k_offset: i64,
}

impl ExactBranch {
    /// The same rotation shifted by `k` whole turns.
    pub fn on_sheet(&self, k: i64) -> ExactBranch {
        ExactBranch {
            psi: self.psi + 2.0 * std::f64::consts::PI * (k - self.k_offset) as f64,
            k_offset: k,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactPhases {
    pub stable: ExactBranch,
    pub unstable: ExactBranch,
}

/// Eigenvalues of the linearization about a rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearizedSpectrum {
    pub eigenvalues: [Complex64; 2],
    pub verdict: Verdict,
}

/// Both principal rotation phases for damping `gamma` and amplitude `alpha`.
///
/// Requires `alpha > 0`; use [`Params::normalized`](crate::Params::normalized)
/// to bring `alpha < 0` into range first.
pub fn exact_phases(gamma: f64, alpha: f64) -> Result<ExactPhases> {
    if !gamma.is_finite() {
        return Err(Error::invalid("gamma", "must be finite"));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::invalid(
            "alpha",
            format!("must be positive and finite, got {alpha}"),
        ));
    }
    if gamma.abs() > alpha {
        return Err(Error::NoRotatingSolution {
            condition: "|gamma| <= |alpha|",
        });
    }
    let base = acos_clamped(-gamma / alpha, "|gamma| <= |alpha|")?;
    Ok(ExactPhases {
        stable: ExactBranch {
            psi: -base,
            branch: BranchKind::Stable,
            k_offset: 0,
        },
        unstable: ExactBranch {
            psi: base,
            branch: BranchKind::Unstable,
            k_offset: 0,
        },
    })
}

/// Linear stability of the rotation `phi = tau + psi`.
///
/// Perturbations obey `eta'' + gamma eta' - alpha sin(psi) eta = 0`. By the
/// Routh–Hurwitz conditions for a quadratic the rotation is asymptotically
/// stable iff `gamma > 0` and `sin psi < 0`. Zero damping or `sin psi = 0`
/// (the `gamma = alpha` fold) is reported as [`Verdict::Marginal`].
pub fn exact_stability(gamma: f64, alpha: f64, psi: f64) -> Result<LinearizedSpectrum> {
    let cos_psi = psi.cos();
    let expected = -gamma / alpha;
    if !((cos_psi - expected).abs() <= SOLUTION_TOL) {
        return Err(Error::NotASolution { cos_psi, expected });
    }
    let sin_psi = psi.sin();
    let stiffness = -alpha * sin_psi;
    let eigenvalues = quadratic_roots(gamma, stiffness);

    let verdict = if gamma < 0.0 || sin_psi > SIN_ZERO_TOL {
        Verdict::Unstable
    } else if gamma == 0.0 || sin_psi.abs() <= SIN_ZERO_TOL {
        Verdict::Marginal
    } else {
        Verdict::Stable
    };
    Ok(LinearizedSpectrum {
        eigenvalues,
        verdict,
    })
}

/// Contact margin `1 - 2 alpha sin psi` of a rotation; contact holds iff it
/// is positive. The margin does not depend on time.
pub fn exact_contact_ok(alpha: f64, psi: f64) -> (bool, f64) {
    let margin = 1.0 - 2.0 * alpha * psi.sin();
    (margin > 0.0, margin)
}

/// Roots of `l^2 + b l + c = 0`.
fn quadratic_roots(b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * c;
    let re = -0.5 * b;
    if disc >= 0.0 {
        let half = 0.5 * disc.sqrt();
        // larger root first
        [
            Complex64::new(re + half, 0.0),
            Complex64::new(re - half, 0.0),
        ]
    } else {
        let half = 0.5 * (-disc).sqrt();
        [Complex64::new(re, half), Complex64::new(re, -half)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// Independent check: residual of a complex root in the characteristic polynomial.
    fn char_residual(l: Complex64, gamma: f64, alpha: f64, psi: f64) -> f64 {
        (l * l + gamma * l - alpha * psi.sin()).norm()
    }

    #[test]
    fn phases_undamped() {
        let ph = exact_phases(0.0, 0.2).unwrap();
        assert_relative_eq!(ph.stable.psi, -FRAC_PI_2, epsilon = 1e-15);
        assert_relative_eq!(ph.unstable.psi, FRAC_PI_2, epsilon = 1e-15);
    }

    #[test]
    fn phases_damped() {
        let ph = exact_phases(0.1, 0.2).unwrap();
        assert_relative_eq!(ph.stable.psi, -2.0 * PI / 3.0, epsilon = 1e-14);
        assert_relative_eq!(ph.stable.psi, -2.094395, epsilon = 1e-6);
        assert_relative_eq!(ph.unstable.psi, 2.0 * PI / 3.0, epsilon = 1e-14);
        assert_eq!(ph.stable.branch, BranchKind::Stable);
    }

    #[test]
    fn phases_need_rotation_window() {
        assert!(matches!(
            exact_phases(0.3, 0.2),
            Err(Error::NoRotatingSolution { .. })
        ));
        assert!(matches!(
            exact_phases(-0.3, 0.2),
            Err(Error::NoRotatingSolution { .. })
        ));
        assert!(matches!(
            exact_phases(0.1, -0.2),
            Err(Error::InvalidParameter { .. })
        ));
        // boundary gamma == alpha is allowed
        let ph = exact_phases(0.2, 0.2).unwrap();
        assert_relative_eq!(ph.stable.psi, -PI, epsilon = 1e-15);
    }

    #[test]
    fn stability_of_damped_branches() {
        let s = exact_stability(0.1, 0.2, -2.094395102393195).unwrap();
        assert_eq!(s.verdict, Verdict::Stable);
        // l = -0.05 +- i sqrt(0.2 sin(pi/3) - 0.0025)
        let im = (0.2 * (PI / 3.0).sin() - 0.0025).sqrt();
        assert_relative_eq!(s.eigenvalues[0].re, -0.05, epsilon = 1e-15);
        assert_relative_eq!(s.eigenvalues[0].im.abs(), im, epsilon = 1e-12);
        assert_relative_eq!(im, 0.413, epsilon = 1e-3);
        for l in s.eigenvalues {
            assert!(char_residual(l, 0.1, 0.2, -2.094395102393195) < 1e-14);
        }

        let u = exact_stability(0.1, 0.2, 2.094395102393195).unwrap();
        assert_eq!(u.verdict, Verdict::Unstable);
        assert!(u.eigenvalues.iter().any(|l| l.im == 0.0 && l.re > 0.0));
        for l in u.eigenvalues {
            assert!(char_residual(l, 0.1, 0.2, 2.094395102393195) < 1e-14);
        }
    }

    #[test]
    fn undamped_is_marginal() {
        let s = exact_stability(0.0, 0.2, -FRAC_PI_2).unwrap();
        assert_eq!(s.verdict, Verdict::Marginal);
        assert_eq!(s.eigenvalues[0].re, 0.0);
        assert_relative_eq!(s.eigenvalues[0].im.abs(), 0.2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn fold_point_is_marginal() {
        let ph = exact_phases(0.2, 0.2).unwrap();
        assert_eq!(
            exact_stability(0.2, 0.2, ph.stable.psi).unwrap().verdict,
            Verdict::Marginal
        );
    }

    #[test]
    fn negative_damping_destabilizes_both() {
        let ph = exact_phases(-0.05, 0.2).unwrap();
        for b in [ph.stable, ph.unstable] {
            assert_eq!(
                exact_stability(-0.05, 0.2, b.psi).unwrap().verdict,
                Verdict::Unstable
            );
        }
    }

    #[test]
    fn rejects_non_solution_phase() {
        assert!(matches!(
            exact_stability(0.1, 0.2, 0.3),
            Err(Error::NotASolution { .. })
        ));
    }

    #[test]
    fn contact_margins() {
        let (ok, m) = exact_contact_ok(0.2, -FRAC_PI_2);
        assert!(ok);
        assert_relative_eq!(m, 1.4, epsilon = 1e-15);
        let (ok, m) = exact_contact_ok(0.2, FRAC_PI_2);
        assert!(ok);
        assert_relative_eq!(m, 0.6, epsilon = 1e-15);
        let (ok, m) = exact_contact_ok(0.6, FRAC_PI_2);
        assert!(!ok);
        assert_relative_eq!(m, -0.2, epsilon = 1e-15);
    }

    #[test]
    fn sheets_shift_by_whole_turns() {
        let b = exact_phases(0.1, 0.2).unwrap().stable.on_sheet(2);
        assert_eq!(b.k_offset, 2);
        assert_relative_eq!(b.psi, -2.0 * PI / 3.0 + 4.0 * PI, epsilon = 1e-13);
        assert_eq!(
            exact_stability(0.1, 0.2, b.psi).unwrap().verdict,
            Verdict::Stable
        );
    }

    proptest! {
        #[test]
        fn branches_solve_the_circular_equation(alpha in 0.01f64..2.0, frac in 0.0f64..1.0, tau in 0.0f64..63.0) {
            let gamma = frac * alpha;
            let ph = exact_phases(gamma, alpha).unwrap();
            for b in [ph.stable, ph.unstable] {
                // phi = tau + psi: phi'' = 0, phi' = 1
                let res = gamma + alpha * ((tau + b.psi) - tau).cos();
                prop_assert!(res.abs() < 1e-12);
            }
        }

        #[test]
        fn stable_phase_quadrant_and_contact(alpha in 0.01f64..2.0, frac in 0.0f64..=1.0) {
            let gamma = frac * alpha;
            let ph = exact_phases(gamma, alpha).unwrap();
            prop_assert!(ph.stable.psi >= -PI && ph.stable.psi <= -FRAC_PI_2);
            let (ok, m) = exact_contact_ok(alpha, ph.stable.psi);
            prop_assert!(ok);
            prop_assert!(m >= 1.0 - 1e-15);
        }

        #[test]
        fn verdict_matches_eigenvalue_signs(alpha in 0.01f64..2.0, frac in 0.01f64..0.99) {
            let gamma = frac * alpha;
            let ph = exact_phases(gamma, alpha).unwrap();
            let s = exact_stability(gamma, alpha, ph.stable.psi).unwrap();
            prop_assert_eq!(s.verdict, Verdict::Stable);
            prop_assert!(s.eigenvalues.iter().all(|l| l.re < 0.0));
            let u = exact_stability(gamma, alpha, ph.unstable.psi).unwrap();
            prop_assert_eq!(u.verdict, Verdict::Unstable);
            prop_assert!(u.eigenvalues.iter().any(|l| l.re > 0.0));
        }
    }
}
