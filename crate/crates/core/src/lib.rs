//! Twirling of a hula-hoop whose supporting waist moves along an ellipse.
//!
//! The hoop angle `phi` obeys the nondimensional equation
//!
//! ```text
//! phi'' + gamma phi' + alpha sin(tau) sin(phi) + beta cos(tau) cos(phi) = 0
//! ```
//!
//! and stays on the waist while the contact margin
//! `phi'^2 + 2 (alpha sin(tau) cos(phi) - beta cos(tau) sin(phi))` is positive.
//!
//! The crate is organized by analysis:
//!
//! - [`model`]: parameters, the equation of motion, the contact margin and
//!   dimensional force reconstruction.
//! - [`exact`]: constant-speed rotations for circular waist motion and their
//!   linear stability.
//! - [`perturb`]: first-order solutions for slightly elliptic motion,
//!   analytic stability and contact bounds, and the small-amplitude
//!   clockwise/counterclockwise branches.
//! - [`stability`]: the damped Mathieu–Hill variational equation, its
//!   monodromy matrix and Floquet classification.
//! - [`sim`]: fixed-step integration, capture and contact-loss detection,
//!   analytic-vs-numeric comparison and regime sweeps.
//! - [`cli`]: the `hulahoop` command line front end.

pub mod cli;
pub mod error;
pub mod exact;
pub mod model;
pub mod ode;
pub mod perturb;
pub mod sim;
pub mod stability;

pub use error::{Error, Result};
pub use exact::{exact_contact_ok, exact_phases, exact_stability, ExactBranch, ExactPhases};
pub use model::{DimensionalParams, Forces, Params, State};
pub use perturb::{FirstOrderSolution, Rotation, SmallAmpSolution};
pub use sim::{CaptureReport, RegimeMap, Trajectory};
pub use stability::{FloquetReport, MathieuHill};

/// Three-way outcome shared by the linear and Floquet stability checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Marginal => "marginal",
        };
        f.write_str(s)
    }
}

/// `acos` that absorbs round-off just outside `[-1, 1]`.
///
/// Arguments within `1e-12` of the interval are clamped; anything further
/// out is rejected with `NoRotatingSolution`.
pub(crate) fn acos_clamped(x: f64, condition: &'static str) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !x.is_finite() || x.abs() > 1.0 + SLACK {
        return Err(Error::NoRotatingSolution { condition });
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}
