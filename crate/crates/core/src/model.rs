//! Parameters, equation of motion and contact condition.
//!
//! All integration runs on the nondimensional form with time `tau = omega t`.
//! [`DimensionalParams`] exists to feed [`nondimensionalize`] and to turn a
//! state back into physical forces with [`dimensional_forces`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical hoop, waist and excitation constants (SI units).
///
/// The waist center follows `x = a sin(omega t)`, `y = b cos(omega t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionalParams {
    /// Hoop mass, kg.
    pub m: f64,
    /// Hoop radius, m.
    #[serde(rename = "R")]
    pub big_r: f64,
    /// Waist radius, m.
    pub r: f64,
    /// Viscous friction coefficient, N·m·s.
    pub k: f64,
    /// Excitation amplitude along x, m.
    pub a: f64,
    /// Excitation amplitude along y, m.
    pub b: f64,
    /// Excitation frequency, rad/s.
    pub omega: f64,
}

impl DimensionalParams {
    /// Check `m > 0`, `R > r > 0`, `omega > 0`, `k >= 0` and finite amplitudes.
    pub fn validate(&self) -> Result<()> {
        let finite = |field: &'static str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(field, format!("must be finite, got {v}")))
            }
        };
        finite("m", self.m)?;
        finite("R", self.big_r)?;
        finite("r", self.r)?;
        finite("k", self.k)?;
        finite("a", self.a)?;
        finite("b", self.b)?;
        finite("omega", self.omega)?;
        if self.m <= 0.0 {
            return Err(Error::invalid(
                "m",
                format!("mass must be positive, got {}", self.m),
            ));
        }
        if self.r <= 0.0 {
            return Err(Error::invalid(
                "r",
                format!("waist radius must be positive, got {}", self.r),
            ));
        }
        if self.big_r <= self.r {
            return Err(Error::invalid(
                "R",
                format!(
                    "hoop radius {} must exceed waist radius {}",
                    self.big_r, self.r
                ),
            ));
        }
        if self.omega <= 0.0 {
            return Err(Error::invalid(
                "omega",
                format!("must be positive, got {}", self.omega),
            ));
        }
        if self.k < 0.0 {
            return Err(Error::invalid(
                "k",
                format!("must be non-negative, got {}", self.k),
            ));
        }
        Ok(())
    }
}

/// Nondimensional damping and excitation amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Names of the parameters that can be set individually, e.g. by sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamName {
    Gamma,
    Alpha,
    Beta,
    Eps,
    Mu,
}

impl std::str::FromStr for ParamName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gamma" => Ok(ParamName::Gamma),
            "alpha" => Ok(ParamName::Alpha),
            "beta" => Ok(ParamName::Beta),
            "eps" => Ok(ParamName::Eps),
            "mu" => Ok(ParamName::Mu),
            other => Err(Error::invalid(
                "axis",
                format!("unknown parameter `{other}` (expected gamma, alpha, beta, eps or mu)"),
            )),
        }
    }
}

impl std::fmt::Display for ParamName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ParamName::Gamma => "gamma",
            ParamName::Alpha => "alpha",
            ParamName::Beta => "beta",
            ParamName::Eps => "eps",
            ParamName::Mu => "mu",
        })
    }
}

impl Params {
    pub fn new(gamma: f64, alpha: f64, beta: f64) -> Self {
        Params { gamma, alpha, beta }
    }

    /// Build from damping, ellipticity `eps` and mean amplitude `mu`.
    pub fn from_eps_mu(gamma: f64, eps: f64, mu: f64) -> Self {
        Params {
            gamma,
            alpha: mu + eps,
            beta: mu - eps,
        }
    }

    /// Ellipticity `(alpha - beta) / 2`.
    pub fn eps(&self) -> f64 {
        0.5 * (self.alpha - self.beta)
    }

    /// Mean amplitude `(alpha + beta) / 2`.
    pub fn mu(&self) -> f64 {
        0.5 * (self.alpha + self.beta)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("gamma", self.gamma),
            ("alpha", self.alpha),
            ("beta", self.beta),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(field, format!("must be finite, got {v}")));
            }
        }
        Ok(())
    }

    pub fn get(&self, name: ParamName) -> f64 {
        match name {
            ParamName::Gamma => self.gamma,
            ParamName::Alpha => self.alpha,
            ParamName::Beta => self.beta,
            ParamName::Eps => self.eps(),
            ParamName::Mu => self.mu(),
        }
    }

    /// Copy with one parameter replaced. Setting `eps` keeps `mu` fixed and
    /// vice versa.
    pub fn with(&self, name: ParamName, value: f64) -> Self {
        match name {
            ParamName::Gamma => Params {
                gamma: value,
                ..*self
            },
            ParamName::Alpha => Params {
                alpha: value,
                ..*self
            },
            ParamName::Beta => Params {
                beta: value,
                ..*self
            },
            ParamName::Eps => Params::from_eps_mu(self.gamma, value, self.mu()),
            ParamName::Mu => Params::from_eps_mu(self.gamma, self.eps(), value),
        }
    }

    /// Map `alpha < 0` onto `alpha > 0` by shifting time by `pi`.
    ///
    /// Returns the transformed parameters and the time shift: a solution
    /// `phi(tau')` of the returned system is a solution `phi(tau + shift)` of
    /// the original one. Both amplitudes flip sign under the shift.
    pub fn normalized(&self) -> (Params, f64) {
        if self.alpha < 0.0 {
            (
                Params {
                    gamma: self.gamma,
                    alpha: -self.alpha,
                    beta: -self.beta,
                },
                std::f64::consts::PI,
            )
        } else {
            (*self, 0.0)
        }
    }
}

/// Hoop angle (unwrapped) and its rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub phi: f64,
    pub phi_dot: f64,
}

impl State {
    pub fn new(phi: f64, phi_dot: f64) -> Self {
        State { phi, phi_dot }
    }

    pub fn is_finite(&self) -> bool {
        self.phi.is_finite() && self.phi_dot.is_finite()
    }
}

/// Contact forces reconstructed from a dimensional state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Forces {
    /// Normal force N, newtons.
    pub normal: f64,
    /// Friction force F_T, newtons.
    pub friction: f64,
    /// Hoop spin rate about its center, rad/s.
    pub theta_dot: f64,
}

/// Apply `tau = omega t` scaling: `gamma = k / (2 m R^2 omega)`,
/// `alpha = a / (2 (R - r))`, `beta = b / (2 (R - r))`.
pub fn nondimensionalize(p: &DimensionalParams) -> Result<Params> {
    p.validate()?;
    let gap = 2.0 * (p.big_r - p.r);
    Ok(Params {
        gamma: p.k / (2.0 * p.m * p.big_r * p.big_r * p.omega),
        alpha: p.a / gap,
        beta: p.b / gap,
    })
}

/// Angular acceleration `phi''` of the equation of motion.
#[inline]
pub fn rhs(tau: f64, s: &State, p: &Params) -> f64 {
    let (sin_t, cos_t) = tau.sin_cos();
    let (sin_p, cos_p) = s.phi.sin_cos();
    -p.gamma * s.phi_dot - p.alpha * sin_t * sin_p - p.beta * cos_t * cos_p
}

/// The same acceleration written with `eps` and `mu`:
/// `-gamma phi' - mu cos(phi - tau) + eps cos(phi + tau)`.
#[inline]
pub fn rhs_rotating(tau: f64, s: &State, gamma: f64, eps: f64, mu: f64) -> f64 {
    -gamma * s.phi_dot - mu * (s.phi - tau).cos() + eps * (s.phi + tau).cos()
}

/// Left side of the contact inequality; positive means the hoop presses on
/// the waist.
#[inline]
pub fn contact_margin(tau: f64, s: &State, p: &Params) -> f64 {
    let (sin_t, cos_t) = tau.sin_cos();
    let (sin_p, cos_p) = s.phi.sin_cos();
    s.phi_dot * s.phi_dot + 2.0 * (p.alpha * sin_t * cos_p - p.beta * cos_t * sin_p)
}

/// Normal force, friction force and spin rate at physical time `t`.
///
/// Here `s.phi_dot` is `d phi / dt` in rad/s, not the nondimensional rate.
/// The angular acceleration is taken from the equation of motion, so the
/// returned friction satisfies both the tangential and the torque balance.
pub fn dimensional_forces(t: f64, s: &State, p: &DimensionalParams) -> Result<Forces> {
    p.validate()?;
    let arm = p.big_r - p.r;
    let w2 = p.omega * p.omega;
    let (sin_wt, cos_wt) = (p.omega * t).sin_cos();
    let (sin_p, cos_p) = s.phi.sin_cos();
    let x_dd = -p.a * w2 * sin_wt;
    let y_dd = -p.b * w2 * cos_wt;

    let phi_dd = -p.k / (2.0 * p.m * p.big_r * p.big_r) * s.phi_dot
        + (x_dd * sin_p + y_dd * cos_p) / (2.0 * arm);

    let normal = p.m * arm * s.phi_dot * s.phi_dot - p.m * (x_dd * cos_p - y_dd * sin_p);
    let friction = p.m * arm * phi_dd - p.m * (x_dd * sin_p + y_dd * cos_p);
    let theta_dot = arm * s.phi_dot / p.big_r;
    Ok(Forces {
        normal,
        friction,
        theta_dot,
    })
}
