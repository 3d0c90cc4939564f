use thiserror::Error;

/// Errors produced by the analysis and simulation routines.
///
/// The `Display` form always starts with the variant name so that command
/// line diagnostics can be matched on.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("InvalidParameter: {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("NoRotatingSolution: existence condition {condition} violated")]
    NoRotatingSolution { condition: &'static str },

    #[error("NotASolution: cos(psi) = {cos_psi} but -gamma/alpha = {expected}")]
    NotASolution { cos_psi: f64, expected: f64 },

    #[error("DegenerateDenominator: correction denominator {value} is too close to zero")]
    DegenerateDenominator { value: f64 },

    #[error("DeterminantDrift: det(M) = {det}, expected exp(-gamma*pi) = {expected}")]
    DeterminantDrift { det: f64, expected: f64 },

    #[error("BracketFailure: stability verdict does not change on [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("NonFinite: state left the finite range after tau = {last_good_tau}")]
    NonFinite { last_good_tau: f64 },

    #[error("TooShort: trajectory spans {span} but at least {required} is needed")]
    TooShort { span: f64, required: f64 },

    #[error(
        "BranchMismatch: trajectory rotates with rho = {measured}, branch has rho = {expected}"
    )]
    BranchMismatch { measured: i32, expected: i32 },
}

impl Error {
    /// The variant name, e.g. `"NoRotatingSolution"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::NoRotatingSolution { .. } => "NoRotatingSolution",
            Error::NotASolution { .. } => "NotASolution",
            Error::DegenerateDenominator { .. } => "DegenerateDenominator",
            Error::DeterminantDrift { .. } => "DeterminantDrift",
            Error::BracketFailure { .. } => "BracketFailure",
            Error::NonFinite { .. } => "NonFinite",
            Error::TooShort { .. } => "TooShort",
            Error::BranchMismatch { .. } => "BranchMismatch",
        }
    }

    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
