use thiserror::Error;

use crate::dsl::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A partial derivative was requested from a jet with no order left.
    /// `chain` names the operators that were being evaluated, outermost first.
    #[error("derivative order exhausted while evaluating {chain}; raise the degree budget")]
    DegreeExhausted { chain: String },

    #[error("jets expanded at different base points")]
    BasePointMismatch,

    #[error("degree {0} exceeds the supported maximum {max}", max = crate::jet::MAX_DEGREE)]
    DegreeTooLarge(usize),

    #[error("metric tensor is degenerate (det g = {0:e})")]
    DegenerateMetric(f64),

    #[error("point lies outside the conic domain: {0}")]
    OutsideCone(String),

    #[error("signature changed across the sample (epsilon {expected} then {found})")]
    SignatureFlip { expected: i8, found: i8 },

    #[error("spray formulas disagree: classical {classical:e}, frame form {frame:e}")]
    SprayMismatch { classical: f64, frame: f64 },

    #[error("every curvature probe has a vanishing vertical derivative")]
    ProbeDegenerate,

    #[error("curvature probes disagree: {first:e} vs {second:e}")]
    ProbeDisagreement { first: f64, second: f64 },

    #[error("conformal factor is not admissible here: {0}")]
    Inadmissible(String),

    #[error("epsilon * rho = {0:e} is not positive; the barred frame is undefined")]
    NegativeRho(f64),

    #[error("two formulas for {what} disagree: {first:e} vs {second:e}")]
    FormulaMismatch {
        what: &'static str,
        first: f64,
        second: f64,
    },

    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid metric definition: {0}")]
    Config(String),
}

impl Error {
    /// Prefix the operator chain of a [`Error::DegreeExhausted`] with `label`.
    pub fn within(self, label: &str) -> Self {
        match self {
            Error::DegreeExhausted { chain } => Error::DegreeExhausted {
                chain: format!("{label} <- {chain}"),
            },
            other => other,
        }
    }

    /// True for failures caused by numerics (degree budget, degenerate
    /// metric, inadmissible factor) rather than by malformed input.
    pub fn is_numeric(&self) -> bool {
        !matches!(self, Error::Parse(_) | Error::Config(_))
    }
}

pub trait ResultExt<T> {
    fn within(self, label: &str) -> Result<T>;
}

impl<T> ResultExt<T> for Result<T> {
    fn within(self, label: &str) -> Result<T> {
        self.map_err(|e| e.within(label))
    }
}
