use thiserror::Error;

pub type Result<T> = std::result::Result<T, GapError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GapError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "quadrature tolerance not reached: estimate {error_estimate:e} > target {target:e} \
         after {subdivisions} subdivisions"
    )]
    ToleranceNotReached {
        value: f64,
        error_estimate: f64,
        target: f64,
        subdivisions: usize,
    },

    #[error("no bracket for the transition temperature: {0}")]
    NoBracket(String),

    #[error("bracket failure at tau = {tau:e}: {reason}")]
    BracketFailure { tau: f64, reason: String },

    #[error("root finder did not converge in {iterations} iterations (width {width:e})")]
    NotConverged { iterations: usize, width: f64 },

    #[error("residual |F| = {residual:e} at tau = {tau:e} exceeds {tol:e}")]
    ResidualTooLarge { tau: f64, residual: f64, tol: f64 },

    #[error("degenerate derivative: |F_Y| = {0:e}")]
    DegenerateDerivative(f64),

    #[error("sweep failed at {} point(s): {}", .0.len(), summarize(.0))]
    Sweep(Vec<(usize, GapError)>),
}

impl GapError {
    /// Short machine-readable name of the failure class.
    pub fn name(&self) -> &'static str {
        match self {
            GapError::Domain(_) => "DomainError",
            GapError::InvalidConfig(_) => "InvalidConfig",
            GapError::ToleranceNotReached { .. } => "ToleranceNotReached",
            GapError::NoBracket(_) => "NoBracket",
            GapError::BracketFailure { .. } => "BracketFailure",
            GapError::NotConverged { .. } => "NotConverged",
            GapError::ResidualTooLarge { .. } => "ResidualTooLarge",
            GapError::DegenerateDerivative(_) => "DegenerateDerivative",
            GapError::Sweep(_) => "SweepFailure",
        }
    }
}

fn summarize(failures: &[(usize, GapError)]) -> String {
    failures
        .iter()
        .map(|(i, e)| format!("[{i}] {e}"))
        .collect::<Vec<_>>()
        .join("; ")
}
