use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the laboratory. Variants map onto the CLI exit codes:
/// hypothesis and validation failures are exit 1, configuration errors exit 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("integral tail is not summable (shell ratio {ratio:.4}, tail estimate {estimate:.3e})")]
    NonConvergentTail { ratio: f64, estimate: f64 },

    #[error("quadrature did not reach tolerance: estimated error {error:.3e} > {tolerance:.3e}")]
    QuadratureTolerance { error: f64, tolerance: f64 },

    #[error("spinor vanishes at probe point {point:?}")]
    VanishingSpinor { point: [f64; 3] },

    #[error("spinor cannot be pinned at {point:?}: Im<psi, sigma.p psi>/|psi|^2 = {defect:.3e}")]
    NotPinnable { point: [f64; 3], defect: f64 },

    #[error("partial-wave truncation residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    Truncation { residual: f64, tolerance: f64 },

    #[error("weight form vanishes identically on the grid")]
    DegenerateForm,

    #[error("eigensolver did not converge in {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("step size underflow at r = {r}")]
    StepUnderflow { r: f64 },

    #[error("missing decay metadata for '{0}'")]
    MissingDecay(String),

    #[error("unknown field '{0}'")]
    UnknownField(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors that mean "the numbers say no" rather than "the input is wrong".
    pub fn is_validation_failure(&self) -> bool {
        matches!(
            self,
            Error::Hypothesis(_)
                | Error::NonConvergentTail { .. }
                | Error::QuadratureTolerance { .. }
                | Error::VanishingSpinor { .. }
                | Error::NotPinnable { .. }
                | Error::Truncation { .. }
                | Error::DegenerateForm
                | Error::NoConvergence { .. }
                | Error::StepUnderflow { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
