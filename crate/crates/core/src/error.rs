use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid potential: {0}")]
    Validation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coupling must be real for this operation (got {re} + {im}i)")]
    NonRealCoupling { re: f64, im: f64 },

    #[error("eigensolver did not converge after {iterations} iterations ({converged} of {size} values converged)")]
    ConvergenceFailure {
        iterations: usize,
        converged: usize,
        size: usize,
    },

    #[error("shift lies on the spectrum and the perturbed retry failed")]
    SingularShift,

    #[error("inverse iteration did not reach the residual target (residual {residual:e})")]
    NoConvergence { residual: f64 },

    #[error("level {level} is degenerate (multiplicity {multiplicity}); only nondegenerate levels are supported")]
    DegenerateLevel { level: String, multiplicity: u64 },

    #[error("cutoff {cutoff} too small: need at least {required}")]
    TruncationTooSmall { cutoff: usize, required: usize },

    #[error("need at least {required} coefficients, got {available}")]
    InsufficientOrders { required: usize, available: usize },

    #[error("Pade table is singular for degrees ({numerator}, {denominator})")]
    SingularPadeTable { numerator: usize, denominator: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
