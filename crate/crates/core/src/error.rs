use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into two broad families: bad input (files, dimensions,
/// parameter domains) and numerical failure (quadrature that cannot reach the
/// requested tolerance, diverging optimization). The CLI maps the first family
/// to exit code 2 and the second to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("pgm parse error at byte {offset}: {message}")]
    PgmParse { offset: usize, message: String },

    #[error("csv parse error at row {row}: {message}")]
    CsvParse { row: usize, message: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("empty sequence")]
    EmptySequence,

    #[error("beta fit infeasible: {0}")]
    FitInfeasible(String),

    #[error(
        "quadrature did not converge: achieved error estimate {achieved:e} \
         exceeds requested tolerance {requested:e} after {subdivisions} subdivisions"
    )]
    QuadratureNoConverge {
        achieved: f64,
        requested: f64,
        subdivisions: usize,
    },

    #[error("training diverged at epoch {epoch}: loss is not finite")]
    TrainingDiverged { epoch: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization failed: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical machinery itself, as opposed to
    /// rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNoConverge { .. } | Error::TrainingDiverged { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
