use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid measure: {0}")]
    Validation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("factorization has a root on the unit circle (|root| = {modulus})")]
    BoundaryRoot { modulus: f64 },

    #[error("weight numerator is not positive on the unit circle (min {min:e})")]
    NotPositive { min: f64 },

    #[error("Gram matrix of the boundary functions is not positive definite (min eigenvalue {min_eig:e})")]
    SingularGram { min_eig: f64 },

    #[error("matrix is not positive semidefinite (pivot {pivot:e} at index {index})")]
    NotPsd { index: usize, pivot: f64 },

    #[error("interpolation residual {residual:e} exceeds {limit:e}")]
    ResidualTooLarge { residual: f64, limit: f64 },

    #[error("T*T is numerically singular (min eigenvalue {min_eig:e})")]
    SingularFrame { min_eig: f64 },

    #[error("{what}: {value:e} exceeds {limit:e}")]
    InvariantViolated {
        what: &'static str,
        value: f64,
        limit: f64,
    },
}

impl Error {
    /// True for errors caused by malformed or out-of-domain input rather than
    /// by a numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_) | Error::Validation(_) | Error::InvalidArgument(_)
        )
    }

    /// Short stable identifier, used in CSV error cells.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse(_) => "Parse",
            Error::Validation(_) => "Validation",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::BoundaryRoot { .. } => "BoundaryRoot",
            Error::NotPositive { .. } => "NotPositive",
            Error::SingularGram { .. } => "SingularGram",
            Error::NotPsd { .. } => "NotPSD",
            Error::ResidualTooLarge { .. } => "ResidualTooLarge",
            Error::SingularFrame { .. } => "SingularFrame",
            Error::InvariantViolated { .. } => "InvariantViolated",
        }
    }
}
