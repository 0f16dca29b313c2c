use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("exponent {0} outside (0, 1]")]
    InvalidExponent(f64),

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("Bloch vector has norm {0} > 1")]
    BlochOutOfBall(f64),

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("support of the first state is not contained in the support of the second")]
    SupportError,

    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("maximizer precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("unknown check id: {0}")]
    UnknownCheck(String),

    #[error("invalid state descriptor: {0}")]
    BadDescriptor(String),
}

pub type Result<T> = std::result::Result<T, Error>;
