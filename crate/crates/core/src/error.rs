use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported request: {0}")]
    Capability(String),

    #[error("scan range too short: {0}")]
    ScanRangeTooShort(String),

    #[error("loss became non-finite ({value}) at epoch {epoch}")]
    NonFiniteLoss { epoch: usize, value: f64 },

    #[error("eigendecomposition did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
