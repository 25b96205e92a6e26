use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector must have at least one coordinate")]
    EmptyVector,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("point outside domain: {0}")]
    OutsideDomain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("deleted set is empty")]
    EmptySet,
    #[error("disc leaves the field's domain at theta = {theta}")]
    DiscOutsideDomain { theta: f64 },
    #[error("covering check failed: worst gap {gap} with {points} points")]
    CoveringFailed { gap: f64, points: usize },
    #[error("slice identity violated: max error {max_error}")]
    SliceIdentity { max_error: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

macro_rules! bail_param {
    ($($arg:tt)*) => {
        return Err($crate::Error::InvalidParameter(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail_param;
