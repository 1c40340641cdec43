use alloc::string::String;

/// Errors raised by the engine.
///
/// `Parameter` is a caller mistake (out-of-range input). `Internal` means an
/// invariant the engine relies on was violated; it always indicates a bug or a
/// wrong identification and is never swallowed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! param_err {
    ($($arg:tt)*) => { $crate::error::Error::Parameter(alloc::format!($($arg)*)) };
}
macro_rules! internal_err {
    ($($arg:tt)*) => { $crate::error::Error::Internal(alloc::format!($($arg)*)) };
}
pub(crate) use internal_err;
pub(crate) use param_err;
