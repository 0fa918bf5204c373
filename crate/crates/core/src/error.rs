use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A hard size cap was hit. Caps are never applied as silent truncation.
    #[error("{what} is too large: size {size} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("non-generic system: {0}")]
    NonGeneric(String),

    #[error("structural precondition violated: {0}")]
    Structural(String),

    #[error("{0} is experimental when some strategy dimension exceeds 1; enable the experimental override to run it")]
    Experimental(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<()> {
        if size > cap {
            Err(Error::CapExceeded { what, size, cap })
        } else {
            Ok(())
        }
    }
}
