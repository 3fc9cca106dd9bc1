use alloc::string::String;
use core::fmt;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors produced by the core library.
///
/// `Domain` carries the short label of the coefficient condition that was
/// violated (for example `lama1a` for the requirement lambda1 < 0) so that
/// callers can surface the exact assumption that failed.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A material-coefficient assumption does not hold.
    Domain { condition: &'static str, details: String },
    /// Input data is unusable (non-finite values, asymmetric strain, ...).
    Data(String),
    /// The API was called incorrectly (grid mismatch, bad sampling, ...).
    Usage(String),
    /// The time integration produced unbounded values.
    Blowup { step: u64, t: f64, details: String },
    /// An output sink failed; the message carries the file context.
    Io(String),
}

impl Error {
    pub fn domain(condition: &'static str, details: impl Into<String>) -> Self {
        Error::Domain { condition, details: details.into() }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { condition, details } => {
                write!(f, "{details} (condition {condition})")
            }
            Error::Data(msg) => write!(f, "invalid data: {msg}"),
            Error::Usage(msg) => write!(f, "usage error: {msg}"),
            Error::Blowup { step, t, details } => {
                write!(f, "numerical blowup at step {step} (t = {t}): {details}")
            }
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
