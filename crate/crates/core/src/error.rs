use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors raised by the indicator computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An operation that needs at least one paper got none.
    EmptyCorpus,
    /// An identifier was empty after trimming.
    EmptyIdentifier,
    /// A paper record violates a model invariant.
    InvalidRecord { id: String, reason: String },
    /// A target-group expression could not be resolved.
    UnknownName { name: String, known: Vec<String> },
    /// A reader channel must name at least one status group.
    EmptyChannel,
    /// A baseline table or entry is malformed.
    InvalidBaseline(String),
    /// Two baseline tables for different target groups were combined.
    GroupMismatch { expected: String, found: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyCorpus => f.write_str("empty corpus"),
            Error::EmptyIdentifier => f.write_str("empty identifier"),
            Error::InvalidRecord { id, reason } => write!(f, "invalid record {id}: {reason}"),
            Error::UnknownName { name, known } => {
                write!(f, "unknown target group `{name}`; known names: ")?;
                for (i, k) in known.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(k)?;
                }
                Ok(())
            }
            Error::EmptyChannel => f.write_str("reader channel has no status groups"),
            Error::InvalidBaseline(msg) => write!(f, "invalid baseline: {msg}"),
            Error::GroupMismatch { expected, found } => {
                write!(
                    f,
                    "baseline group mismatch: expected {expected}, found {found}"
                )
            }
        }
    }
}

impl core::error::Error for Error {}
