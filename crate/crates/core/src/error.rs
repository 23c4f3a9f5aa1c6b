use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violates an operation's precondition (mismatched fields,
    /// wrong dimensions, zero state vectors and so on).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("division by zero")]
    DivisionByZero,

    /// An exhaustive enumeration would exceed its configured budget.
    #[error("enumeration budget exceeded: {what} needs {needed} vectors, budget is {budget}")]
    Budget { what: String, needed: String, budget: u64 },

    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    /// A construction failed one of its own post-condition checks.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
