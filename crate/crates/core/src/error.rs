use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A size parameter exceeds a configured ceiling.
    #[error("capacity exceeded: {what} = {value}, limit {limit}")]
    Capacity {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An iterative method failed to converge.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// A computed result contradicts an analytic guarantee.
    #[error("internal consistency violated: {0}")]
    Consistency(String),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capacity { .. } | Error::Domain(_) | Error::Precondition(_) => 2,
            Error::Numeric(_) | Error::Consistency(_) => 3,
        }
    }
}

pub(crate) fn ensure_finite(values: impl IntoIterator<Item = f64>, what: &str) -> Result<()> {
    for (i, v) in values.into_iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::Domain(format!("{what}[{i}] is not finite ({v})")));
        }
    }
    Ok(())
}
