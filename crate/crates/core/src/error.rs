use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// An argument is outside the domain of the function. The payload names
    /// the violated constraint, e.g. `"alpha must be in (0, 1)"`.
    Domain(&'static str),
    /// The requested quantile is at an infinite end of the support.
    Infinite,
    /// An iterative special-function evaluation did not converge.
    NoConvergence(&'static str),
    /// A sample-size search hit its evaluation cap.
    SearchExhausted { evaluations: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::Infinite => f.write_str("quantile is infinite at probability 0 or 1"),
            Error::NoConvergence(what) => write!(f, "{what} did not converge"),
            Error::SearchExhausted { evaluations } => {
                write!(f, "sample-size search did not converge after {evaluations} evaluations")
            }
        }
    }
}

impl core::error::Error for Error {}
