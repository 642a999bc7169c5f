use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] ciwidth_core::Error),
    #[error("{0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status: 2 for invalid input, 3 for a search or solver
    /// that did not converge, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        use ciwidth_core::Error as E;
        match self {
            Error::Core(E::Domain(_) | E::Infinite) | Error::Config(_) => 2,
            Error::Core(E::NoConvergence(_) | E::SearchExhausted { .. }) => 3,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
