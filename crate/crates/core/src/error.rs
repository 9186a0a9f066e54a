use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("version space is empty")]
    EmptyVersionSpace,

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("no class up to index {k_max} is consistent with the constraints")]
    Exhausted { k_max: usize },

    #[error("unknown class index {0}")]
    UnknownClass(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("epoch cap {cap} reached without halting")]
    EpochCap { cap: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
