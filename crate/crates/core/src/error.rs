use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid chain spec: {0}")]
    InvalidSpec(String),

    #[error("coupling λ_{{{index},1}} is zero")]
    ZeroCoupling { index: usize },

    #[error("coupling list must contain at least one value")]
    EmptyCouplings,

    #[error("cannot parse {0:?} as a rational")]
    Parse(String),

    #[error("grade {f} out of range (max {max})")]
    GradeOutOfRange { f: usize, max: usize },

    #[error("{what} of size {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("structural violation: {0}")]
    Structural(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
