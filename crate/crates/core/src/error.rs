use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("permutation has {perm} jobs but the instance has {instance}")]
    DimensionMismatch { perm: usize, instance: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid move ({i}, {j}) for {n} positions")]
    InvalidMove { i: usize, j: usize, n: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown instance {set} #{index}")]
    UnknownInstance { set: String, index: usize },

    #[error("instance has {n} jobs, exhaustive search is limited to {max}")]
    TooLarge { n: usize, max: usize },

    #[error("enumeration cap must be positive")]
    ZeroCap,

    #[error("solution pool is empty")]
    EmptyPool,

    #[error("entropy needs at least two jobs, got {0}")]
    TooFewJobs(usize),

    #[error("found cost {found} is below the registered best {best}")]
    NewBest { found: i128, best: i128 },

    #[error("missing RDD/TF metadata for {0}")]
    MissingMetadata(String),

    #[error("descent exceeded the iteration cap of {0}")]
    IterationCap(u64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
