use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sieve limit {limit} exceeds the memory budget of {budget} entries")]
    SieveBudget { limit: u64, budget: u64 },

    #[error("{value} exceeds the sieve limit {limit}")]
    BeyondSieve { value: u64, limit: u64 },

    #[error("{0}")]
    Usage(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("witness is not valid for {target}: {reason}")]
    InvalidWitness { target: String, reason: String },

    #[error("not a representation: {0}")]
    NotARepresentation(String),

    #[error("classification impossible: {0}")]
    Classification(String),

    #[error("refusing {what}: {detail} (pass --force to override)")]
    CostGuard { what: &'static str, detail: String },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
