use std::io;

use thiserror::Error;

/// Errors produced by the mining library.
#[derive(Debug, Error)]
pub enum Error {
    /// Two vectors taken from windows of different capacity were combined.
    #[error("incompatible window snapshots: vector lengths {left} and {right} differ")]
    LengthMismatch { left: usize, right: usize },

    /// A transaction arrived with a sequence number other than the next one.
    #[error("stream corruption: expected sequence number {expected}, got {got}")]
    OutOfOrder { expected: u64, got: u64 },

    #[error("item {0:?} is not registered in this window")]
    UnknownItem(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The exhaustive oracle refuses to enumerate `2^items` itemsets past its guard.
    #[error("refusing exhaustive enumeration over {items} items (limit {limit})")]
    TooManyItems { items: usize, limit: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
