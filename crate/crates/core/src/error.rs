use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("letter {letter:?} is not in the alphabet of rank {rank}")]
    Alphabet { letter: char, rank: usize },
    #[error("rank must be between 2 and 26, got {0}")]
    Rank(usize),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("out of range: {0}")]
    Range(String),
    #[error("no reduced word of odd length {0} lies in the commutator subgroup")]
    Parity(usize),
    #[error("rejection sampling gave up after {0} draws")]
    Exhaustion(u64),
    #[error("chain is not null-homologous (abelian image {0})")]
    NotABoundary(String),
    #[error("counting set contains the empty word")]
    InvalidSet,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("assembly failed: {0}")]
    AssemblyFailure(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
