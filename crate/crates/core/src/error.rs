use thiserror::Error;

/// Errors raised anywhere in the game toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid game parameters n={n}, k={k}: {reason}")]
    InvalidParams { n: i64, k: i64, reason: &'static str },

    #[error("position sum {sum} and excess {e} differ in parity")]
    ParityMismatch { sum: u64, e: u32 },

    #[error("position sum {sum} is below the excess {e}")]
    SumBelowExcess { sum: u64, e: u32 },

    #[error("illegal move ({first}, {second}) in a position of size {len}")]
    IllegalMove { first: usize, second: usize, len: usize },

    #[error("position is final for e={e}")]
    PositionFinal { e: u32 },

    #[error("position is not final for e={e}")]
    PositionNotFinal { e: u32 },

    #[error("position has {len} elements; brute-force enumeration is limited to {limit}")]
    OracleTooLarge { len: usize, limit: usize },

    #[error("cannot parse position {input:?}: {reason}")]
    ParsePosition { input: String, reason: String },

    #[error("b must be at least 1")]
    ZeroOrder,

    #[error("memo table reached its limit of {limit} entries")]
    MemoLimitExceeded { limit: usize },

    #[error("{what} exceeds guard: {value} > {limit}")]
    GuardExceeded { what: &'static str, value: u64, limit: u64 },

    #[error("m={m} is not congruent to 3 mod 4")]
    NotThreeModFour { m: u64 },

    #[error("ball {ball} is out of range 1..={n}")]
    BallOutOfRange { ball: usize, n: usize },

    #[error("a ball cannot be compared with itself ({ball})")]
    SelfComparison { ball: usize },

    #[error("answer contradicts the transcript: balls {i} and {j} are forced to be {forced}")]
    InconsistentAnswer { i: usize, j: usize, forced: &'static str },

    #[error("cannot parse transcript: {0}")]
    ParseTranscript(String),
}

pub type Result<T> = std::result::Result<T, Error>;
