use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("ground set of {n} elements exceeds the cap of {max}")]
    GroundTooLarge { n: usize, max: usize },
    #[error("ground sets differ: {left} vs {right} elements")]
    GroundMismatch { left: usize, right: usize },
    #[error("arithmetic overflow in the {ring} ring")]
    Overflow { ring: &'static str },
    #[error("inexact division by {divisor}")]
    InexactDivision { divisor: u64 },
    #[error("rank {rank} out of range 0..={max}")]
    RankOutOfRange { rank: usize, max: usize },
    #[error("{what} = {value} exceeds the guard of {max}")]
    Guard {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("weight {value} violates the declared bound {bound}")]
    BoundViolation { value: i64, bound: u64 },
    #[error("no pair reaches {target} at mask {mask:#b}")]
    NoWitness { mask: u32, target: String },
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
