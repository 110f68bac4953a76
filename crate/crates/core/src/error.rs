use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetError {
    #[error("rank {rank} exceeds the cap of {max}")]
    RankTooLarge { rank: u32, max: u32 },
    #[error("rank {rank} needs {expected} values, got {got}")]
    LengthMismatch {
        rank: u32,
        expected: usize,
        got: usize,
    },
    #[error("rank {rank} exceeds the matrix oracle cap of {max}")]
    OracleRankTooLarge { rank: u32, max: u32 },
    #[error("cannot split a rank-zero assignment")]
    RankZero,
    #[error("expected a rank-{expected} assignment, got rank {got}")]
    WrongRank { expected: u32, got: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("zero has no factorization")]
    Zero,
    #[error("{0} is even")]
    Even(String),
    #[error("factorization infeasible: {0}")]
    Infeasible(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("zero has no 2-adic split")]
    Zero,
    #[error("{0} is even")]
    Even(String),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("witness {family} evaluates to {actual}, expected {expected}")]
    Mismatch {
        family: String,
        expected: String,
        actual: String,
    },
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep configuration: {0}")]
    Config(String),
    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown lemma id {0:?}")]
    UnknownLemma(String),
    #[error("window {0} must be a power of two between 32 and 4096")]
    BadWindow(u64),
}
