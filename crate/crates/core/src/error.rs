use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument must be positive, got {0}")]
    NotPositive(u64),

    #[error("{0} is not a negative discriminant (need d < 0, d = 0 or 1 mod 4)")]
    InvalidDiscriminant(i64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("m = {m} is not coprime to the level {level}")]
    NotCoprime { level: u64, m: u64 },

    #[error("p = {p} divides {modulus}; need a prime of good reduction")]
    BadPrime { p: u64, modulus: u64 },

    #[error("{q} is not a unitary divisor of {level} greater than 1")]
    NotUnitaryDivisor { level: u64, q: u64 },

    #[error("extension degree must be 1 or 2, got {0}")]
    UnsupportedDegree(u32),

    #[error("level {level} is outside the supported range (at most {max})")]
    LevelOutOfRange { level: u64, max: u64 },

    #[error("inconsistent invariants: {0}")]
    Inconsistent(String),

    #[error("unknown isogeny class {0}")]
    UnknownClass(String),

    #[error("unknown curve label {0}")]
    UnknownLabel(String),

    #[error("data line {line}: {reason}")]
    Load { line: usize, reason: String },

    #[error("curve data does not cover conductor {conductor} (data ends at conductor {covered})")]
    MissingConductor { conductor: u64, covered: u64 },

    #[error("scan range must start at 300 or above, got [{start}, {end}]")]
    ScanRange { start: u64, end: u64 },

    #[error("level {level} contradicts the classification: {detail}")]
    Contradiction { level: u64, detail: String },
}
