use thiserror::Error;

/// Errors shared across the sampling and reduction modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("density CDF must vanish at 0 and be strictly increasing on (0, {radius}]")]
    NonMonotoneCdf { radius: f64 },

    #[error("point must lie in the upper half-plane, got im = {0}")]
    NotInHalfPlane(f64),

    #[error("Mobius matrix must have determinant 1, got {0}")]
    NotUnimodular(f64),

    #[error("norm bound {0} is below sqrt(2); the group contains no such elements")]
    NormBoundTooSmall(f64),

    #[error("epsilon must lie in (0, 1), got {0}")]
    EpsilonOutOfRange(f64),

    #[error("enumeration bound {bound} exceeds the desk-scale guard {guard}")]
    EnumerationBudget { bound: f64, guard: f64 },

    #[error("reduction exceeded {0} iterations at maximum working precision")]
    ReductionCap(u32),

    #[error("reduction result failed verification at maximum working precision")]
    ReductionPrecision,

    #[error("accumulated matrix entries overflow 64-bit integers")]
    EntryOverflow,

    #[error("p must be prime")]
    NotPrime(u64),

    #[error("invalid generator set: {0}")]
    BadGeneratorSet(String),

    #[error("greedy reduction exceeded the {0}-step cap")]
    StepCapExceeded(u64),

    #[error("pair set is not a partial symplectic basis")]
    BadSymplecticPairs,

    #[error("chi-square needs at least {min} draws on a support of {support}, got {got}")]
    UndersampledSupport { support: usize, min: u64, got: u64 },

    #[error("trial-division factoring budget exceeded for {0}")]
    FactoringBudget(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
