use thiserror::Error;

/// Errors raised by the sieve and its derived queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SieveError {
    #[error("invalid range: lo {lo} > hi {hi}")]
    InvalidRange { lo: u64, hi: u64 },

    #[error("segment size {0} is below the minimum of 1024")]
    SegmentTooSmall(u64),

    #[error("range end {hi} exceeds the configured sieve limit {limit}")]
    AboveLimit { hi: u64, limit: u64 },

    #[error("range end {0} exceeds 2^63 - 1")]
    AboveMaxRange(u64),

    #[error("sieving [{lo}, {hi}] needs {needed} bytes, over the memory budget of {budget} bytes")]
    Capacity {
        lo: u64,
        hi: u64,
        needed: u64,
        budget: u64,
    },

    #[error("{x} lies outside the sieved range [{base}, {hi}]")]
    OutOfRange { x: u64, base: u64, hi: u64 },

    #[error("prime index must be at least 1")]
    ZeroIndex,

    #[error("argument {value} is below the minimum {min} for {what}")]
    Domain {
        what: &'static str,
        value: u64,
        min: u64,
    },
}

/// Errors raised by the closed-form evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("{what} requires an argument >= {min}, got {value}")]
    Domain {
        what: &'static str,
        value: i64,
        min: i64,
    },

    #[error("ceiling of {value} is ambiguous: within 1e-9 of an integer and the extended-precision recheck is disabled")]
    Ambiguous { value: f64 },

    #[error("rule {rule} is only valid for n >= {n_min}, got n = {n}")]
    Threshold {
        rule: &'static str,
        n_min: u64,
        n: u64,
    },

    #[error("epsilon must lie in (0, 2], got {0}")]
    Epsilon(f64),

    #[error(transparent)]
    Sieve(#[from] SieveError),
}

/// Errors raised when a verification run cannot start.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("{what} must be >= {min}, got {value}")]
    Parameter {
        what: &'static str,
        value: i64,
        min: i64,
    },

    #[error("worker pool: {0}")]
    Pool(String),

    #[error(transparent)]
    Sieve(#[from] SieveError),

    #[error(transparent)]
    Bounds(#[from] BoundsError),
}
