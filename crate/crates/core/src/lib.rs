//! Prime-interval analysis: a segmented prime sieve, closed-form bounds on
//! primes in intervals and on prime gaps, and exhaustive range verification
//! of those bounds.

pub mod bounds;
pub mod error;
pub mod numeric;
pub mod sieve;
pub mod verify;

pub use bounds::{f_of_k, IntervalRule, LogBase, Margin};
pub use error::{BoundsError, SieveError, VerifyError};
pub use sieve::{
    count_primes_in, iterate_gaps, log_primorial, max_gap_up_to, nth_prime, prime_count,
    sieve_range, Boundary, GapRecord, Interval, PrimeTable, SieveConfig,
};
pub use verify::{
    compare_rules, verify_basic_props, verify_firoozbakht, verify_gap_interval, verify_gap_upper,
    verify_lemmas, verify_theorem1, verify_theorem2, verify_theorem3, ClaimId, ClaimReport,
    RuleTable, VerifyOptions,
};
