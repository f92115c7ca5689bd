//! Segmented, bit-packed sieve of Eratosthenes and the prime-sequence
//! primitives built on it: π(x), p_n, interval counts, gap streaming and the
//! log-primorial.
//!
//! Prime indices are 1-based throughout (`p_1 = 2`).

mod gaps;
mod interval;
mod table;

use std::env;

use serde::{Deserialize, Serialize};

pub use gaps::{for_each_gap_chunk, iterate_gaps, max_gap_up_to, GapChunk, GapRecord, GapStream};
pub use interval::{Boundary, Interval};
pub use table::{PrimeTable, Primes};

use crate::error::SieveError;
use crate::numeric::CompensatedSum;

pub const MIN_SEGMENT_SIZE: u64 = 1024;
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 18;
/// Largest range end accepted without an explicit override.
pub const DEFAULT_LIMIT: u64 = 1_000_000_000;
pub const MAX_RANGE_END: u64 = i64::MAX as u64;
pub const DEFAULT_MEM_BUDGET: u64 = 4 << 30;
/// Environment variable holding the sieve allocation cap in bytes.
pub const MEM_LIMIT_ENV: &str = "PRIMESPAN_MEM_LIMIT";

/// Sieve tuning and resource limits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveConfig {
    /// Numbers covered by one segment.
    pub segment_size: u64,
    /// Largest admissible range end.
    pub limit: u64,
    /// Cap on bytes allocated for one table.
    pub mem_budget: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_size: DEFAULT_SEGMENT_SIZE,
            limit: DEFAULT_LIMIT,
            mem_budget: DEFAULT_MEM_BUDGET,
        }
    }
}

impl SieveConfig {
    /// Defaults, with the memory budget taken from `PRIMESPAN_MEM_LIMIT` when
    /// it is set to a byte count.
    pub fn from_env() -> Result<Self, String> {
        let mut config = SieveConfig::default();
        if let Ok(raw) = env::var(MEM_LIMIT_ENV) {
            config.mem_budget = raw
                .trim()
                .parse()
                .map_err(|_| format!("{MEM_LIMIT_ENV} must be a byte count, got `{raw}`"))?;
        }
        Ok(config)
    }

    pub fn with_segment_size(mut self, segment_size: u64) -> Self {
        self.segment_size = segment_size;
        self
    }

    pub fn with_limit(mut self, limit: u64) -> Self {
        self.limit = limit;
        self
    }

    pub(crate) fn check(&self, lo: u64, hi: u64) -> Result<(), SieveError> {
        if lo > hi {
            return Err(SieveError::InvalidRange { lo, hi });
        }
        if self.segment_size < MIN_SEGMENT_SIZE {
            return Err(SieveError::SegmentTooSmall(self.segment_size));
        }
        if hi > MAX_RANGE_END {
            return Err(SieveError::AboveMaxRange(hi));
        }
        if hi > self.limit {
            return Err(SieveError::AboveLimit {
                hi,
                limit: self.limit,
            });
        }
        let needed = table::estimate_bytes(lo, hi);
        if needed > self.mem_budget {
            return Err(SieveError::Capacity {
                lo,
                hi,
                needed,
                budget: self.mem_budget,
            });
        }
        Ok(())
    }

    pub fn sieve(&self, lo: u64, hi: u64) -> Result<PrimeTable, SieveError> {
        PrimeTable::build(lo, hi, self)
    }

    pub fn prime_count(&self, x: u64) -> Result<u64, SieveError> {
        self.sieve(0, x).map(|t| t.len())
    }

    pub fn nth_prime(&self, n: u64) -> Result<u64, SieveError> {
        if n == 0 {
            return Err(SieveError::ZeroIndex);
        }
        let hi = nth_prime_ceiling(n);
        let table = self.sieve(0, hi)?;
        Ok(table
            .nth(n)
            .expect("p_n lies below n(ln n + ln ln n) for n >= 6"))
    }

    pub fn count_primes_in(&self, iv: &Interval) -> Result<u64, SieveError> {
        match iv.effective_closed() {
            Some((a, b)) => Ok(self.sieve(a, b)?.len()),
            None => Ok(0),
        }
    }

    pub fn log_primorial(&self, n: u64) -> Result<f64, SieveError> {
        if n < 2 {
            return Err(SieveError::Domain {
                what: "log_primorial",
                value: n,
                min: 2,
            });
        }
        let table = self.sieve(0, n)?;
        let mut sum = CompensatedSum::default();
        for p in table.primes() {
            sum.add((p as f64).ln());
        }
        Ok(sum.value())
    }
}

/// An integer no smaller than `p_n`.
pub fn nth_prime_ceiling(n: u64) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
}

/// Sieves `[lo, hi]` with the default limits and the given segment size.
pub fn sieve_range(lo: u64, hi: u64, segment_size: u64) -> Result<PrimeTable, SieveError> {
    SieveConfig::default()
        .with_segment_size(segment_size)
        .sieve(lo, hi)
}

/// π(x), the number of primes `<= x`.
pub fn prime_count(x: u64) -> Result<u64, SieveError> {
    SieveConfig::default().prime_count(x)
}

/// The `n`-th prime, `p_1 = 2`.
pub fn nth_prime(n: u64) -> Result<u64, SieveError> {
    SieveConfig::default().nth_prime(n)
}

/// Number of primes in `iv`, honoring its endpoint modes.
pub fn count_primes_in(iv: &Interval) -> Result<u64, SieveError> {
    SieveConfig::default().count_primes_in(iv)
}

/// `ln(n#)`: the sum of `ln p` over primes `p <= n`, with compensated
/// summation.
pub fn log_primorial(n: u64) -> Result<f64, SieveError> {
    SieveConfig::default().log_primorial(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(x: u64) -> bool {
        x >= 2 && (2..).take_while(|d| d * d <= x).all(|d| x % d != 0)
    }

    #[test]
    fn small_ranges() {
        let t = sieve_range(0, 30, 1024).unwrap();
        assert_eq!(
            t.primes().collect::<Vec<_>>(),
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        );
        assert!(sieve_range(0, 1, 1024).unwrap().is_empty());
        assert!(sieve_range(14, 16, 1024).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_configuration() {
        assert_eq!(
            sieve_range(0, 100, 512),
            Err(SieveError::SegmentTooSmall(512))
        );
        assert_eq!(
            sieve_range(10, 5, 1024),
            Err(SieveError::InvalidRange { lo: 10, hi: 5 })
        );
        assert!(matches!(
            sieve_range(0, DEFAULT_LIMIT + 1, 1024),
            Err(SieveError::AboveLimit { .. })
        ));
        let big = SieveConfig::default().with_limit(u64::MAX);
        assert_eq!(
            big.sieve(0, u64::MAX),
            Err(SieveError::AboveMaxRange(u64::MAX))
        );
        let tight = SieveConfig {
            mem_budget: 1024,
            ..SieveConfig::default()
        };
        assert!(matches!(
            tight.sieve(0, 1_000_000),
            Err(SieveError::Capacity { .. })
        ));
    }

    #[test]
    fn sieve_above_default_limit_with_override() {
        let hi = 1_000_000_000_000;
        let config = SieveConfig::default().with_limit(hi);
        let t = config.sieve(hi - 1000, hi).unwrap();
        assert_eq!(t.primes().last(), Some(999_999_999_989));
        assert_eq!(t.is_prime(hi), Ok(false));
    }

    #[test]
    fn prime_count_examples() {
        assert_eq!(prime_count(0), Ok(0));
        assert_eq!(prime_count(1), Ok(0));
        assert_eq!(prime_count(2), Ok(1));
        assert_eq!(prime_count(100), Ok(25));
    }

    #[test]
    fn nth_prime_examples() {
        assert_eq!(nth_prime(1), Ok(2));
        assert_eq!(nth_prime(5), Ok(11));
        assert_eq!(nth_prime(25), Ok(97));
        assert_eq!(nth_prime(0), Err(SieveError::ZeroIndex));
        let small = SieveConfig::default().with_limit(1000);
        assert!(matches!(
            small.nth_prime(1000),
            Err(SieveError::AboveLimit { .. })
        ));
    }

    #[test]
    fn count_in_interval_examples() {
        let c = |lo, hi, b| count_primes_in(&Interval::with_boundary(lo, hi, b).unwrap()).unwrap();
        assert_eq!(c(4, 6, Boundary::OpenOpen), 1);
        assert_eq!(c(2, 2, Boundary::ClosedClosed), 1);
        assert_eq!(c(2, 2, Boundary::OpenClosed), 0);
        assert_eq!(c(10, 20, Boundary::ClosedClosed), 4);
        assert_eq!(c(11, 19, Boundary::OpenOpen), 2);
        assert_eq!(c(11, 19, Boundary::ClosedOpen), 3);
    }

    #[test]
    fn log_primorial_examples() {
        assert!((log_primorial(2).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert!((log_primorial(4).unwrap() - 6f64.ln()).abs() < 1e-15);
        assert!((log_primorial(10).unwrap() - 210f64.ln()).abs() < 1e-14);
        assert!(log_primorial(1).is_err());
    }

    #[test]
    fn matches_trial_division_on_offset_ranges() {
        for (lo, hi) in [(0, 3000), (1, 1), (2, 2), (999, 1200), (4095, 8500)] {
            let t = sieve_range(lo, hi, 1024).unwrap();
            for x in lo..=hi {
                assert_eq!(t.is_prime(x).unwrap(), trial_division(x), "x = {x}");
            }
        }
    }
}
