use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bounds::LogBase;
use crate::sieve::Boundary;

/// The inequalities this crate can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClaimId {
    /// At least `k - 1` primes between `n` and `kn` once `n >= f(k)`.
    T1,
    /// At most `kn/9 + k^2` primes between `n` and `kn`.
    T2,
    /// A prime strictly between `k f(k)` and `k (f(k) + 1)`.
    T3,
    /// A prime in `(n, n + n/f(n))` for every `n >= 2`.
    GapInterval,
    /// `p_{n+1} < p_n^(1 + 1/n)`.
    Firoozbakht,
    /// `g_n < (ln p_n)^2 - ln p_n` for `n > 4`.
    GapUpper,
    /// `n + 1 <= p_n`.
    Prop4,
    /// `n# <= 4^n`.
    Prop6,
    /// `n ln(n ln n / e) < p_n < n ln(n ln n)` for `n >= 6`.
    NthPrimeBounds,
    L1,
    L2,
    L3,
}

impl ClaimId {
    pub const ALL: [ClaimId; 12] = [
        ClaimId::T1,
        ClaimId::T2,
        ClaimId::T3,
        ClaimId::GapInterval,
        ClaimId::Firoozbakht,
        ClaimId::GapUpper,
        ClaimId::Prop4,
        ClaimId::Prop6,
        ClaimId::NthPrimeBounds,
        ClaimId::L1,
        ClaimId::L2,
        ClaimId::L3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::T1 => "t1",
            ClaimId::T2 => "t2",
            ClaimId::T3 => "t3",
            ClaimId::GapInterval => "gap-interval",
            ClaimId::Firoozbakht => "firoozbakht",
            ClaimId::GapUpper => "gap-upper",
            ClaimId::Prop4 => "prop4",
            ClaimId::Prop6 => "prop6",
            ClaimId::NthPrimeBounds => "nth-prime-bounds",
            ClaimId::L1 => "l1",
            ClaimId::L2 => "l2",
            ClaimId::L3 => "l3",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClaimId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClaimId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown claim `{s}`"))
    }
}

/// A parameter point where the checked inequality fails.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Parameters as `name=value` pairs joined by `;`.
    pub param: String,
    pub observed: f64,
    pub required: f64,
}

/// Where the inequality is tightest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlackPoint {
    pub param: String,
    pub slack: f64,
}

/// Outcome of the gap-interval check restricted to `n = k f(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub points: u64,
    pub violations: Vec<u64>,
}

/// Result of one exhaustive range check.
///
/// `violations` holds at most the configured cap, in parameter order;
/// `violation_count` is the full total.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim: ClaimId,
    /// The inequality checked, and how slack is measured.
    pub statement: String,
    pub range: String,
    pub boundary: Option<Boundary>,
    pub log_base: Option<LogBase>,
    pub scanned: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub min_slack: Option<SlackPoint>,
    pub lattice: Option<LatticeSummary>,
    pub notes: Vec<String>,
    #[serde(
        rename = "elapsed_secs",
        serialize_with = "ser_secs",
        deserialize_with = "de_secs"
    )]
    pub elapsed: Duration,
}

fn ser_secs<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

fn de_secs<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
    let secs = f64::deserialize(d)?;
    Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
}

impl ClaimReport {
    pub fn holds(&self) -> bool {
        self.violation_count == 0
    }

    pub fn min_slack_value(&self) -> Option<f64> {
        self.min_slack.as_ref().map(|m| m.slack)
    }

    /// The report with its wall-clock time zeroed, for byte-level
    /// comparisons between runs.
    pub fn without_timing(&self) -> ClaimReport {
        ClaimReport {
            elapsed: Duration::ZERO,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_ids_round_trip() {
        for c in ClaimId::ALL {
            assert_eq!(c.as_str().parse::<ClaimId>(), Ok(c));
        }
        assert!("t4".parse::<ClaimId>().is_err());
    }
}
