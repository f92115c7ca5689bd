use serde::{Deserialize, Serialize};

use crate::bounds::IntervalRule;
use crate::error::VerifyError;
use crate::sieve::SieveConfig;

/// Upper ends `g(n)` for each rule, next to the actual next prime.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleRow {
    pub n: u64,
    /// One value per rule, in the table's rule order.
    pub values: Vec<f64>,
    pub next_prime: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleTable {
    pub rules: Vec<IntervalRule>,
    pub rows: Vec<RuleRow>,
}

/// Tabulates `g(n)` for `n_lo <= n <= n_hi` under each rule. Every rule must
/// apply from `n_lo` on.
pub fn compare_rules(
    config: &SieveConfig,
    n_lo: u64,
    n_hi: u64,
    rules: &[IntervalRule],
) -> Result<RuleTable, VerifyError> {
    if n_lo > n_hi {
        return Err(VerifyError::Parameter {
            what: "n_hi",
            value: n_hi as i64,
            min: n_lo as i64,
        });
    }
    for &rule in rules {
        rule.g(n_lo)?;
    }
    // a prime always lies in (n, 2n]
    let hi = n_hi.saturating_mul(2).max(2);
    let table = config
        .clone()
        .with_limit(config.limit.max(hi))
        .sieve(n_lo, hi)?;
    let rows = (n_lo..=n_hi)
        .map(|n| {
            let values = rules
                .iter()
                .map(|r| r.g(n))
                .collect::<Result<Vec<_>, _>>()?;
            let next_prime = table.next_prime_after(n).expect("a prime lies in (n, 2n]");
            Ok(RuleRow {
                n,
                values,
                next_prime,
            })
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    Ok(RuleTable {
        rules: rules.to_vec(),
        rows,
    })
}
