//! Closed-form evaluators: the threshold function `f(k)`, prime-count and
//! prime-gap bounds, the lemma margins and the catalogue of interval rules
//! that guarantee a prime in `(n, g(n))`.
//!
//! Evaluators that need actual primes take a [`PrimeTable`] covering the
//! indices they touch; the convenience wrappers sieve one on demand.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::BoundsError;
use crate::numeric;
use crate::sieve::{self, PrimeTable, SieveConfig};

/// `e^γ`, with γ the Euler–Mascheroni constant.
pub const EXP_EULER_GAMMA: f64 = 1.78107241799;

/// Distance from an integer below which a double-precision ceiling is not
/// trusted.
pub const CEIL_GUARD: f64 = 1e-9;

/// Logarithm used on the left-hand sides of the lemma inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    Natural,
    Ten,
}

impl LogBase {
    pub const BOTH: [LogBase; 2] = [LogBase::Natural, LogBase::Ten];

    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Ten => x.log10(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::Natural => "ln",
            LogBase::Ten => "log10",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Two sides of a strict inequality `lhs < rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub base: LogBase,
}

impl Margin {
    pub fn new(lhs: f64, rhs: f64, base: LogBase) -> Self {
        let slack = rhs - lhs;
        Margin {
            lhs,
            rhs,
            slack,
            holds: slack > 0.0,
            base,
        }
    }
}

fn domain(what: &'static str, value: i64, min: i64) -> Result<(), BoundsError> {
    if value < min {
        return Err(BoundsError::Domain { what, value, min });
    }
    Ok(())
}

/// Ceiling of `x`, deferring to `recheck` when `x` lies within
/// [`CEIL_GUARD`] of an integer. Without a recheck such inputs are errors.
pub fn guarded_ceil(x: f64, recheck: Option<&dyn Fn() -> Option<i64>>) -> Result<i64, BoundsError> {
    if (x - x.round()).abs() >= CEIL_GUARD {
        return Ok(x.ceil() as i64);
    }
    recheck
        .and_then(|exact| exact())
        .ok_or(BoundsError::Ambiguous { value: x })
}

/// `f(k) = ceil(1.1 ln(2.5 k))`, rechecked in extended precision near
/// integers.
pub fn f_of_k(k: u64) -> Result<u32, BoundsError> {
    f_of_k_with(k, true)
}

pub fn f_of_k_with(k: u64, recheck: bool) -> Result<u32, BoundsError> {
    domain("f(k)", k as i64, 1)?;
    let x = 1.1 * (2.5 * k as f64).ln();
    // 1.1 ln(5k / 2)
    let exact = || numeric::ceil_scaled_ln(11, 10, 5 * u128::from(k), 2);
    let c = guarded_ceil(x, recheck.then_some(&exact as &dyn Fn() -> Option<i64>))?;
    Ok(c as u32)
}

/// Index `i` of the set `S_i = { k : f(k) = i + 1 }` containing `k`.
pub fn s_index(k: u64) -> Result<u32, BoundsError> {
    domain("s_index", k as i64, 2)?;
    Ok(f_of_k(k)? - 1)
}

/// Upper bound `kn/9 + k^2` on the number of primes between `n` and `kn`.
pub fn mps_upper_bound(n: u64, k: u64) -> f64 {
    let (n, k) = (n as f64, k as f64);
    k * n / 9.0 + k * k
}

/// `(n ln(n ln n / e), n ln(n ln n))`, which brackets `p_n` for `n >= 6`.
pub fn nth_prime_bounds(n: u64) -> Result<(f64, f64), BoundsError> {
    domain("nth_prime_bounds", n as i64, 6)?;
    let x = n as f64;
    let nlnn = x * x.ln();
    Ok((x * (nlnn / std::f64::consts::E).ln(), x * nlnn.ln()))
}

/// `p_n^(1 + 1/n)`.
pub fn firoozbakht_rhs(p_n: u64, n: u64) -> f64 {
    let n = n as f64;
    ((1.0 + 1.0 / n) * (p_n as f64).ln()).exp()
}

/// `(ln p)^2 - ln p`, the conditional bound on `g_n` for `n > 4`.
pub fn gap_upper_bound(p_n: u64) -> Result<f64, BoundsError> {
    domain("gap_upper_bound", p_n as i64, 11)?;
    let l = (p_n as f64).ln();
    Ok(l * l - l)
}

/// `(2 - eps) / e^γ * (ln p)^2`.
pub fn gap_lower_heuristic(p_n: u64, eps: f64) -> Result<f64, BoundsError> {
    if !(eps > 0.0 && eps <= 2.0) {
        return Err(BoundsError::Epsilon(eps));
    }
    domain("gap_lower_heuristic", p_n as i64, 2)?;
    let l = (p_n as f64).ln();
    Ok((2.0 - eps) / EXP_EULER_GAMMA * l * l)
}

/// A rule guaranteeing a prime in `(n, g(n))` for every `n >= n_min`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntervalRule {
    Bertrand,
    Nagura,
    Schoenfeld,
    Dusart1998,
    Dusart2010,
    Dusart2016,
    PaperGap,
}

impl IntervalRule {
    pub const ALL: [IntervalRule; 7] = [
        IntervalRule::Bertrand,
        IntervalRule::Nagura,
        IntervalRule::Schoenfeld,
        IntervalRule::Dusart1998,
        IntervalRule::Dusart2010,
        IntervalRule::Dusart2016,
        IntervalRule::PaperGap,
    ];

    pub fn n_min(self) -> u64 {
        match self {
            IntervalRule::Bertrand => 1,
            IntervalRule::Nagura => 25,
            IntervalRule::Schoenfeld => 2_010_760,
            IntervalRule::Dusart1998 => 3275,
            IntervalRule::Dusart2010 => 396_738,
            IntervalRule::Dusart2016 => 468_991_632,
            IntervalRule::PaperGap => 2,
        }
    }

    /// Lower-case token used on the command line and in CSV headers.
    pub fn name(self) -> &'static str {
        match self {
            IntervalRule::Bertrand => "bertrand",
            IntervalRule::Nagura => "nagura",
            IntervalRule::Schoenfeld => "schoenfeld",
            IntervalRule::Dusart1998 => "dusart1998",
            IntervalRule::Dusart2010 => "dusart2010",
            IntervalRule::Dusart2016 => "dusart2016",
            IntervalRule::PaperGap => "papergap",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            IntervalRule::Bertrand => "g(n) = 2n",
            IntervalRule::Nagura => "g(n) = 6n/5, n >= 25",
            IntervalRule::Schoenfeld => "g(n) = n(1 + 1/16597), n >= 2010760",
            IntervalRule::Dusart1998 => "g(n) = n(1 + 1/(2 ln^2 n)), n >= 3275",
            IntervalRule::Dusart2010 => "g(n) = n(1 + 1/(25 ln^2 n)), n >= 396738",
            IntervalRule::Dusart2016 => "g(n) = n(1 + 1/(5000 ln^2 n)), n >= 468991632",
            IntervalRule::PaperGap => "g(n) = n + n/ceil(1.1 ln(2.5n)), n >= 2",
        }
    }

    pub fn g(self, n: u64) -> Result<f64, BoundsError> {
        rule_g(self, n)
    }
}

impl fmt::Display for IntervalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IntervalRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        IntervalRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// Upper end `g(n)` of the prime-bearing interval for `rule`.
pub fn rule_g(rule: IntervalRule, n: u64) -> Result<f64, BoundsError> {
    if n < rule.n_min() {
        return Err(BoundsError::Threshold {
            rule: rule.name(),
            n_min: rule.n_min(),
            n,
        });
    }
    let x = n as f64;
    let ln2 = || x.ln() * x.ln();
    Ok(match rule {
        IntervalRule::Bertrand => 2.0 * x,
        IntervalRule::Nagura => 6.0 * x / 5.0,
        IntervalRule::Schoenfeld => x + x / 16597.0,
        IntervalRule::Dusart1998 => x + x / (2.0 * ln2()),
        IntervalRule::Dusart2010 => x + x / (25.0 * ln2()),
        IntervalRule::Dusart2016 => x + x / (5000.0 * ln2()),
        IntervalRule::PaperGap => x + x / f64::from(f_of_k(n)?),
    })
}

/// `|(log p_m)^2 - log p_m|` for the prime `p_m`.
fn log_square_gap(p: u64, base: LogBase) -> f64 {
    let l = base.log(p as f64);
    (l * l - l).abs()
}

fn nth(table: &PrimeTable, m: u64) -> Result<u64, BoundsError> {
    table
        .nth(m)
        .ok_or(BoundsError::Sieve(crate::error::SieveError::Domain {
            what: "prime table too small for index",
            value: m,
            min: 0,
        }))
}

/// Smallest table from 0 holding `p_m`.
pub fn table_for_index(config: &SieveConfig, m: u64) -> Result<PrimeTable, BoundsError> {
    Ok(config.sieve(0, sieve::nth_prime_ceiling(m.max(1)))?)
}

/// Lemma 1 margin: `|(log p_m)^2 - log p_m| < (k+1)(f(k)+1) - p_m` with
/// `m = f(k) + k - 3`.
pub fn lemma1_margin_in(table: &PrimeTable, k: u64, base: LogBase) -> Result<Margin, BoundsError> {
    domain("lemma1_margin", k as i64, 5)?;
    let f = u64::from(f_of_k(k)?);
    let p = nth(table, f + k - 3)?;
    let rhs = ((k + 1) * (f + 1)) as f64 - p as f64;
    Ok(Margin::new(log_square_gap(p, base), rhs, base))
}

/// Lemma 2 margin: `|(log p_m)^2 - log p_m| < (k+4+r)(f(k)+1) - p_m` with
/// `m = f(k) + k + r`, `r >= -2`.
pub fn lemma2_margin_in(
    table: &PrimeTable,
    k: u64,
    r: i64,
    base: LogBase,
) -> Result<Margin, BoundsError> {
    domain("lemma2_margin k", k as i64, 5)?;
    domain("lemma2_margin r", r, -2)?;
    let f = f_of_k(k)? as i64;
    let k = k as i64;
    let p = nth(table, (f + k + r) as u64)?;
    let rhs = ((k + 4 + r) * (f + 1)) as f64 - p as f64;
    Ok(Margin::new(log_square_gap(p, base), rhs, base))
}

/// Lemma 3 margin: `n < (2n/9 + 4) (log(n ln(n ln n)))^2`. The inner
/// logarithms are natural; `base` selects the outer one.
pub fn lemma3_margin_with(n: u64, base: LogBase) -> Result<Margin, BoundsError> {
    domain("lemma3_margin", n as i64, 5)?;
    let x = n as f64;
    let inner = x * (x * x.ln()).ln();
    let l = base.log(inner);
    Ok(Margin::new(x, (2.0 * x / 9.0 + 4.0) * l * l, base))
}

/// Lemma 1 margin under the natural logarithm.
pub fn lemma1_margin(k: u64) -> Result<Margin, BoundsError> {
    domain("lemma1_margin", k as i64, 5)?;
    let m = u64::from(f_of_k(k)?) + k - 3;
    let table = table_for_index(&SieveConfig::default(), m)?;
    lemma1_margin_in(&table, k, LogBase::Natural)
}

/// Lemma 2 margin under the natural logarithm.
pub fn lemma2_margin(k: u64, r: i64) -> Result<Margin, BoundsError> {
    domain("lemma2_margin k", k as i64, 5)?;
    domain("lemma2_margin r", r, -2)?;
    let m = (i64::from(f_of_k(k)?) + k as i64 + r) as u64;
    let table = table_for_index(&SieveConfig::default(), m)?;
    lemma2_margin_in(&table, k, r, LogBase::Natural)
}

/// Lemma 3 margin under the default base-10 outer logarithm.
pub fn lemma3_margin(n: u64) -> Result<Margin, BoundsError> {
    lemma3_margin_with(n, LogBase::Ten)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn f_of_k_examples() {
        assert_eq!(f_of_k(2), Ok(2));
        assert_eq!(f_of_k(5), Ok(3));
        assert_eq!(f_of_k(240), Ok(8));
        assert_eq!(f_of_k(10), Ok(4));
        assert_eq!(f_of_k(7), Ok(4));
        assert!(f_of_k(0).is_err());
    }

    #[test]
    fn ceiling_guard() {
        assert_eq!(guarded_ceil(2.5, None), Ok(3));
        assert_eq!(guarded_ceil(3.0 - 1e-6, None), Ok(3));
        assert_eq!(
            guarded_ceil(3.0 + 1e-12, None),
            Err(BoundsError::Ambiguous { value: 3.0 + 1e-12 })
        );
        let exact = || Some(4);
        assert_eq!(guarded_ceil(3.0 + 1e-12, Some(&exact)), Ok(4));
        let undecided = || None;
        assert!(guarded_ceil(3.0, Some(&undecided)).is_err());
    }

    #[test]
    fn s_index_examples() {
        assert_eq!(s_index(2), Ok(1));
        assert_eq!(s_index(5), Ok(2));
        assert_eq!(s_index(240), Ok(7));
        assert!(s_index(1).is_err());
    }

    #[test]
    fn mps_examples() {
        assert!(close(mps_upper_bound(10, 2), 20.0 / 9.0 + 4.0, 1e-12));
        assert_eq!(mps_upper_bound(9, 2), 6.0);
        assert!(close(mps_upper_bound(5, 2), 5.111, 1e-3));
    }

    #[test]
    fn nth_prime_bound_examples() {
        let (lo, hi) = nth_prime_bounds(6).unwrap();
        assert!(close(lo, 8.249_745, 1e-6) && close(hi, 14.249_745, 1e-6));
        let (lo, hi) = nth_prime_bounds(10).unwrap();
        assert!(close(lo, 21.366_175, 1e-6) && close(hi, 31.366_175, 1e-6));
        assert!(lo < 29.0 && 29.0 < hi);
        let (lo, hi) = nth_prime_bounds(100).unwrap();
        assert!(lo < 541.0 && 541.0 < hi);
        assert!(nth_prime_bounds(5).is_err());
    }

    #[test]
    fn firoozbakht_examples() {
        assert!(close(firoozbakht_rhs(2, 1), 4.0, 1e-12));
        assert!(close(firoozbakht_rhs(7, 4), 11.386, 1e-3));
        assert!(close(firoozbakht_rhs(11, 5), 17.769_337, 1e-6));
    }

    #[test]
    fn gap_bound_examples() {
        assert!(close(gap_upper_bound(11).unwrap(), 3.352, 1e-3));
        assert!(close(gap_upper_bound(13).unwrap(), 4.014_016, 1e-6));
        assert!(close(gap_upper_bound(101).unwrap(), 16.684_217, 1e-6));
        assert!(gap_upper_bound(7).is_err());

        assert_eq!(gap_lower_heuristic(11, 2.0), Ok(0.0));
        assert!(close(1.0 / EXP_EULER_GAMMA, 0.561, 1e-3));
        assert!(close(
            gap_lower_heuristic(11, 1.0).unwrap(),
            3.228_337,
            1e-6
        ));
        assert!(gap_lower_heuristic(11, 0.0).is_err());
        assert!(gap_lower_heuristic(11, 2.5).is_err());
        assert!(gap_lower_heuristic(11, f64::NAN).is_err());
    }

    #[test]
    fn rule_examples() {
        assert_eq!(rule_g(IntervalRule::Bertrand, 240), Ok(480.0));
        assert_eq!(rule_g(IntervalRule::Nagura, 240), Ok(288.0));
        assert_eq!(rule_g(IntervalRule::PaperGap, 240), Ok(270.0));
        assert_eq!(rule_g(IntervalRule::Bertrand, 300), Ok(600.0));
        assert!(matches!(
            rule_g(IntervalRule::Nagura, 24),
            Err(BoundsError::Threshold { n_min: 25, .. })
        ));
        assert!(rule_g(IntervalRule::Dusart2016, 468_991_631).is_err());
        let d = rule_g(IntervalRule::Dusart1998, 3275).unwrap();
        let l = 3275f64.ln();
        assert!(close(d, 3275.0 * (1.0 + 1.0 / (2.0 * l * l)), 1e-9));
    }

    #[test]
    fn rule_thresholds() {
        let want = [1, 25, 2_010_760, 3275, 396_738, 468_991_632, 2];
        for (rule, n_min) in IntervalRule::ALL.into_iter().zip(want) {
            assert_eq!(rule.n_min(), n_min);
            assert_eq!(rule.name().parse::<IntervalRule>(), Ok(rule));
        }
    }

    #[test]
    fn lemma_examples() {
        let m = lemma1_margin(5).unwrap();
        assert_eq!(m.rhs, 13.0);
        assert!(close(m.lhs, 3.352, 1e-3) && m.holds);
        assert!(close(m.slack, 9.648, 1e-3));

        let m = lemma1_margin(10).unwrap();
        assert_eq!(m.rhs, 24.0);
        assert!(close(m.lhs, 8.358, 1e-3) && m.holds);
        assert!(lemma1_margin(100).unwrap().holds);
        assert!(lemma1_margin(4).is_err());

        let m = lemma2_margin(5, -2).unwrap();
        assert_eq!(m.rhs, 15.0);
        assert!(close(m.lhs, 4.014_016, 1e-6) && m.holds);
        let m = lemma2_margin(7, 0).unwrap();
        assert_eq!(m.rhs, 24.0);
        assert!(close(m.lhs, 8.358, 1e-3) && m.holds);
        assert!(lemma2_margin(5, -3).is_err());

        let m = lemma3_margin(5).unwrap();
        assert_eq!(m.base, LogBase::Ten);
        assert!(close(m.rhs, 5.298, 1e-3) && m.holds);
        assert!(close(m.slack, 0.298, 1e-3));
        let m = lemma3_margin_with(5, LogBase::Natural).unwrap();
        assert!(close(m.rhs, 28.09, 1e-2));
        assert!(lemma3_margin(4).is_err());
    }

    #[test]
    fn margin_sign_convention() {
        let m = Margin::new(3.0, 3.0, LogBase::Natural);
        assert!(!m.holds && m.slack == 0.0);
        let m = Margin::new(-1.0, 2.0, LogBase::Ten);
        assert!(m.holds && m.slack == 3.0);
    }
}
