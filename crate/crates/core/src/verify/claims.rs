use std::cmp::Ordering as CmpOrdering;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use super::report::{ClaimId, ClaimReport, LatticeSummary};
use super::{merge_all, run_rows, Check, Row, Tally, VerifyOptions};
use crate::bounds::{self, f_of_k, LogBase};
use crate::error::VerifyError;
use crate::numeric::{cmp_weighted_ln, CompensatedSum};
use crate::sieve::{self, for_each_gap_chunk, Boundary, GapRecord, Interval, PrimeTable};

/// Numbers per gap-stream chunk.
const GAP_CHUNK_LEN: u64 = 1 << 22;

/// Relative distance below which a log-space comparison is redone in
/// extended precision.
const LOG_TIE_GUARD: f64 = 1e-12;

fn require(what: &'static str, value: i64, min: i64) -> Result<(), VerifyError> {
    if value < min {
        return Err(VerifyError::Parameter { what, value, min });
    }
    Ok(())
}

fn checked_mul(a: u64, b: u64) -> Result<u64, VerifyError> {
    a.checked_mul(b).ok_or(VerifyError::Parameter {
        what: "range end overflows u64",
        value: i64::MAX,
        min: 0,
    })
}

struct Draft {
    claim: ClaimId,
    statement: String,
    range: String,
    boundary: Option<Boundary>,
    log_base: Option<LogBase>,
    lattice: Option<LatticeSummary>,
    notes: Vec<String>,
}

impl Draft {
    fn new(claim: ClaimId, statement: impl Into<String>, range: impl Into<String>) -> Self {
        Draft {
            claim,
            statement: statement.into(),
            range: range.into(),
            boundary: None,
            log_base: None,
            lattice: None,
            notes: Vec::new(),
        }
    }

    fn boundary(mut self, b: Boundary) -> Self {
        self.boundary = Some(b);
        self
    }

    fn base(mut self, b: LogBase) -> Self {
        self.log_base = Some(b);
        self
    }

    fn finish(self, tally: Tally, start: Instant) -> ClaimReport {
        ClaimReport {
            claim: self.claim,
            statement: self.statement,
            range: self.range,
            boundary: self.boundary,
            log_base: self.log_base,
            scanned: tally.scanned,
            violation_count: tally.violation_count,
            violations: tally.violations,
            min_slack: tally.min_slack,
            lattice: self.lattice,
            notes: self.notes,
            elapsed: start.elapsed(),
        }
    }
}

fn count_check(count: u64, required: u64) -> Check {
    // violated once the count drops to required - 1
    Check {
        observed: count as f64,
        required: required as f64,
        slack: count as f64 - required as f64 + 1.0,
        holds: count >= required,
    }
}

fn kn_param(k: u64, n: u64) -> String {
    format!("k={k};n={n}")
}

fn one_param(name: &'static str) -> impl Fn(u64, u64) -> String + Sync {
    move |_, v| format!("{name}={v}")
}

/// Prime counts between `n` and `kn` are at least `k - 1` for
/// `2 <= k <= k_max` and `f(k) <= n <= n_max`.
pub fn verify_theorem1(
    opts: &VerifyOptions,
    k_max: u64,
    n_max: u64,
    boundary: Boundary,
) -> Result<ClaimReport, VerifyError> {
    let start = Instant::now();
    require("k_max", k_max as i64, 2)?;
    require("n_max", n_max as i64, i64::from(f_of_k(k_max)?))?;
    let table = opts.sieve.sieve(0, checked_mul(k_max, n_max)?)?;
    let rows = (2..=k_max)
        .map(|k| {
            Ok(Row {
                outer: k,
                lo: u64::from(f_of_k(k)?),
                hi: n_max,
            })
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let tally = run_rows(
        opts,
        &rows,
        |k, n| {
            let iv = Interval::with_boundary(n, k * n, boundary)?;
            Ok(count_check(table.count_in(&iv)?, k - 1))
        },
        kn_param,
    )?;
    let mut draft = Draft::new(
        ClaimId::T1,
        format!(
            "#primes in {} n..kn >= k - 1 when n >= f(k); slack = count - (k - 2)",
            boundary
        ),
        format!("2 <= k <= {k_max}, f(k) <= n <= {n_max}"),
    )
    .boundary(boundary);
    if boundary != Boundary::OpenOpen {
        draft
            .notes
            .push("laxer than the adversarial open-open mode".to_string());
    }
    Ok(draft.finish(tally, start))
}

/// Prime counts between `n` and `kn` are at most `kn/9 + k^2` for
/// `2 <= k <= k_max`, `1 <= n <= n_max`.
pub fn verify_theorem2(
    opts: &VerifyOptions,
    k_max: u64,
    n_max: u64,
    boundary: Boundary,
) -> Result<ClaimReport, VerifyError> {
    let start = Instant::now();
    require("k_max", k_max as i64, 2)?;
    require("n_max", n_max as i64, 1)?;
    let table = opts.sieve.sieve(0, checked_mul(k_max, n_max)?)?;
    let rows: Vec<Row> = (2..=k_max)
        .map(|k| Row {
            outer: k,
            lo: 1,
            hi: n_max,
        })
        .collect();
    let tally = run_rows(
        opts,
        &rows,
        |k, n| {
            let iv = Interval::with_boundary(n, k * n, boundary)?;
            let count = table.count_in(&iv)?;
            let bound = bounds::mps_upper_bound(n, k);
            // the first violating count is floor(bound) + 1
            Ok(Check {
                observed: count as f64,
                required: bound,
                slack: bound.floor() + 1.0 - count as f64,
                holds: (count as f64) <= bound,
            })
        },
        kn_param,
    )?;
    let mut draft = Draft::new(
        ClaimId::T2,
        format!(
            "#primes in {} n..kn <= kn/9 + k^2; slack = floor(kn/9 + k^2) + 1 - count",
            boundary
        ),
        format!("2 <= k <= {k_max}, 1 <= n <= {n_max}"),
    )
    .boundary(boundary);
    if boundary != Boundary::ClosedClosed {
        draft
            .notes
            .push("laxer than the adversarial closed-closed mode".to_string());
    }
    Ok(draft.finish(tally, start))
}

/// Integer bounds `[a, b]` of `n..n + n/divisor` under `boundary`, or `None`
/// when the interval holds no integer.
pub fn gap_interval_bounds(n: u64, divisor: u64, boundary: Boundary) -> Option<(u64, u64)> {
    let a = n + u64::from(boundary.lo_open());
    // p < n (d + 1) / d  <=>  p d <= n (d + 1) - 1
    let num = n * (divisor + 1);
    let b = if boundary.hi_open() {
        (num - 1) / divisor
    } else {
        num / divisor
    };
    (a <= b).then_some((a, b))
}

/// A prime lies strictly between `k f(k)` and `k (f(k) + 1)` for
/// `2 <= k <= k_max`.
pub fn verify_theorem3(opts: &VerifyOptions, k_max: u64) -> Result<ClaimReport, VerifyError> {
    let start = Instant::now();
    require("k_max", k_max as i64, 2)?;
    let f_max = u64::from(f_of_k(k_max)?);
    let table = opts.sieve.sieve(0, checked_mul(k_max, f_max + 1)?)?;
    let rows = [Row {
        outer: 0,
        lo: 2,
        hi: k_max,
    }];
    let tally = run_rows(
        opts,
        &rows,
        |_, k| {
            let f = u64::from(f_of_k(k)?);
            let iv = Interval::open(k * f, k * (f + 1))?;
            Ok(count_check(table.count_in(&iv)?, 1))
        },
        one_param("k"),
    )?;
    Ok(Draft::new(
        ClaimId::T3,
        "#primes in open-open k f(k)..k (f(k) + 1) >= 1; slack = count",
        format!("2 <= k <= {k_max}"),
    )
    .boundary(Boundary::OpenOpen)
    .finish(tally, start))
}

fn gap_interval_count(
    table: &PrimeTable,
    n: u64,
    divisor: u64,
    boundary: Boundary,
) -> Result<u64, VerifyError> {
    Ok(match gap_interval_bounds(n, divisor, boundary) {
        Some((a, b)) => table.count_closed(a, b)?,
        None => 0,
    })
}

/// A prime lies in `(n, n + n/f(n))` for `2 <= n <= n_max`. This claim fails
/// at several small `n`; every failure is listed. The same check is repeated
/// on the lattice points `n = k f(k)`.
pub fn verify_gap_interval(
    opts: &VerifyOptions,
    n_max: u64,
    boundary: Boundary,
) -> Result<ClaimReport, VerifyError> {
    let start = Instant::now();
    require("n_max", n_max as i64, 2)?;
    // f(n) >= 2, so the interval ends by 3n/2
    let table = opts.sieve.sieve(0, n_max + n_max / 2 + 1)?;
    let rows = [Row {
        outer: 0,
        lo: 2,
        hi: n_max,
    }];
    let tally = run_rows(
        opts,
        &rows,
        |_, n| {
            let f = u64::from(f_of_k(n)?);
            Ok(count_check(gap_interval_count(&table, n, f, boundary)?, 1))
        },
        one_param("n"),
    )?;

    let mut lattice = LatticeSummary {
        points: 0,
        violations: Vec::new(),
    };
    let mut k = 2u64;
    loop {
        let n = k * u64::from(f_of_k(k)?);
        if n > n_max {
            break;
        }
        lattice.points += 1;
        let f = u64::from(f_of_k(n)?);
        if gap_interval_count(&table, n, f, boundary)? == 0 {
            lattice.violations.push(n);
        }
        k += 1;
    }

    let mut draft = Draft::new(
        ClaimId::GapInterval,
        format!("#primes in {} n..n + n/f(n) >= 1; slack = count", boundary),
        format!("2 <= n <= {n_max}"),
    )
    .boundary(boundary);
    if tally.violation_count > 0 {
        draft.notes.push(format!(
            "the blanket claim fails at {} value(s) of n; lattice points n = k f(k) are summarized separately ({} checked, {} failing)",
            tally.violation_count,
            lattice.points,
            lattice.violations.len()
        ));
    }
    draft.lattice = Some(lattice);
    Ok(draft.finish(tally, start))
}

/// Runs `visit` over all gap records with `p_next <= limit`, chunk-parallel,
/// and merges the tallies in order.
fn run_gaps<V>(opts: &VerifyOptions, limit: u64, visit: V) -> Result<Tally, VerifyError>
where
    V: Fn(&GapRecord, &mut Tally) -> Result<(), VerifyError> + Sync,
{
    let cap = opts.violation_cap;
    let chunk_len = GAP_CHUNK_LEN.max(opts.chunk_points);
    let tallies = opts.install(|| {
        for_each_gap_chunk(&opts.sieve, limit, chunk_len, |chunk, records| {
            let mut tally = Tally::new(cap);
            for rec in records {
                visit(&rec, &mut tally)?;
            }
            if let Some(progress) = &opts.progress {
                progress(chunk.hi.min(limit), limit);
            }
            Ok(tally)
        })
    })??;
    merge_all(cap, tallies)
}

fn gap_param(rec: &GapRecord) -> impl Fn() -> String + '_ {
    move || format!("n={};p_n={}", rec.n, rec.p_n)
}

/// `p_{n+1} < p_n^(1 + 1/n)` for every prime pair with `p_{n+1} <= limit`.
pub fn verify_firoozbakht(opts: &VerifyOptions, limit: u64) -> Result<ClaimReport, VerifyError> {
    let start = Instant::now();
    require("limit", limit as i64, 3)?;
    let rechecks = AtomicU64::new(0);
    let tally = run_gaps(opts, limit, |rec, tally| {
        let n = rec.n as f64;
        let lhs = (rec.p_next as f64).ln();
        let rhs = (1.0 + 1.0 / n) * (rec.p_n as f64).ln();
        let holds = if (rhs - lhs).abs() <= LOG_TIE_GUARD * rhs {
            rechecks.fetch_add(1, Ordering::Relaxed);
            // n ln p_{n+1} < (n + 1) ln p_n
            cmp_weighted_ln(rec.n, rec.p_next, rec.n + 1, rec.p_n) == Some(CmpOrdering::Less)
        } else {
            lhs < rhs
        };
        let required = bounds::firoozbakht_rhs(rec.p_n, rec.n);
        let check = Check {
            observed: rec.p_next as f64,
            required,
            slack: required - rec.p_next as f64,
            holds,
        };
        tally.record(check, gap_param(rec));
        Ok(())
    })?;
    let mut draft = Draft::new(
        ClaimId::Firoozbakht,
        "p_{n+1} < p_n^(1 + 1/n), compared as ln p_{n+1} < (1 + 1/n) ln p_n; slack = p_n^(1 + 1/n) - p_{n+1}",
        format!("prime pairs with p_(n+1) <= {limit}"),
    );
    let rechecks = rechecks.into_inner();
    if rechecks > 0 {
        draft.notes.push(format!(
            "{rechecks} near-tie(s) settled in extended precision"
        ));
    }
    Ok(draft.finish(tally, start))
}

/// `g_n < (ln p_n)^2 - ln p_n` for `n > 4` and `p_{n+1} <= limit`.
pub fn verify_gap_upper(opts: &VerifyOptions, limit: u64) -> Result<ClaimReport, VerifyError> {
    let start = Instant::now();
    require("limit", limit as i64, 13)?;
    let tally = run_gaps(opts, limit, |rec, tally| {
        if rec.n <= 4 {
            return Ok(());
        }
        let bound = bounds::gap_upper_bound(rec.p_n)?;
        let g = rec.g_n as f64;
        let check = Check {
            observed: g,
            required: bound,
            slack: bound - g,
            holds: g < bound,
        };
        tally.record(check, gap_param(rec));
        Ok(())
    })?;
    Ok(Draft::new(
        ClaimId::GapUpper,
        "g_n < (ln p_n)^2 - ln p_n for n > 4; slack = bound - g_n",
        format!("5 <= n, p_(n+1) <= {limit}"),
    )
    .base(LogBase::Natural)
    .finish(tally, start))
}

fn nth(table: &PrimeTable, n: u64) -> Result<u64, VerifyError> {
    table.nth(n).ok_or(VerifyError::Parameter {
        what: "prime index beyond sieved table",
        value: n as i64,
        min: 1,
    })
}

/// Three checks over `limit`: `n + 1 <= p_n` for `1 <= n <= limit`;
/// `ln(n#) <= n ln 4` for `2 <= n <= limit`; the `p_n` bracket for
/// `6 <= n <= limit`. Reports come back in that order.
pub fn verify_basic_props(
    opts: &VerifyOptions,
    limit: u64,
) -> Result<Vec<ClaimReport>, VerifyError> {
    require("limit", limit as i64, 6)?;
    let start = Instant::now();
    let table = opts.sieve.sieve(0, sieve::nth_prime_ceiling(limit))?;

    let tally = run_rows(
        opts,
        &[Row {
            outer: 0,
            lo: 1,
            hi: limit,
        }],
        |_, n| {
            let p = nth(&table, n)?;
            Ok(Check {
                observed: p as f64,
                required: (n + 1) as f64,
                slack: p as f64 - n as f64,
                holds: n < p,
            })
        },
        one_param("n"),
    )?;
    let prop4 = Draft::new(
        ClaimId::Prop4,
        "n + 1 <= p_n; slack = p_n - n",
        format!("1 <= n <= {limit}"),
    )
    .finish(tally, start);

    let start = Instant::now();
    let ln4 = 4f64.ln();
    let mut tally = Tally::new(opts.violation_cap);
    let mut sum = CompensatedSum::default();
    let mut primes = table.primes().peekable();
    for n in 2..=limit {
        while let Some(&p) = primes.peek() {
            if p > n {
                break;
            }
            sum.add((p as f64).ln());
            primes.next();
        }
        let lhs = sum.value();
        let rhs = n as f64 * ln4;
        let check = Check {
            observed: lhs,
            required: rhs,
            slack: rhs - lhs,
            holds: lhs <= rhs,
        };
        tally.record(check, || format!("n={n}"));
    }
    let prop6 = Draft::new(
        ClaimId::Prop6,
        "ln(n#) <= n ln 4; slack = n ln 4 - ln(n#)",
        format!("2 <= n <= {limit}"),
    )
    .base(LogBase::Natural)
    .finish(tally, start);

    let start = Instant::now();
    let tally = run_rows(
        opts,
        &[Row {
            outer: 0,
            lo: 6,
            hi: limit,
        }],
        |_, n| {
            let p = nth(&table, n)? as f64;
            let (lo, hi) = bounds::nth_prime_bounds(n)?;
            Ok(Check {
                observed: p,
                required: if p <= lo { lo } else { hi },
                slack: (p - lo).min(hi - p),
                holds: lo < p && p < hi,
            })
        },
        one_param("n"),
    )?;
    let brackets = Draft::new(
        ClaimId::NthPrimeBounds,
        "n ln(n ln n / e) < p_n < n ln(n ln n); slack = distance to the nearer bound",
        format!("6 <= n <= {limit}"),
    )
    .base(LogBase::Natural)
    .finish(tally, start);

    Ok(vec![prop4, prop6, brackets])
}

/// Log base each lemma is reported under by default.
pub fn default_lemma_base(claim: ClaimId) -> Option<LogBase> {
    match claim {
        ClaimId::L1 | ClaimId::L2 => Some(LogBase::Natural),
        ClaimId::L3 => Some(LogBase::Ten),
        _ => None,
    }
}

/// Sweeps the three lemma margins under both log bases: Lemma 1 over
/// `5 <= k <= k_max`, Lemma 2 over that `k` range and `-2 <= r <= r_max`,
/// Lemma 3 over `5 <= n <= n_max`. Returns six reports, default base first
/// for each lemma.
pub fn verify_lemmas(
    opts: &VerifyOptions,
    k_max: u64,
    r_max: i64,
    n_max: u64,
) -> Result<Vec<ClaimReport>, VerifyError> {
    require("k_max", k_max as i64, 5)?;
    require("r_max", r_max, -2)?;
    require("n_max", n_max as i64, 5)?;
    let max_index = u64::from(f_of_k(k_max)?) + k_max + r_max.max(0) as u64;
    let table = opts.sieve.sieve(0, sieve::nth_prime_ceiling(max_index))?;
    let margin_check = |m: bounds::Margin| Check {
        observed: m.lhs,
        required: m.rhs,
        slack: m.slack,
        holds: m.holds,
    };
    let ordered = |claim: ClaimId| {
        let first = default_lemma_base(claim).expect("lemma claim");
        let second = if first == LogBase::Natural {
            LogBase::Ten
        } else {
            LogBase::Natural
        };
        [first, second]
    };
    let default_note = |claim: ClaimId, base: LogBase| {
        if default_lemma_base(claim) == Some(base) {
            vec!["default log base".to_string()]
        } else {
            vec!["alternate log base".to_string()]
        }
    };

    let mut reports = Vec::with_capacity(6);
    for base in ordered(ClaimId::L1) {
        let start = Instant::now();
        let tally = run_rows(
            opts,
            &[Row {
                outer: 0,
                lo: 5,
                hi: k_max,
            }],
            |_, k| Ok(margin_check(bounds::lemma1_margin_in(&table, k, base)?)),
            one_param("k"),
        )?;
        let mut d = Draft::new(
            ClaimId::L1,
            "|log(p_m)^2 - log p_m| < (k + 1)(f(k) + 1) - p_m, m = f(k) + k - 3; slack = rhs - lhs",
            format!("5 <= k <= {k_max}"),
        )
        .base(base);
        d.notes = default_note(ClaimId::L1, base);
        reports.push(d.finish(tally, start));
    }
    let l2_rows: Vec<Row> = (5..=k_max)
        .map(|k| Row {
            outer: k,
            lo: 0,
            hi: (r_max + 2) as u64,
        })
        .collect();
    for base in ordered(ClaimId::L2) {
        let start = Instant::now();
        let tally = run_rows(
            opts,
            &l2_rows,
            |k, r| {
                Ok(margin_check(bounds::lemma2_margin_in(
                    &table,
                    k,
                    r as i64 - 2,
                    base,
                )?))
            },
            |k, r| format!("k={k};r={}", r as i64 - 2),
        )?;
        let mut d = Draft::new(
            ClaimId::L2,
            "|log(p_m)^2 - log p_m| < (k + 4 + r)(f(k) + 1) - p_m, m = f(k) + k + r; slack = rhs - lhs",
            format!("5 <= k <= {k_max}, -2 <= r <= {r_max}"),
        )
        .base(base);
        d.notes = default_note(ClaimId::L2, base);
        reports.push(d.finish(tally, start));
    }
    for base in ordered(ClaimId::L3) {
        let start = Instant::now();
        let tally = run_rows(
            opts,
            &[Row {
                outer: 0,
                lo: 5,
                hi: n_max,
            }],
            |_, n| Ok(margin_check(bounds::lemma3_margin_with(n, base)?)),
            one_param("n"),
        )?;
        let mut d = Draft::new(
            ClaimId::L3,
            "n < (2n/9 + 4) log(n ln(n ln n))^2; slack = rhs - n",
            format!("5 <= n <= {n_max}"),
        )
        .base(base);
        d.notes = default_note(ClaimId::L3, base);
        reports.push(d.finish(tally, start));
    }
    Ok(reports)
}
