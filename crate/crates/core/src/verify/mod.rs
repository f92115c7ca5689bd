//! Exhaustive range verification.
//!
//! Each checker walks a parameter space, evaluates one inequality per point
//! and folds the outcomes into a [`ClaimReport`]. Parameter spaces are cut
//! into contiguous chunks of at least [`DEFAULT_CHUNK_POINTS`] points that run
//! in parallel; chunk results are merged in chunk order, so a report does not
//! depend on the number of workers.
//!
//! Slack is always "distance to the nearest violating value": `rhs - lhs` for
//! real-valued strict inequalities, and the integer step to the first failing
//! count for counting claims. A passing report therefore has positive
//! minimum slack even when a non-strict bound is met with equality.

mod claims;
mod compare;
mod report;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

pub use claims::{
    default_lemma_base, gap_interval_bounds, verify_basic_props, verify_firoozbakht,
    verify_gap_interval, verify_gap_upper, verify_lemmas, verify_theorem1, verify_theorem2,
    verify_theorem3,
};
pub use compare::{compare_rules, RuleRow, RuleTable};
pub use report::{ClaimId, ClaimReport, LatticeSummary, SlackPoint, Violation};

use crate::error::VerifyError;
use crate::sieve::SieveConfig;

pub const DEFAULT_VIOLATION_CAP: usize = 1000;
pub const DEFAULT_CHUNK_POINTS: u64 = 1 << 16;

/// Callback receiving `(points_done, points_total)` as chunks finish.
pub type ProgressFn = Arc<dyn Fn(u64, u64) + Send + Sync>;

/// Knobs shared by every checker.
#[derive(Clone)]
pub struct VerifyOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    pub sieve: SieveConfig,
    pub violation_cap: usize,
    pub chunk_points: u64,
    pub progress: Option<ProgressFn>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            workers: None,
            sieve: SieveConfig::default(),
            violation_cap: DEFAULT_VIOLATION_CAP,
            chunk_points: DEFAULT_CHUNK_POINTS,
            progress: None,
        }
    }
}

impl fmt::Debug for VerifyOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VerifyOptions")
            .field("workers", &self.workers)
            .field("sieve", &self.sieve)
            .field("violation_cap", &self.violation_cap)
            .field("chunk_points", &self.chunk_points)
            .field("progress", &self.progress.is_some())
            .finish()
    }
}

impl VerifyOptions {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    pub fn with_segment_size(mut self, segment_size: u64) -> Self {
        self.sieve.segment_size = segment_size;
        self
    }

    /// Runs `f` on the configured pool.
    pub(crate) fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> Result<R, VerifyError> {
        match self.workers {
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| VerifyError::Pool(e.to_string()))?;
                Ok(pool.install(f))
            }
            None => Ok(f()),
        }
    }
}

/// Outcome of evaluating the inequality at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Check {
    pub observed: f64,
    pub required: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Running totals for a slice of the parameter space.
#[derive(Clone, Debug, Default, PartialEq)]
pub(crate) struct Tally {
    pub cap: usize,
    pub scanned: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub min_slack: Option<SlackPoint>,
}

impl Tally {
    pub fn new(cap: usize) -> Self {
        Tally {
            cap,
            ..Tally::default()
        }
    }

    pub fn record(&mut self, check: Check, param: impl Fn() -> String) {
        self.scanned += 1;
        if !check.holds {
            self.violation_count += 1;
            if self.violations.len() < self.cap {
                self.violations.push(Violation {
                    param: param(),
                    observed: check.observed,
                    required: check.required,
                });
            }
        }
        if self
            .min_slack
            .as_ref()
            .is_none_or(|m| check.slack < m.slack)
        {
            self.min_slack = Some(SlackPoint {
                param: param(),
                slack: check.slack,
            });
        }
    }

    /// Appends a tally covering the points after this one.
    pub fn merge(&mut self, later: Tally) {
        self.scanned += later.scanned;
        self.violation_count += later.violation_count;
        let room = self.cap.saturating_sub(self.violations.len());
        self.violations
            .extend(later.violations.into_iter().take(room));
        if let Some(m) = later.min_slack {
            if self
                .min_slack
                .as_ref()
                .is_none_or(|cur| m.slack < cur.slack)
            {
                self.min_slack = Some(m);
            }
        }
    }
}

/// `inner` runs over `lo..=hi` for a fixed `outer` parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Row {
    pub outer: u64,
    pub lo: u64,
    pub hi: u64,
}

impl Row {
    fn len(&self) -> u64 {
        self.hi - self.lo + 1
    }
}

/// Groups rows into contiguous chunks of roughly `points` points, splitting
/// long rows.
pub(crate) fn partition_rows(rows: &[Row], points: u64) -> Vec<Vec<Row>> {
    let points = points.max(1);
    let mut chunks = Vec::new();
    let mut current = Vec::new();
    let mut filled = 0u64;
    for row in rows.iter().filter(|r| r.lo <= r.hi) {
        let mut lo = row.lo;
        while lo <= row.hi {
            let take = (points - filled).min(row.hi - lo + 1);
            current.push(Row {
                outer: row.outer,
                lo,
                hi: lo + take - 1,
            });
            filled += take;
            lo += take;
            if filled == points {
                chunks.push(std::mem::take(&mut current));
                filled = 0;
            }
        }
    }
    if !current.is_empty() {
        chunks.push(current);
    }
    chunks
}

/// Evaluates `eval` at every `(outer, inner)` point of `rows` in parallel
/// and merges the tallies in parameter order.
pub(crate) fn run_rows<E, P>(
    opts: &VerifyOptions,
    rows: &[Row],
    eval: E,
    param: P,
) -> Result<Tally, VerifyError>
where
    E: Fn(u64, u64) -> Result<Check, VerifyError> + Sync,
    P: Fn(u64, u64) -> String + Sync,
{
    let chunks = partition_rows(rows, opts.chunk_points);
    let total: u64 = rows.iter().filter(|r| r.lo <= r.hi).map(Row::len).sum();
    let done = AtomicU64::new(0);
    let cap = opts.violation_cap;
    let tallies: Vec<Result<Tally, VerifyError>> = opts.install(|| {
        chunks
            .par_iter()
            .map(|chunk| {
                let mut tally = Tally::new(cap);
                for row in chunk {
                    for inner in row.lo..=row.hi {
                        let check = eval(row.outer, inner)?;
                        tally.record(check, || param(row.outer, inner));
                    }
                }
                let now = done.fetch_add(tally.scanned, Ordering::Relaxed) + tally.scanned;
                if let Some(progress) = &opts.progress {
                    progress(now, total);
                }
                Ok(tally)
            })
            .collect()
    })?;
    merge_all(cap, tallies)
}

pub(crate) fn merge_all(
    cap: usize,
    tallies: impl IntoIterator<Item = Result<Tally, VerifyError>>,
) -> Result<Tally, VerifyError> {
    let mut total = Tally::new(cap);
    for t in tallies {
        total.merge(t?);
    }
    Ok(total)
}
