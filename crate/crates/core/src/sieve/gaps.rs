use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::table::{base_primes, PrimeTable};
use super::SieveConfig;
use crate::error::SieveError;

/// One consecutive prime pair: `g_n = p_{n+1} - p_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GapRecord {
    pub n: u64,
    pub p_n: u64,
    pub p_next: u64,
    pub g_n: u64,
}

impl GapRecord {
    fn new(n: u64, p_n: u64, p_next: u64) -> Self {
        GapRecord {
            n,
            p_n,
            p_next,
            g_n: p_next - p_n,
        }
    }
}

fn check_gap_limit(limit: u64) -> Result<(), SieveError> {
    if limit < 3 {
        return Err(SieveError::Domain {
            what: "gap stream limit",
            value: limit,
            min: 3,
        });
    }
    Ok(())
}

/// Gap records in index order for all pairs with `p_next <= limit`.
///
/// The range is sieved one segment at a time; only the base primes and one
/// segment's primes are held in memory.
pub struct GapStream {
    limit: u64,
    window: u64,
    base: Vec<u64>,
    next_lo: u64,
    buf: Vec<u64>,
    pos: usize,
    prev: Option<(u64, u64)>,
}

impl GapStream {
    fn new(config: &SieveConfig, limit: u64) -> Result<Self, SieveError> {
        check_gap_limit(limit)?;
        let window = config.segment_size;
        config.check(limit.saturating_sub(window), limit)?;
        Ok(GapStream {
            limit,
            window,
            base: base_primes(limit.isqrt()),
            next_lo: 0,
            buf: Vec::new(),
            pos: 0,
            prev: None,
        })
    }

    fn next_prime(&mut self) -> Option<u64> {
        while self.pos == self.buf.len() {
            if self.next_lo > self.limit {
                return None;
            }
            let lo = self.next_lo;
            let hi = lo.saturating_add(self.window - 1).min(self.limit);
            let table = PrimeTable::build_with_base(lo, hi, self.window, &self.base);
            self.buf.clear();
            self.buf.extend(table.primes());
            self.pos = 0;
            self.next_lo = hi + 1;
        }
        let p = self.buf[self.pos];
        self.pos += 1;
        Some(p)
    }
}

impl Iterator for GapStream {
    type Item = GapRecord;

    fn next(&mut self) -> Option<GapRecord> {
        if self.prev.is_none() {
            let first = self.next_prime()?;
            self.prev = Some((1, first));
        }
        let (n, p) = self.prev?;
        let q = self.next_prime()?;
        self.prev = Some((n + 1, q));
        Some(GapRecord::new(n, p, q))
    }
}

impl SieveConfig {
    pub fn iterate_gaps(&self, limit: u64) -> Result<GapStream, SieveError> {
        GapStream::new(self, limit)
    }

    /// Widest gap starting below `limit` (`p_n < limit`); ties go to the
    /// smallest index. When `limit` is composite this includes the gap that
    /// straddles it.
    pub fn max_gap_up_to(&self, limit: u64) -> Result<GapRecord, SieveError> {
        let mut best: Option<GapRecord> = None;
        let mut last: Option<GapRecord> = None;
        let mut consider = |rec: GapRecord| {
            if best.is_none_or(|b| rec.g_n > b.g_n) {
                best = Some(rec);
            }
        };
        for rec in self.iterate_gaps(limit)? {
            consider(rec);
            last = Some(rec);
        }
        let last = last.expect("limit >= 3 yields the pair (2, 3)");
        if last.p_next < limit {
            // the straddling pair (p_last, next prime above limit)
            let mut margin = NEXT_PRIME_MARGIN;
            let straddle = loop {
                let hi = limit.saturating_add(margin);
                let ext = self.clone().with_limit(hi.max(self.limit));
                let table = ext.sieve(limit, hi)?;
                if let Some(q) = table.next_prime_after(limit) {
                    break GapRecord::new(last.n + 1, last.p_next, q);
                }
                margin *= 2;
            };
            consider(straddle);
        }
        Ok(best.expect("at least one record"))
    }
}

/// Streams every gap record with `p_next <= limit`.
pub fn iterate_gaps(limit: u64) -> Result<GapStream, SieveError> {
    SieveConfig::default().iterate_gaps(limit)
}

/// The widest gap with `p_n < limit`; ties go to the smallest index.
pub fn max_gap_up_to(limit: u64) -> Result<GapRecord, SieveError> {
    SieveConfig::default().max_gap_up_to(limit)
}

/// A contiguous slice of the prime sequence handed to one worker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapChunk {
    pub index: usize,
    /// Records in this chunk have `lo <= p_n <= hi`.
    pub lo: u64,
    pub hi: u64,
    /// Index of the first prime `>= lo`.
    pub first_n: u64,
}

const NEXT_PRIME_MARGIN: u64 = 4096;

/// Runs `visit` on every chunk of the gap sequence up to `limit`, in
/// parallel, returning the results in chunk order.
///
/// Chunks partition `[0, limit]` into windows of `chunk_len` numbers. A first
/// pass counts the primes per chunk so each worker knows the global index of
/// its first prime; the second pass re-sieves the chunk (plus a margin for
/// the successor of its last prime) and streams its records.
pub fn for_each_gap_chunk<R, F>(
    config: &SieveConfig,
    limit: u64,
    chunk_len: u64,
    visit: F,
) -> Result<Vec<R>, SieveError>
where
    R: Send,
    F: Fn(&GapChunk, &mut dyn Iterator<Item = GapRecord>) -> R + Sync,
{
    check_gap_limit(limit)?;
    let chunk_len = chunk_len.max(config.segment_size);
    config.check(limit.saturating_sub(chunk_len + NEXT_PRIME_MARGIN), limit)?;
    let base = base_primes(limit.isqrt());
    let seg = config.segment_size;

    let bounds: Vec<(u64, u64)> = (0..=limit / chunk_len)
        .map(|i| {
            let lo = i * chunk_len;
            (lo, (lo + chunk_len - 1).min(limit))
        })
        .collect();

    let counts: Vec<u64> = bounds
        .par_iter()
        .map(|&(lo, hi)| PrimeTable::build_with_base(lo, hi, seg, &base).len())
        .collect();

    let mut first_n = 1;
    let chunks: Vec<GapChunk> = bounds
        .iter()
        .zip(&counts)
        .enumerate()
        .map(|(index, (&(lo, hi), &count))| {
            let chunk = GapChunk {
                index,
                lo,
                hi,
                first_n,
            };
            first_n += count;
            chunk
        })
        .collect();

    Ok(chunks
        .par_iter()
        .map(|chunk| {
            let mut margin = NEXT_PRIME_MARGIN;
            let table = loop {
                let hi = chunk.hi.saturating_add(margin).min(limit);
                let table = PrimeTable::build_with_base(chunk.lo, hi, seg, &base);
                let has_successor = table.next_prime_after(chunk.hi).is_some();
                if has_successor || hi == limit {
                    break table;
                }
                margin *= 2;
            };
            let mut primes = table.primes().peekable();
            let mut n = chunk.first_n;
            let mut records = std::iter::from_fn(|| {
                let p = primes.next()?;
                if p > chunk.hi {
                    return None;
                }
                let q = *primes.peek()?;
                let rec = GapRecord::new(n, p, q);
                n += 1;
                Some(rec)
            });
            visit(chunk, &mut records)
        })
        .collect())
}
