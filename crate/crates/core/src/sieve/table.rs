use rayon::prelude::*;

use super::interval::Interval;
use super::SieveConfig;
use crate::error::SieveError;

/// Words covered by one rank entry.
const BLOCK_WORDS: usize = 8;

/// Bit-packed primality over `[base, hi]`.
///
/// Only odd numbers are stored: bit `i` stands for `first_odd + 2i`. The
/// prime 2 is tracked by a flag. A rank entry per block of eight words holds
/// the number of odd primes before that block, so prefix counts cost at most
/// eight popcounts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTable {
    base: u64,
    hi: u64,
    first_odd: u64,
    nbits: u64,
    has_two: bool,
    bits: Vec<u64>,
    ranks: Vec<u64>,
    odd_total: u64,
    total: u64,
}

/// Odd primes up to `limit`, by a plain (unsegmented) odd-only sieve.
pub(crate) fn base_primes(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    // bit i <-> 2i + 1
    let nbits = (limit - 1) / 2 + 1;
    let mut composite = vec![0u64; nbits.div_ceil(64) as usize];
    let mut primes = Vec::new();
    let mut i = 1u64;
    while i < nbits {
        if composite[(i / 64) as usize] >> (i % 64) & 1 == 0 {
            let p = 2 * i + 1;
            primes.push(p);
            let mut j = p * p / 2;
            while j < nbits {
                composite[(j / 64) as usize] |= 1 << (j % 64);
                j += p;
            }
        }
        i += 1;
    }
    primes
}

/// Bytes a table over `[lo, hi]` needs, including its base primes.
pub(crate) fn estimate_bytes(lo: u64, hi: u64) -> u64 {
    let span = hi - lo + 1;
    let words = span / 128 + 2;
    let bitmap = words * 8;
    let ranks = (words / BLOCK_WORDS as u64 + 1) * 8;
    let root = hi.isqrt();
    // odd-only base sieve plus a generous bound on the number of base primes
    let base = root / 16 + 8 + (root / 2 + 1) * 8 / 4;
    bitmap + ranks + base
}

/// Sieves one window of the bitmap. `start` is the odd number represented
/// by bit 0 of `words`; `nbits` bits are live.
fn sieve_window(words: &mut [u64], start: u64, nbits: u64, primes: &[u64]) {
    words.fill(!0);
    let tail = nbits % 64;
    let live_words = nbits.div_ceil(64) as usize;
    for w in words.iter_mut().skip(live_words) {
        *w = 0;
    }
    if tail != 0 {
        words[live_words - 1] &= (1u64 << tail) - 1;
    }
    if nbits == 0 {
        return;
    }
    let end = start + 2 * (nbits - 1);
    if start == 1 {
        words[0] &= !1;
    }
    for &p in primes {
        let sq = p * p;
        if sq > end {
            break;
        }
        // first odd multiple of p that is >= max(p^2, start)
        let mut m = if sq >= start {
            sq
        } else {
            let r = start % p;
            let mut m = if r == 0 { start } else { start + (p - r) };
            if m % 2 == 0 {
                m += p;
            }
            m
        };
        let step = 2 * p;
        while m <= end {
            let i = (m - start) / 2;
            words[(i / 64) as usize] &= !(1u64 << (i % 64));
            m += step;
        }
    }
}

impl PrimeTable {
    pub(crate) fn build(lo: u64, hi: u64, config: &SieveConfig) -> Result<Self, SieveError> {
        config.check(lo, hi)?;
        let primes = base_primes(hi.isqrt());
        Ok(PrimeTable::build_with_base(
            lo,
            hi,
            config.segment_size,
            &primes,
        ))
    }

    /// Builds the table from precomputed odd base primes covering `sqrt(hi)`.
    pub(crate) fn build_with_base(lo: u64, hi: u64, segment_size: u64, primes: &[u64]) -> Self {
        let first_odd = lo | 1;
        let nbits = if first_odd > hi {
            0
        } else {
            (hi - first_odd) / 2 + 1
        };
        let nwords = nbits.div_ceil(64) as usize;
        let mut bits = vec![0u64; nwords];
        let seg_words = ((segment_size / 128).max(1)) as usize;

        bits.par_chunks_mut(seg_words)
            .enumerate()
            .for_each(|(i, chunk)| {
                let first_bit = (i * seg_words * 64) as u64;
                let live = (nbits - first_bit).min(chunk.len() as u64 * 64);
                sieve_window(chunk, first_odd + 2 * first_bit, live, primes);
            });

        let mut ranks = Vec::with_capacity(nwords / BLOCK_WORDS + 1);
        let mut acc = 0u64;
        for block in bits.chunks(BLOCK_WORDS) {
            ranks.push(acc);
            acc += block.iter().map(|w| u64::from(w.count_ones())).sum::<u64>();
        }
        let has_two = lo <= 2 && 2 <= hi;
        PrimeTable {
            base: lo,
            hi,
            first_odd,
            nbits,
            has_two,
            bits,
            ranks,
            odd_total: acc,
            total: acc + u64::from(has_two),
        }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    /// Number of primes in the whole table.
    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn bitmap(&self) -> &[u64] {
        &self.bits
    }

    fn check(&self, x: u64) -> Result<(), SieveError> {
        if x < self.base || x > self.hi {
            return Err(SieveError::OutOfRange {
                x,
                base: self.base,
                hi: self.hi,
            });
        }
        Ok(())
    }

    fn bit(&self, i: u64) -> bool {
        self.bits[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// Odd primes among the first `i` bits.
    fn rank(&self, i: u64) -> u64 {
        let word = (i / 64) as usize;
        let block = word / BLOCK_WORDS;
        let mut n = self.ranks.get(block).copied().unwrap_or(self.odd_total);
        for w in &self.bits[block * BLOCK_WORDS..word] {
            n += u64::from(w.count_ones());
        }
        let rem = i % 64;
        if rem != 0 {
            n += u64::from((self.bits[word] & ((1u64 << rem) - 1)).count_ones());
        }
        n
    }

    pub fn is_prime(&self, x: u64) -> Result<bool, SieveError> {
        self.check(x)?;
        Ok(match x {
            2 => true,
            _ if x % 2 == 0 => false,
            _ => self.bit((x - self.first_odd) / 2),
        })
    }

    /// Primes in `[base, x]`.
    pub fn count_upto(&self, x: u64) -> Result<u64, SieveError> {
        self.check(x)?;
        let two = u64::from(self.has_two && x >= 2);
        if x < self.first_odd {
            return Ok(two);
        }
        Ok(two + self.rank((x - self.first_odd) / 2 + 1))
    }

    /// Primes in the closed range `[a, b]`; an empty range counts zero even
    /// when it lies outside the table.
    pub fn count_closed(&self, a: u64, b: u64) -> Result<u64, SieveError> {
        if a > b {
            return Ok(0);
        }
        self.check(a)?;
        let upper = self.count_upto(b)?;
        let below = if a == self.base {
            0
        } else {
            self.count_upto(a - 1)?
        };
        Ok(upper - below)
    }

    pub fn count_in(&self, iv: &Interval) -> Result<u64, SieveError> {
        match iv.effective_closed() {
            Some((a, b)) => self.count_closed(a, b),
            None => Ok(0),
        }
    }

    /// The smallest prime `p > x` inside the table.
    pub fn next_prime_after(&self, x: u64) -> Option<u64> {
        if self.has_two && x < 2 {
            return Some(2);
        }
        let from = x.checked_add(1)?.max(self.first_odd);
        if from > self.hi || self.nbits == 0 {
            return None;
        }
        let mut i = (from - self.first_odd).div_ceil(2);
        while i < self.nbits {
            let w = (i / 64) as usize;
            let masked = self.bits[w] & (!0u64 << (i % 64));
            if masked != 0 {
                let j = w as u64 * 64 + u64::from(masked.trailing_zeros());
                return (j < self.nbits).then(|| self.first_odd + 2 * j);
            }
            i = (w as u64 + 1) * 64;
        }
        None
    }

    /// The `n`-th prime of the table (1-based, counted from `base`).
    pub fn nth(&self, n: u64) -> Option<u64> {
        if n == 0 || n > self.total {
            return None;
        }
        if self.has_two {
            if n == 1 {
                return Some(2);
            }
            return self.nth_odd(n - 1);
        }
        self.nth_odd(n)
    }

    fn nth_odd(&self, n: u64) -> Option<u64> {
        // last block whose rank is < n
        let block = self.ranks.partition_point(|&r| r < n) - 1;
        let mut seen = self.ranks[block];
        for (offset, &w) in self.bits[block * BLOCK_WORDS..].iter().enumerate() {
            let c = u64::from(w.count_ones());
            if seen + c >= n {
                let mut word = w;
                for _ in 0..(n - seen - 1) {
                    word &= word - 1;
                }
                let j =
                    ((block * BLOCK_WORDS + offset) * 64) as u64 + u64::from(word.trailing_zeros());
                return Some(self.first_odd + 2 * j);
            }
            seen += c;
        }
        None
    }

    pub fn primes(&self) -> Primes<'_> {
        Primes {
            table: self,
            two_pending: self.has_two,
            word: 0,
            current: self.bits.first().copied().unwrap_or(0),
        }
    }
}

/// Ascending iterator over the primes of a [`PrimeTable`].
pub struct Primes<'a> {
    table: &'a PrimeTable,
    two_pending: bool,
    word: usize,
    current: u64,
}

impl Iterator for Primes<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.two_pending {
            self.two_pending = false;
            return Some(2);
        }
        loop {
            if self.current != 0 {
                let j = self.word as u64 * 64 + u64::from(self.current.trailing_zeros());
                self.current &= self.current - 1;
                return Some(self.table.first_odd + 2 * j);
            }
            self.word += 1;
            self.current = *self.table.bits.get(self.word)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(lo: u64, hi: u64) -> PrimeTable {
        PrimeTable::build(lo, hi, &SieveConfig::default()).unwrap()
    }

    #[test]
    fn base_primes_small() {
        assert_eq!(base_primes(1), Vec::<u64>::new());
        assert_eq!(base_primes(2), Vec::<u64>::new());
        assert_eq!(base_primes(3), vec![3]);
        assert_eq!(base_primes(30), vec![3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn tiny_tables() {
        assert_eq!(table(0, 0).len(), 0);
        assert_eq!(table(0, 1).len(), 0);
        assert_eq!(table(2, 2).primes().collect::<Vec<_>>(), vec![2]);
        assert_eq!(table(14, 16).len(), 0);
        assert_eq!(table(3, 3).primes().collect::<Vec<_>>(), vec![3]);
        assert_eq!(table(1, 1).len(), 0);
    }

    #[test]
    fn queries_outside_range_fail() {
        let t = table(100, 200);
        assert!(t.is_prime(99).is_err());
        assert!(t.is_prime(201).is_err());
        assert!(t.count_upto(201).is_err());
        assert_eq!(t.count_closed(150, 140), Ok(0));
    }

    #[test]
    fn nth_and_next() {
        let t = table(0, 1000);
        assert_eq!(t.nth(1), Some(2));
        assert_eq!(t.nth(25), Some(97));
        assert_eq!(t.nth(168), Some(997));
        assert_eq!(t.nth(169), None);
        assert_eq!(t.next_prime_after(0), Some(2));
        assert_eq!(t.next_prime_after(2), Some(3));
        assert_eq!(t.next_prime_after(113), Some(127));
        assert_eq!(t.next_prime_after(997), None);

        let t = table(90, 130);
        assert_eq!(t.nth(1), Some(97));
        assert_eq!(t.next_prime_after(0), Some(97));
    }

    #[test]
    fn ranks_cross_block_boundaries() {
        let t = table(0, 200_000);
        let all: Vec<u64> = t.primes().collect();
        for (i, &p) in all.iter().enumerate().step_by(97) {
            assert_eq!(t.count_upto(p).unwrap(), i as u64 + 1);
            assert_eq!(t.count_upto(p - 1).unwrap(), i as u64);
            assert_eq!(t.nth(i as u64 + 1), Some(p));
        }
    }
}
