//! `omega(n)` for every `n` in a range, by a segmented additive sieve.
//!
//! Each prime `p` adds one to the counter of every multiple of `p`. Primes
//! smaller than the segment keep a running "next multiple"; larger primes hit
//! a segment at most once and are kept in per-segment buckets, so a segment
//! only touches the large primes that actually divide something in it.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::primes::{isqrt, PrimeTable};

/// Smallest accepted segment length.
pub const MIN_SEGMENT: usize = 1 << 10;
pub const DEFAULT_SEGMENT: usize = 1 << 18;

/// Number of distinct prime divisors by trial division. Reference
/// implementation for tests and spot checks.
pub fn omega_of(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::domain("n", "omega(0) is undefined"));
    }
    let mut m = n;
    let mut count = 0;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            count += 1;
            while m % p == 0 {
                m /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        count += 1;
    }
    Ok(count)
}

/// One sieved segment: `omega[i]` is `omega(start + i)`. When square marking
/// is on, `odd_square[i]` says whether some odd `p^2` divides `start + i`.
pub struct Segment<'s> {
    pub start: u64,
    pub omega: &'s [u8],
    pub odd_square: Option<&'s [bool]>,
}

#[derive(Clone, Copy)]
struct BucketEntry {
    p: u32,
    next: u64,
}

/// Segment-by-segment sieve over `[lo, hi)`.
pub struct OmegaSegments<'a> {
    lo: u64,
    hi: u64,
    seg_len: usize,
    cursor: u64,
    small: Vec<(u32, u64)>,
    buckets: Vec<Vec<BucketEntry>>,
    squares: Option<Vec<(u64, u64)>>,
    counts: Vec<u8>,
    flags: Vec<bool>,
    _table: core::marker::PhantomData<&'a PrimeTable>,
}

impl<'a> OmegaSegments<'a> {
    /// Sieve `[lo, hi)` with `2 <= lo`. The table must contain every prime
    /// below `hi`.
    pub fn new(table: &'a PrimeTable, lo: u64, hi: u64, segment_size: usize, mark_odd_squares: bool) -> Result<Self> {
        if segment_size < MIN_SEGMENT {
            return Err(Error::domain("segment size", "must be at least 1024"));
        }
        if lo < 2 {
            return Err(Error::domain("sieve range", "must start at 2 or above"));
        }
        let hi = hi.max(lo);
        if hi > 0 && hi - 1 > table.limit() {
            return Err(Error::TableTooSmall { limit: table.limit(), needed: hi - 1 });
        }
        let seg = segment_size as u64;
        let n_segments = (hi - lo).div_ceil(seg) as usize;
        let mut small = Vec::new();
        let mut buckets: Vec<Vec<BucketEntry>> = vec![Vec::new(); n_segments];
        for &p in table.primes_up_to(hi.saturating_sub(1)) {
            let pp = u64::from(p);
            let first = lo.div_ceil(pp) * pp;
            if first >= hi {
                continue;
            }
            if pp < seg {
                small.push((p, first));
            } else {
                buckets[((first - lo) / seg) as usize].push(BucketEntry { p, next: first });
            }
        }
        let squares = mark_odd_squares.then(|| {
            table
                .primes_up_to(isqrt(hi.saturating_sub(1)))
                .iter()
                .skip(1)
                .map(|&p| {
                    let sq = u64::from(p) * u64::from(p);
                    (sq, lo.div_ceil(sq) * sq)
                })
                .collect()
        });
        Ok(OmegaSegments {
            lo,
            hi,
            seg_len: segment_size,
            cursor: lo,
            small,
            buckets,
            squares,
            counts: vec![0; segment_size],
            flags: if mark_odd_squares { vec![false; segment_size] } else { Vec::new() },
            _table: core::marker::PhantomData,
        })
    }

    pub fn next_segment(&mut self) -> Option<Segment<'_>> {
        if self.cursor >= self.hi {
            return None;
        }
        let start = self.cursor;
        let end = (start + self.seg_len as u64).min(self.hi);
        let len = (end - start) as usize;
        let counts = &mut self.counts[..len];
        counts.fill(0);

        for (p, next) in self.small.iter_mut() {
            let step = u64::from(*p);
            let mut m = *next;
            while m < end {
                counts[(m - start) as usize] += 1;
                m += step;
            }
            *next = m;
        }

        let index = ((start - self.lo) / self.seg_len as u64) as usize;
        let bucket = core::mem::take(&mut self.buckets[index]);
        for mut e in bucket {
            counts[(e.next - start) as usize] += 1;
            e.next += u64::from(e.p);
            if e.next < self.hi {
                let target = ((e.next - self.lo) / self.seg_len as u64) as usize;
                self.buckets[target].push(e);
            }
        }

        let odd_square = if let Some(squares) = self.squares.as_mut() {
            let flags = &mut self.flags[..len];
            flags.fill(false);
            for (sq, next) in squares.iter_mut() {
                let mut m = *next;
                while m < end {
                    flags[(m - start) as usize] = true;
                    m += *sq;
                }
                *next = m;
            }
            Some(&self.flags[..len])
        } else {
            None
        };

        self.cursor = end;
        Some(Segment { start, omega: &self.counts[..len], odd_square })
    }
}

/// Histogram of `omega(n)` for `lo <= n < hi`.
pub fn omega_histogram_block(table: &PrimeTable, lo: u64, hi: u64, segment_size: usize) -> Result<Histogram> {
    let mut segments = OmegaSegments::new(table, lo, hi, segment_size, false)?;
    let mut tally = [0u64; 16];
    while let Some(seg) = segments.next_segment() {
        for &w in seg.omega {
            tally[w as usize] += 1;
        }
    }
    let mut h = Histogram::new();
    for (w, &c) in tally.iter().enumerate() {
        if c > 0 {
            h.add_count(w as u32, c);
        }
    }
    Ok(h)
}

/// Histogram of `omega(n)` over `2 <= n <= x`; `n = 1` is left out.
pub fn omega_histogram(x: u64, segment_size: usize) -> Result<Histogram> {
    if x < 2 {
        return Err(Error::domain("X", "the integer sieve needs X >= 2"));
    }
    let table = PrimeTable::new(x)?;
    let mut h = omega_histogram_block(&table, 2, x + 1, segment_size)?;
    h.label = format!("integers 2..={x}");
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_of_examples() {
        assert_eq!(omega_of(1).unwrap(), 0);
        assert_eq!(omega_of(12).unwrap(), 2);
        assert_eq!(omega_of(1024).unwrap(), 1);
        assert_eq!(omega_of(2 * 3 * 5 * 7 * 11 * 13).unwrap(), 6);
        assert!(omega_of(0).is_err());
    }

    #[test]
    fn small_x() {
        let h = omega_histogram(10, MIN_SEGMENT).unwrap();
        assert_eq!(h.get(1), 7);
        assert_eq!(h.get(2), 2);
        assert_eq!(h.total(), 9);
        let h2 = omega_histogram(2, MIN_SEGMENT).unwrap();
        assert_eq!((h2.get(1), h2.total()), (1, 1));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(omega_histogram(1, MIN_SEGMENT).is_err());
        assert!(omega_histogram(100, 512).is_err());
    }

    #[test]
    fn matches_trial_division() {
        let x = 30_000u64;
        let brute: Histogram = (2..=x).map(|n| omega_of(n).unwrap()).collect();
        for seg in [MIN_SEGMENT, 5000, 1 << 16] {
            let h = omega_histogram(x, seg).unwrap();
            assert_eq!(h.iter().collect::<Vec<_>>(), brute.iter().collect::<Vec<_>>(), "segment {seg}");
        }
    }

    #[test]
    fn blocks_merge_to_whole() {
        let x = 50_000u64;
        let table = PrimeTable::new(x).unwrap();
        let whole = omega_histogram_block(&table, 2, x + 1, MIN_SEGMENT).unwrap();
        let mut parts = Histogram::new();
        let cuts = [2u64, 777, 12_345, 12_346, 40_000, x + 1];
        for w in cuts.windows(2) {
            parts.merge(&omega_histogram_block(&table, w[0], w[1], 2048).unwrap());
        }
        assert_eq!(whole, parts);
    }

    #[test]
    fn odd_square_marks() {
        let table = PrimeTable::new(5000).unwrap();
        let mut segs = OmegaSegments::new(&table, 2, 5001, MIN_SEGMENT, true).unwrap();
        while let Some(seg) = segs.next_segment() {
            let flags = seg.odd_square.unwrap();
            for (i, &f) in flags.iter().enumerate() {
                let n = seg.start + i as u64;
                let mut odd = n;
                while odd % 2 == 0 {
                    odd /= 2;
                }
                let brute = (3..).step_by(2).take_while(|d| d * d <= odd).any(|d| odd % (d * d) == 0);
                assert_eq!(f, brute, "n = {n}");
            }
        }
    }
}
