//! Quadratic fields, one per fundamental discriminant.
//!
//! `D` is fundamental when `D = 1 (mod 4)` is squarefree and `D != 1`, or
//! `D = 4m` with `m` squarefree and `m = 2, 3 (mod 4)`. Sieving `n = |D|`
//! once gives both `omega(n)` and whether an odd square divides `n`; the
//! 2-adic part is read off directly, so a single pass decides both signs.

use alloc::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::densities::ensure_squarefree;
use crate::error::{Error, Result};
use crate::intsieve::{OmegaSegments, DEFAULT_SEGMENT};
use crate::primes::PrimeTable;

/// One number field, described by its discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldRecord {
    pub discriminant: i64,
    /// Distinct primes dividing `|discriminant|`.
    pub omega: u8,
    /// Cyclic Galois group. Always true for quadratic fields; for cubic
    /// fields it holds exactly when the discriminant is a square.
    pub is_cyclic: bool,
}

impl FieldRecord {
    pub fn abs_discriminant(&self) -> u64 {
        self.discriminant.unsigned_abs()
    }
}

/// The (at most two) fundamental discriminants of absolute value `n`,
/// positive first. `odd_square` says whether an odd prime square divides `n`.
#[inline]
fn fundamental_signs(n: u64, odd_square: bool) -> (bool, bool) {
    if odd_square {
        return (false, false);
    }
    match n % 4 {
        1 => (n != 1, false),
        3 => (false, true),
        0 => {
            let v2 = n.trailing_zeros();
            if v2 > 3 {
                return (false, false);
            }
            let m = n / 4;
            let r = m % 4;
            (r == 2 || r == 3, r == 1 || r == 2)
        }
        _ => (false, false),
    }
}

/// Calls `emit` for every quadratic field with `lo <= |D| < hi`, ordered by
/// `|D|` with the positive discriminant first on ties.
pub fn for_each_fundamental_discriminant(
    table: &PrimeTable,
    lo: u64,
    hi: u64,
    segment_size: usize,
    mut emit: impl FnMut(FieldRecord),
) -> Result<()> {
    let lo = lo.max(2);
    if hi <= lo {
        return Ok(());
    }
    let mut segments = OmegaSegments::new(table, lo, hi, segment_size, true)?;
    while let Some(seg) = segments.next_segment() {
        let flags = seg.odd_square.expect("square marks requested");
        for (i, (&w, &sq)) in seg.omega.iter().zip(flags).enumerate() {
            let n = seg.start + i as u64;
            let (pos, neg) = fundamental_signs(n, sq);
            if pos {
                emit(FieldRecord { discriminant: n as i64, omega: w, is_cyclic: true });
            }
            if neg {
                emit(FieldRecord { discriminant: -(n as i64), omega: w, is_cyclic: true });
            }
        }
    }
    Ok(())
}

/// Streaming enumeration of all quadratic fields with `|D| <= x`, in the
/// order of [`for_each_fundamental_discriminant`]. Memory is one sieve
/// segment.
pub struct QuadraticFields<'a> {
    segments: OmegaSegments<'a>,
    pending: VecDeque<FieldRecord>,
}

impl<'a> QuadraticFields<'a> {
    pub fn new(table: &'a PrimeTable, x: u64, segment_size: usize) -> Result<Self> {
        if x < 3 {
            return Err(Error::domain("X", "quadratic enumeration needs X >= 3"));
        }
        Ok(QuadraticFields {
            segments: OmegaSegments::new(table, 2, x + 1, segment_size, true)?,
            pending: VecDeque::new(),
        })
    }
}

impl Iterator for QuadraticFields<'_> {
    type Item = FieldRecord;

    fn next(&mut self) -> Option<FieldRecord> {
        while self.pending.is_empty() {
            let seg = self.segments.next_segment()?;
            let flags = seg.odd_square.expect("square marks requested");
            for (i, (&w, &sq)) in seg.omega.iter().zip(flags).enumerate() {
                let n = seg.start + i as u64;
                let (pos, neg) = fundamental_signs(n, sq);
                if pos {
                    self.pending.push_back(FieldRecord { discriminant: n as i64, omega: w, is_cyclic: true });
                }
                if neg {
                    self.pending.push_back(FieldRecord { discriminant: -(n as i64), omega: w, is_cyclic: true });
                }
            }
        }
        self.pending.pop_front()
    }
}

/// All quadratic fields with `|D| <= x`, collected. Convenient at desk scale;
/// use [`QuadraticFields`] for large `x`.
pub fn enumerate_fundamental_discriminants(x: u64) -> Result<alloc::vec::Vec<FieldRecord>> {
    let table = PrimeTable::new(x.max(3))?;
    Ok(QuadraticFields::new(&table, x, DEFAULT_SEGMENT)?.collect())
}

/// Share of quadratic fields with `|D| <= x` whose discriminant is divisible
/// by the squarefree `q`.
pub fn quadratic_divisibility_ratio(x: u64, q: u64) -> Result<f64> {
    ensure_squarefree(q)?;
    let table = PrimeTable::new(x.max(3))?;
    let (mut hits, mut total) = (0u64, 0u64);
    for rec in QuadraticFields::new(&table, x, DEFAULT_SEGMENT)? {
        total += 1;
        if rec.discriminant.unsigned_abs() % q == 0 {
            hits += 1;
        }
    }
    if total == 0 {
        return Err(Error::Empty);
    }
    Ok(hits as f64 / total as f64)
}
