//! Cubic fields from class representatives: keep the forms whose ring is
//! maximal at every prime, i.e. the rings of integers.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::enumerate::{for_each_form_in_unit, work_units, WorkUnit};
use super::maximal::is_maximal_at;
use crate::error::{Error, Result};
use crate::primes::{isqrt, PrimeTable};
use crate::quadratic::FieldRecord;

/// Smallest absolute discriminant of a cubic field.
pub const MIN_CUBIC_DISCRIMINANT: u64 = 23;

/// Which Galois types to keep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaloisFilter {
    #[default]
    All,
    /// Non-Galois fields (Galois closure with group `S_3`).
    S3Only,
    /// Cyclic cubic fields.
    CyclicOnly,
}

impl GaloisFilter {
    fn keeps(self, cyclic: bool) -> bool {
        match self {
            GaloisFilter::All => true,
            GaloisFilter::S3Only => !cyclic,
            GaloisFilter::CyclicOnly => cyclic,
        }
    }
}

/// Counters returned by [`CubicFieldSearch::run_unit`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UnitStats {
    /// Irreducible class representatives examined.
    pub forms: u64,
    /// Fields emitted (after the Galois filter).
    pub fields: u64,
}

impl core::ops::AddAssign for UnitStats {
    fn add_assign(&mut self, o: Self) {
        self.forms += o.forms;
        self.fields += o.fields;
    }
}

/// Shared, read-only state for enumerating cubic fields with `|D| <= x`.
pub struct CubicFieldSearch<'a> {
    table: &'a PrimeTable,
    x: u64,
    filter: GaloisFilter,
}

impl<'a> CubicFieldSearch<'a> {
    /// The table must reach `cbrt(x)`; reaching `x` makes cofactor primality
    /// checks table lookups instead of Miller–Rabin.
    pub fn new(table: &'a PrimeTable, x: u64, filter: GaloisFilter) -> Result<Self> {
        if x < MIN_CUBIC_DISCRIMINANT {
            return Err(Error::domain("X", "cubic enumeration needs X >= 23"));
        }
        if table.limit() < crate::primes::icbrt(x) {
            return Err(Error::TableTooSmall { limit: table.limit(), needed: crate::primes::icbrt(x) });
        }
        Ok(CubicFieldSearch { table, x, filter })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn units(&self) -> Vec<WorkUnit> {
        work_units(self.x)
    }

    /// Runs one unit, emitting records in a fixed order.
    pub fn run_unit(&self, unit: WorkUnit, mut emit: impl FnMut(FieldRecord)) -> Result<UnitStats> {
        let mut stats = UnitStats::default();
        let mut failure = None;
        stats.forms = for_each_form_in_unit(self.x, unit, |f, disc| {
            if failure.is_some() {
                return;
            }
            let n = disc.unsigned_abs();
            let sig = match self.table.square_signature(n) {
                Ok(s) => s,
                Err(e) => {
                    failure = Some(e);
                    return;
                }
            };
            if !sig.square_primes().iter().all(|&p| is_maximal_at(f, p)) {
                return;
            }
            let cyclic = disc > 0 && {
                let r = isqrt(n);
                r * r == n
            };
            if self.filter.keeps(cyclic) {
                stats.fields += 1;
                emit(FieldRecord { discriminant: disc, omega: sig.omega, is_cyclic: cyclic });
            }
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(stats),
        }
    }
}

/// All cubic fields with `|D| <= x`, in work-unit order. Holds every record
/// in memory; large runs should drive [`CubicFieldSearch`] unit by unit.
pub fn enumerate_cubic_fields(x: u64, filter: GaloisFilter) -> Result<Vec<FieldRecord>> {
    let table = PrimeTable::new(x.max(MIN_CUBIC_DISCRIMINANT))?;
    let search = CubicFieldSearch::new(&table, x, filter)?;
    let mut out = Vec::new();
    for unit in search.units() {
        search.run_unit(unit, |r| out.push(r))?;
    }
    Ok(out)
}
