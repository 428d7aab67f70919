use std::io::Write;

use ramify_core::cubic::{CubicFieldSearch, GaloisFilter, MIN_CUBIC_DISCRIMINANT};
use ramify_core::primes::PrimeTable;
use ramify_core::stats::{DivisibilityRow, DivisibilityTally};
use ramify_core::{FamilySpec, Histogram, MomentReport};
use serde::Serialize;

use super::{bins, distribution_stats, Bin, ConstantEstimate, Ctx, KsSummary};
use crate::args::RecordFormat;
use crate::error::{CliError, CliResult};
use crate::output::OutputSet;
use crate::records::{encode, histogram_csv, preamble, records_suffix, Family};

const PROGRESS_EVERY: u64 = 1_000_000;

#[derive(Serialize)]
struct Summary {
    family: &'static str,
    #[serde(rename = "X")]
    x: u64,
    filter: GaloisFilter,
    /// Irreducible reduced forms examined.
    forms: u64,
    fields: u64,
    /// `fields / X`
    density_estimate: ConstantEstimate,
    positive: u64,
    negative: u64,
    cyclic: u64,
    omega: Vec<Bin>,
    moments: Option<MomentReport>,
    ks: Option<KsSummary>,
    divisibility: Vec<DivisibilityRow>,
}

struct Chunk {
    bytes: Vec<u8>,
    hist: Histogram,
    tally: DivisibilityTally,
    forms: u64,
    positive: u64,
    cyclic: u64,
}

pub struct Totals {
    pub hist: Histogram,
    pub tally: DivisibilityTally,
    pub forms: u64,
    pub positive: u64,
    pub cyclic: u64,
}

/// Runs the enumeration, streaming encoded records to `sink` in work-unit
/// order. Below the smallest cubic discriminant the result is empty.
pub fn enumerate(
    ctx: &Ctx,
    x: u64,
    filter: GaloisFilter,
    moduli: &[u64],
    format: RecordFormat,
    mut sink: impl FnMut(&[u8]) -> CliResult<()>,
) -> CliResult<Totals> {
    let empty_tally = DivisibilityTally::new(moduli)?;
    let mut t = Totals { hist: Histogram::new(), tally: empty_tally.clone(), forms: 0, positive: 0, cyclic: 0 };
    if x < MIN_CUBIC_DISCRIMINANT {
        return Ok(t);
    }
    let table = PrimeTable::new(x)?;
    let search = CubicFieldSearch::new(&table, x, filter)?;
    let units = search.units();
    let mut done = 0usize;
    let mut reported = 0u64;
    ctx.ordered(
        &units,
        |&unit| {
            let mut c = Chunk {
                bytes: Vec::new(),
                hist: Histogram::new(),
                tally: empty_tally.clone(),
                forms: 0,
                positive: 0,
                cyclic: 0,
            };
            let stats = search.run_unit(unit, |r| {
                encode(format, Family::Cubic, &r, &mut c.bytes);
                c.hist.add(u32::from(r.omega));
                c.tally.add(&r);
                c.positive += u64::from(r.discriminant > 0);
                c.cyclic += u64::from(r.is_cyclic);
            })?;
            c.forms = stats.forms;
            if stats.fields != c.hist.total() {
                return Err(CliError::Invariant("unit field count disagrees with its records".into()));
            }
            Ok(c)
        },
        |c| {
            sink(&c.bytes)?;
            t.hist.merge(&c.hist);
            t.tally.merge(&c.tally);
            t.forms += c.forms;
            t.positive += c.positive;
            t.cyclic += c.cyclic;
            done += 1;
            if !ctx.quiet && t.forms / PROGRESS_EVERY > reported {
                reported = t.forms / PROGRESS_EVERY;
                eprintln!(
                    "enum-cubic: {} forms, {} fields, {done}/{} work units",
                    t.forms,
                    t.hist.total(),
                    units.len()
                );
            }
            Ok(())
        },
    )?;
    Ok(t)
}

pub fn run(ctx: &Ctx, out: &mut OutputSet, x: u64, filter: GaloisFilter, moduli: &[u64]) -> CliResult<()> {
    let format = ctx.records;
    let mut writer = match records_suffix(format) {
        Some(suffix) => {
            let mut w = out.create(suffix)?;
            w.write_all(&preamble(format, Family::Cubic)).map_err(CliError::io(w.path()))?;
            Some(w)
        }
        None => None,
    };
    let t = enumerate(ctx, x, filter, moduli, format, |bytes| match writer.as_mut() {
        Some(w) => w.write_all(bytes).map_err(CliError::io(w.path())),
        None => Ok(()),
    })?;
    if let Some(w) = writer {
        out.finish(w)?;
    }
    out.write_bytes("-omega.csv", &histogram_csv(&t.hist))?;
    let (moments, ks) = distribution_stats(&t.hist, x, x)?;
    let divisibility = if t.tally.total == 0 { Vec::new() } else { t.tally.rows(FamilySpec::CUBIC)? };
    let summary = Summary {
        family: Family::Cubic.name(),
        x,
        filter,
        forms: t.forms,
        fields: t.hist.total(),
        density_estimate: ConstantEstimate::new(t.hist.total(), x),
        positive: t.positive,
        negative: t.hist.total() - t.positive,
        cyclic: t.cyclic,
        omega: bins(&t.hist),
        moments,
        ks,
        divisibility,
    };
    out.write_json(".json", &summary)
}
