use ramify_core::primes::PrimeTable;
use ramify_core::quadratic::for_each_fundamental_discriminant;
use ramify_core::stats::{DivisibilityRow, DivisibilityTally};
use ramify_core::{FamilySpec, Histogram, MomentReport};
use serde::Serialize;

use super::{bins, blocks, distribution_stats, Bin, ConstantEstimate, Ctx, KsSummary};
use crate::error::{CliError, CliResult};
use crate::output::OutputSet;
use crate::records::{encode, histogram_csv, preamble, records_suffix, Family};

/// Values of `|D|` per parallel work item.
const BLOCK: u64 = 1 << 22;

#[derive(Serialize)]
struct Summary {
    family: &'static str,
    #[serde(rename = "X")]
    x: u64,
    fields: u64,
    /// `fields / X`
    density_estimate: ConstantEstimate,
    positive: u64,
    negative: u64,
    omega: Vec<Bin>,
    moments: Option<MomentReport>,
    ks: Option<KsSummary>,
    divisibility: Vec<DivisibilityRow>,
}

struct Chunk {
    bytes: Vec<u8>,
    hist: Histogram,
    tally: DivisibilityTally,
    positive: u64,
}

pub fn run(ctx: &Ctx, out: &mut OutputSet, x: u64, segment: usize, moduli: &[u64]) -> CliResult<()> {
    if x < 3 {
        return Err(CliError::Domain("quadratic enumeration needs X >= 3".into()));
    }
    let table = PrimeTable::new(x)?;
    let empty_tally = DivisibilityTally::new(moduli)?;
    let format = ctx.records;
    let mut writer = match records_suffix(format) {
        Some(suffix) => {
            let mut w = out.create(suffix)?;
            std::io::Write::write_all(&mut w, &preamble(format, Family::Quadratic)).map_err(CliError::io(w.path()))?;
            Some(w)
        }
        None => None,
    };
    let mut hist = Histogram::new();
    let mut tally = empty_tally.clone();
    let mut positive = 0;
    ctx.ordered(
        &blocks(3, x, BLOCK),
        |&(lo, hi)| {
            let mut c = Chunk { bytes: Vec::new(), hist: Histogram::new(), tally: empty_tally.clone(), positive: 0 };
            for_each_fundamental_discriminant(&table, lo, hi, segment, |r| {
                encode(format, Family::Quadratic, &r, &mut c.bytes);
                c.hist.add(u32::from(r.omega));
                c.tally.add(&r);
                c.positive += u64::from(r.discriminant > 0);
            })?;
            Ok(c)
        },
        |c| {
            if let Some(w) = writer.as_mut() {
                std::io::Write::write_all(w, &c.bytes).map_err(CliError::io(w.path()))?;
            }
            hist.merge(&c.hist);
            tally.merge(&c.tally);
            positive += c.positive;
            Ok(())
        },
    )?;
    if let Some(w) = writer {
        out.finish(w)?;
    }
    if hist.total() != tally.total {
        return Err(CliError::Invariant("histogram and tally disagree on the field count".into()));
    }
    out.write_bytes("-omega.csv", &histogram_csv(&hist))?;
    let (moments, ks) = distribution_stats(&hist, x, x)?;
    let summary = Summary {
        family: Family::Quadratic.name(),
        x,
        fields: hist.total(),
        density_estimate: ConstantEstimate::new(hist.total(), x),
        positive,
        negative: hist.total() - positive,
        omega: bins(&hist),
        moments,
        ks,
        divisibility: tally.rows(FamilySpec::QUADRATIC)?,
    };
    out.write_json(".json", &summary)
}
