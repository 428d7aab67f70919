use ramify_core::intsieve::omega_histogram_block;
use ramify_core::primes::PrimeTable;
use ramify_core::{Histogram, MomentReport};
use serde::Serialize;

use super::{bins, blocks, distribution_stats, Bin, Ctx, KsSummary};
use crate::error::{CliError, CliResult};
use crate::output::OutputSet;
use crate::records::histogram_csv;

/// Integers per parallel work item.
const BLOCK: u64 = 1 << 22;

#[derive(Serialize)]
struct Summary {
    family: &'static str,
    #[serde(rename = "X")]
    x: u64,
    count: u64,
    omega: Vec<Bin>,
    moments: Option<MomentReport>,
    ks: Option<KsSummary>,
}

/// `omega(n)` histogram over `2 <= n <= x`, blocks merged in order.
pub fn histogram(ctx: &Ctx, x: u64, segment: usize) -> CliResult<Histogram> {
    if x < 2 {
        return Err(CliError::Domain("the integer sieve needs X >= 2".into()));
    }
    let table = PrimeTable::new(x)?;
    let mut total = Histogram::new();
    ctx.ordered(
        &blocks(2, x, BLOCK),
        |&(lo, hi)| Ok(omega_histogram_block(&table, lo, hi, segment)?),
        |h| {
            total.merge(&h);
            Ok(())
        },
    )?;
    if total.total() != x - 1 {
        return Err(CliError::Invariant(format!("sieve counted {} integers, expected {}", total.total(), x - 1)));
    }
    Ok(total)
}

pub fn run(ctx: &Ctx, out: &mut OutputSet, x: u64, segment: usize) -> CliResult<()> {
    let h = histogram(ctx, x, segment)?;
    out.write_bytes("-omega.csv", &histogram_csv(&h))?;
    let (moments, ks) = distribution_stats(&h, x, x)?;
    let summary = Summary { family: "integers", x, count: h.total(), omega: bins(&h), moments, ks };
    out.write_json(".json", &summary)
}
