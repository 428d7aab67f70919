use ramify_core::model::{exact_distribution, exact_moments, BernoulliSampler, DEFAULT_CAP};
use ramify_core::stats::histogram_moments;
use ramify_core::{BernoulliFamily, FamilySpec, Histogram, MomentReport, MomentSource};
use serde::Serialize;

use super::{bins, blocks, Bin, Ctx};
use crate::error::CliResult;
use crate::output::OutputSet;
use crate::records::histogram_csv;

/// Draws per parallel work item.
const DRAWS_PER_ITEM: u64 = 1 << 16;

pub fn moments(out: &mut OutputSet, d: u32, z: u64, k: u32, x: Option<u64>, law: bool) -> CliResult<()> {
    let fam = BernoulliFamily::new(FamilySpec::new(d)?, z)?;
    let mut report = exact_moments(&fam, k)?;
    if let Some(x) = x {
        report = report.with_standardization(x as f64)?;
    }
    out.write_json(".json", &report)?;
    if law {
        out.write_json("-law.json", &exact_distribution(&fam, DEFAULT_CAP)?)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SampleSummary {
    d: u32,
    #[serde(rename = "Z")]
    z: u64,
    n: u64,
    seed: u64,
    omega: Vec<Bin>,
    sampled: MomentReport,
    exact: MomentReport,
}

pub fn sample(ctx: &Ctx, out: &mut OutputSet, d: u32, z: u64, n: u64, seed: u64, k: u32) -> CliResult<()> {
    if n == 0 {
        return Err(crate::error::CliError::Domain("--n: need at least one draw".into()));
    }
    let fam = BernoulliFamily::new(FamilySpec::new(d)?, z)?;
    let sampler = BernoulliSampler::new(&fam, seed);
    let mut h = Histogram::new();
    ctx.ordered(
        &blocks(0, n - 1, DRAWS_PER_ITEM),
        |&(lo, hi)| Ok(sampler.draw_range(lo..hi)),
        |part| {
            h.merge(&part);
            Ok(())
        },
    )?;
    out.write_bytes("-omega.csv", &histogram_csv(&h))?;
    let mut sampled = histogram_moments(&h, None, z, k)?;
    sampled.source = MomentSource::ModelSampled;
    let summary = SampleSummary { d, z, n, seed, omega: bins(&h), sampled, exact: exact_moments(&fam, k)? };
    out.write_json(".json", &summary)
}
