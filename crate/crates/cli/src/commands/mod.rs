//! One module per pipeline. Each returns after writing its outputs into the
//! run's [`OutputSet`]; the caller writes the manifest.

pub mod analyze;
pub mod cubic;
pub mod figure;
pub mod integers;
pub mod model;
pub mod quadratic;

use ramify_core::stats::{ks_distance, StandardizedSample};
use ramify_core::{Histogram, MomentReport};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::RecordFormat;
use crate::error::CliResult;

/// Work items handed to the pool at a time. Results are consumed in item
/// order, so the batch size bounds memory without affecting outputs.
const BATCH: usize = 32;

/// Moment order reported by the enumeration summaries.
pub const SUMMARY_MOMENTS: u32 = 6;

pub const KS_CONVENTION: &str =
    "ECDF of omega steps at z = (w + 1/2 - mu)/sqrt(mu), mu = log log X; sup over both one-sided limits at each step";

pub struct Ctx {
    pub pool: rayon::ThreadPool,
    pub records: RecordFormat,
    pub quiet: bool,
}

impl Ctx {
    /// Maps `f` over `items` on the pool and feeds the results to `sink`
    /// strictly in item order.
    pub fn ordered<T, R>(
        &self,
        items: &[T],
        f: impl Fn(&T) -> CliResult<R> + Sync,
        mut sink: impl FnMut(R) -> CliResult<()>,
    ) -> CliResult<()>
    where
        T: Sync,
        R: Send,
    {
        for batch in items.chunks(BATCH) {
            let results: Vec<CliResult<R>> = self.pool.install(|| batch.par_iter().map(&f).collect());
            for r in results {
                sink(r?)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Bin {
    pub omega: u32,
    pub count: u64,
}

pub fn bins(h: &Histogram) -> Vec<Bin> {
    h.iter().map(|(omega, count)| Bin { omega, count }).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct KsSummary {
    pub distance: f64,
    pub mu: f64,
    pub convention: &'static str,
}

/// `count / X`: an empirical stand-in for the leading constant of the
/// counting function, which has no closed form. Always labelled as such.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantEstimate {
    pub value: f64,
    pub kind: &'static str,
}

impl ConstantEstimate {
    pub fn new(count: u64, x: u64) -> Self {
        ConstantEstimate { value: count as f64 / x as f64, kind: "empirical estimate: count / X" }
    }
}

/// Moments about `mu(X)` and the KS distance, when `X` is large enough for
/// `log log X > 0` and the histogram is non-empty.
pub fn distribution_stats(h: &Histogram, x: u64, z: u64) -> CliResult<(Option<MomentReport>, Option<KsSummary>)> {
    if h.is_empty() || ramify_core::loglog_mean(x as f64).is_err() {
        return Ok((None, None));
    }
    let moments = ramify_core::stats::histogram_moments(h, Some(x as f64), z, SUMMARY_MOMENTS)?;
    let sample = StandardizedSample::new(h.clone(), x as f64)?;
    let ks = KsSummary { distance: ks_distance(&sample), mu: sample.mu(), convention: KS_CONVENTION };
    Ok((Some(moments), Some(ks)))
}

/// `[lo, hi)` blocks covering `[start, end]`.
pub fn blocks(start: u64, end: u64, len: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut lo = start;
    while lo <= end {
        let hi = lo.saturating_add(len).min(end + 1);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_cover_exactly() {
        assert_eq!(blocks(2, 10, 4), [(2, 6), (6, 10), (10, 11)]);
        assert_eq!(blocks(2, 5, 4), [(2, 6)]);
        assert!(blocks(5, 4, 4).is_empty());
    }
}
