use std::fmt::Write;

use ramify_core::cubic::GaloisFilter;
use ramify_core::Histogram;

use super::{cubic, integers, Ctx};
use crate::args::{RecordFormat, Which};
use crate::error::CliResult;
use crate::output::OutputSet;
use crate::svg::bar_chart;

/// `omega,count,millions` with `millions` written exactly to six decimals.
pub fn figure_csv(h: &Histogram) -> String {
    let mut s = String::from("omega,count,millions\n");
    for (w, c) in h.iter() {
        let _ = writeln!(s, "{w},{c},{}.{:06}", c / 1_000_000, c % 1_000_000);
    }
    s
}

pub fn run(ctx: &Ctx, out: &mut OutputSet, which: Which, x: u64, segment: usize) -> CliResult<()> {
    let (h, y_label) = match which {
        Which::Integers => (integers::histogram(ctx, x, segment)?, "Integers (x 10^6)"),
        Which::Cubic => {
            let t = cubic::enumerate(ctx, x, GaloisFilter::All, &[], RecordFormat::None, |_| Ok(()))?;
            (t.hist, "Cubic fields (x 10^6)")
        }
    };
    let csv = figure_csv(&h);
    out.write_bytes(".csv", csv.as_bytes())?;
    let bars: Vec<(u32, f64)> = h.iter().map(|(w, c)| (w, c as f64 / 1e6)).collect();
    out.write_bytes(".svg", bar_chart(&bars, "Number of prime factors", y_label, &csv).as_bytes())
}
