use std::path::Path;

use ramify_core::model::exact_moments;
use ramify_core::stats::{
    central_from_raw, central_moment, ecdf_rows, histogram_moments, ks_distance, raw_moment, truncated_raw_moment,
    DivisibilityRow, DivisibilityTally, StandardizedSample, TruncatedOmega,
};
use ramify_core::{BernoulliFamily, Histogram, MomentReport};
use serde::Serialize;

use super::{KsSummary, KS_CONVENTION};
use crate::error::{CliError, CliResult};
use crate::output::OutputSet;
use crate::records::{Input, InputKind};

#[derive(Serialize)]
struct Report {
    input: String,
    family: &'static str,
    #[serde(rename = "X")]
    x: u64,
    count: u64,
    moments: MomentReport,
    ks: KsSummary,
    divisibility: Vec<DivisibilityRow>,
    truncation: Option<Truncation>,
}

#[derive(Serialize)]
struct Truncation {
    #[serde(rename = "Z")]
    z: u64,
    /// Moments of `omega(K; Z)`.
    moments: MomentReport,
    /// The Bernoulli model over `p <= Z`.
    model: MomentReport,
    /// Raw moments of `omega(K; Z)` next to the model's.
    versus_model: Vec<ModelRow>,
    /// Centred moments about `mu(X)`, directly and by binomial expansion
    /// of the raw moments.
    identity: Vec<IdentityRow>,
    /// Centred moment of `omega(K)` minus that of `omega(K; Z)`, about `mu(X)`.
    full_minus_truncated: Vec<f64>,
}

#[derive(Serialize)]
struct ModelRow {
    k: u32,
    data: f64,
    model: f64,
}

#[derive(Serialize)]
struct IdentityRow {
    k: u32,
    direct: f64,
    expansion: f64,
    difference: f64,
}

#[derive(Serialize)]
struct EcdfCsvRow {
    omega: u32,
    z: f64,
    empirical: f64,
    normal: f64,
}

/// File name stem for an analysis of `input`.
pub fn stem(input: &Path, x: u64, z: Option<u64>, k: u32) -> String {
    let base = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into());
    match z {
        Some(z) => format!("analyze-{base}-x{x}-z{z}-k{k}"),
        None => format!("analyze-{base}-x{x}-k{k}"),
    }
}

pub fn run(out: &mut OutputSet, input: &Path, x: u64, z: Option<u64>, k: u32, moduli: &[u64]) -> CliResult<()> {
    let file = Input::open(input)?;
    let mut tally = DivisibilityTally::new(moduli)?;
    let (family, hist, truncated) = match file.kind() {
        InputKind::Histogram => {
            if z.is_some() {
                return Err(CliError::Config("--z needs a records file, not a histogram".into()));
            }
            ("integers", file.read_histogram()?, None)
        }
        InputKind::Records(family) => {
            let trunc = z.map(TruncatedOmega::new).transpose()?;
            let mut hist = Histogram::new();
            let mut thist = Histogram::new();
            file.for_each_record(x, |r| {
                hist.add(u32::from(r.omega));
                tally.add(&r);
                if let Some(t) = &trunc {
                    thist.add(t.count(r.abs_discriminant()));
                }
                Ok(())
            })?;
            let truncated = match z {
                Some(z) => Some(truncation(&hist, &thist, family.spec(), x, z, k)?),
                None => None,
            };
            (family.name(), hist, truncated)
        }
    };
    if hist.is_empty() {
        return Err(CliError::Domain(format!("{}: no records", input.display())));
    }
    let xf = x as f64;
    let moments = histogram_moments(&hist, Some(xf), x, k)?;
    let sample = StandardizedSample::new(hist.clone(), xf)?;
    let ks = KsSummary { distance: ks_distance(&sample), mu: sample.mu(), convention: KS_CONVENTION };
    let divisibility = match file_family(family) {
        Some(spec) => tally.rows(spec)?,
        None => Vec::new(),
    };

    let mut csv = csv::Writer::from_writer(Vec::new());
    for r in ecdf_rows(&sample) {
        csv.serialize(EcdfCsvRow { omega: r.omega, z: r.z, empirical: r.empirical, normal: r.normal })
            .map_err(|e| CliError::Invariant(format!("CSV encoding failed: {e}")))?;
    }
    let bytes = csv.into_inner().map_err(|e| CliError::Invariant(format!("CSV encoding failed: {e}")))?;
    out.write_bytes("-ecdf.csv", &bytes)?;

    let report = Report {
        input: input.display().to_string(),
        family,
        x,
        count: hist.total(),
        moments,
        ks,
        divisibility,
        truncation: truncated,
    };
    out.write_json(".json", &report)
}

fn file_family(name: &str) -> Option<ramify_core::FamilySpec> {
    match name {
        "quadratic" => Some(ramify_core::FamilySpec::QUADRATIC),
        "cubic" => Some(ramify_core::FamilySpec::CUBIC),
        _ => None,
    }
}

fn truncation(
    full: &Histogram,
    trunc: &Histogram,
    spec: ramify_core::FamilySpec,
    x: u64,
    z: u64,
    k: u32,
) -> CliResult<Truncation> {
    let xf = x as f64;
    let mu = ramify_core::loglog_mean(xf)?;
    let model_family = BernoulliFamily::new(spec, z)?;
    let model = exact_moments(&model_family, k)?;
    let versus_model = (1..=k)
        .map(|j| {
            let (data, model) = truncated_raw_moment(trunc, spec, z, j, &model_family)?;
            Ok(ModelRow { k: j, data, model })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let raw = (0..=k).map(|j| raw_moment(trunc, j)).collect::<Result<Vec<_>, _>>()?;
    let identity = (0..=k)
        .map(|j| {
            let direct = central_moment(trunc, j, xf)?;
            let expansion = central_from_raw(&raw, mu, j);
            Ok(IdentityRow { k: j, direct, expansion, difference: direct - expansion })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let full_minus_truncated = (0..=k)
        .map(|j| Ok(central_moment(full, j, xf)? - central_moment(trunc, j, xf)?))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Truncation {
        z,
        moments: histogram_moments(trunc, Some(xf), z, k)?,
        model,
        versus_model,
        identity,
        full_minus_truncated,
    })
}
