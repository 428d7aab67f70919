use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use ramify_core::cubic::GaloisFilter;
use ramify_core::intsieve::{DEFAULT_SEGMENT, MIN_SEGMENT};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Largest `X` (and `Z`) accepted on the command line.
pub const MAX_X: u64 = 1_000_000_000;
const MAX_SEGMENT: usize = 1 << 26;
/// Moduli tallied by the enumeration and analysis commands unless overridden.
pub const DEFAULT_MODULI: [u64; 6] = [2, 3, 5, 7, 6, 30];

#[derive(Parser, Debug)]
#[command(
    name = "ramify",
    version,
    about = "Ramified primes in quadratic and cubic fields: sieves, enumeration, model moments and figures"
)]
pub struct Cli {
    /// Worker threads (defaults to the available parallelism). Outputs do
    /// not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<NonZeroUsize>,

    /// Output directory.
    #[arg(long, global = true, env = "RAMIFY_OUT", default_value = "ramify-out")]
    pub out: PathBuf,

    /// How enumerated fields are written: CSV, little-endian binary, or not at all.
    #[arg(long, global = true, value_enum, default_value_t = RecordFormat::Csv)]
    pub records: RecordFormat,

    /// No progress lines on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    #[command(flatten)]
    Pipeline(Pipeline),
    /// Re-run the configuration stored in a manifest and check that every
    /// output reproduces byte for byte.
    Replay { manifest: PathBuf },
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Pipeline {
    /// Histogram of omega(n) over 2 <= n <= X.
    SieveIntegers {
        #[arg(long, value_parser = parse_bound)]
        x: u64,
        #[arg(long, default_value_t = DEFAULT_SEGMENT, value_parser = parse_segment)]
        segment: usize,
    },
    /// Quadratic fields with |D| <= X.
    EnumQuadratic {
        #[arg(long, value_parser = parse_bound)]
        x: u64,
        #[arg(long, default_value_t = DEFAULT_SEGMENT, value_parser = parse_segment)]
        segment: usize,
        /// Squarefree moduli q for the "q divides D" tally.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_MODULI)]
        moduli: Vec<u64>,
    },
    /// Cubic fields with |D| <= X.
    EnumCubic {
        #[arg(long, value_parser = parse_bound)]
        x: u64,
        /// Keep only one Galois type.
        #[arg(long, value_enum)]
        only: Option<Only>,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_MODULI)]
        moduli: Vec<u64>,
    },
    /// Moments of the Bernoulli model over primes p <= Z.
    ModelMoments {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=5))]
        d: u32,
        #[arg(long, value_parser = parse_bound)]
        z: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12))]
        k: u32,
        /// Also report moments about log log X scaled by (log log X)^{k/2}.
        #[arg(long, value_parser = parse_bound)]
        x: Option<u64>,
        /// Also write the exact law, capped at 64.
        #[arg(long)]
        law: bool,
    },
    /// Seeded Monte Carlo draws of the Bernoulli model.
    ModelSample {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=5))]
        d: u32,
        #[arg(long, value_parser = parse_bound)]
        z: u64,
        #[arg(long, value_parser = parse_count)]
        n: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=12))]
        k: u32,
    },
    /// Moments, KS distance and divisibility table of a records or
    /// histogram file.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_bound)]
        x: u64,
        /// Also analyse omega truncated to primes p <= Z against the model.
        #[arg(long, value_parser = parse_bound)]
        z: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12))]
        k: u32,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_MODULI)]
        moduli: Vec<u64>,
    },
    /// Bar-chart data (CSV) and SVG of an omega histogram.
    Figure {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, value_parser = parse_bound)]
        x: u64,
        #[arg(long, default_value_t = DEFAULT_SEGMENT, value_parser = parse_segment)]
        segment: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordFormat {
    Csv,
    Bin,
    None,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Only {
    S3,
    Cyclic,
}

pub fn galois_filter(only: Option<Only>) -> GaloisFilter {
    match only {
        None => GaloisFilter::All,
        Some(Only::S3) => GaloisFilter::S3Only,
        Some(Only::Cyclic) => GaloisFilter::CyclicOnly,
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    Cubic,
    Integers,
}

/// Everything that determines a run's outputs; stored in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub pipeline: Pipeline,
    pub records: RecordFormat,
}

impl Pipeline {
    pub fn name(&self) -> &'static str {
        match self {
            Pipeline::SieveIntegers { .. } => "sieve-integers",
            Pipeline::EnumQuadratic { .. } => "enum-quadratic",
            Pipeline::EnumCubic { .. } => "enum-cubic",
            Pipeline::ModelMoments { .. } => "model-moments",
            Pipeline::ModelSample { .. } => "model-sample",
            Pipeline::Analyze { .. } => "analyze",
            Pipeline::Figure { .. } => "figure",
        }
    }

    /// Re-checks the flag constraints, for configurations that did not come
    /// through the parser (manifests).
    pub fn validate(&self) -> CliResult<()> {
        let bound = |name: &str, v: u64| check_bound(v).map_err(|m| CliError::Config(format!("--{name}: {m}")));
        let segment = |v: usize| check_segment(v).map_err(|m| CliError::Config(format!("--segment: {m}")));
        let degree = |d: u32| {
            (2..=5).contains(&d).then_some(()).ok_or_else(|| CliError::Config(format!("--d: {d} is not in 2..=5")))
        };
        let order = |k: u32| {
            (1..=12).contains(&k).then_some(()).ok_or_else(|| CliError::Config(format!("--k: {k} is not in 1..=12")))
        };
        match *self {
            Pipeline::SieveIntegers { x, segment: s } | Pipeline::EnumQuadratic { x, segment: s, .. } => {
                bound("x", x)?;
                segment(s)
            }
            Pipeline::Figure { x, segment: s, .. } => {
                bound("x", x)?;
                segment(s)
            }
            Pipeline::EnumCubic { x, .. } => bound("x", x),
            Pipeline::ModelMoments { d, z, k, x, .. } => {
                degree(d)?;
                bound("z", z)?;
                order(k)?;
                x.map_or(Ok(()), |x| bound("x", x))
            }
            Pipeline::ModelSample { d, z, k, .. } => {
                degree(d)?;
                bound("z", z)?;
                order(k)
            }
            Pipeline::Analyze { x, z, k, .. } => {
                bound("x", x)?;
                order(k)?;
                z.map_or(Ok(()), |z| bound("z", z))
            }
        }
    }
}

/// Parses `123`, `1_000`, `1e8` or `10^8`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let t: String = s.trim().chars().filter(|&c| c != '_').collect();
    let bad = || format!("`{s}` is not a non-negative integer (forms: 123, 1e8, 10^8)");
    let pow = |base: u64, exp: &str| -> Result<u64, String> {
        let e: u32 = exp.parse().map_err(|_| bad())?;
        base.checked_pow(e).ok_or_else(|| format!("`{s}` overflows"))
    };
    if let Some((m, e)) = t.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| bad())?;
        m.checked_mul(pow(10, e)?).ok_or_else(|| format!("`{s}` overflows"))
    } else if let Some((b, e)) = t.split_once('^') {
        pow(b.parse().map_err(|_| bad())?, e)
    } else {
        t.parse().map_err(|_| bad())
    }
}

fn check_bound(v: u64) -> Result<(), String> {
    if v > MAX_X {
        Err(format!("{v} exceeds the supported maximum 10^9"))
    } else {
        Ok(())
    }
}

fn parse_bound(s: &str) -> Result<u64, String> {
    let v = parse_count(s)?;
    check_bound(v)?;
    Ok(v)
}

fn check_segment(v: usize) -> Result<(), String> {
    if (MIN_SEGMENT..=MAX_SEGMENT).contains(&v) {
        Ok(())
    } else {
        Err(format!("{v} is outside {MIN_SEGMENT}..={MAX_SEGMENT}"))
    }
}

fn parse_segment(s: &str) -> Result<usize, String> {
    let v = usize::try_from(parse_count(s)?).map_err(|_| format!("`{s}` is too large"))?;
    check_segment(v)?;
    Ok(v)
}
