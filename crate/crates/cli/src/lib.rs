//! The `ramify` command line: runs sieves, field enumerations, model
//! computations and analyses, writing each run's outputs together with a
//! manifest (`<stem>.manifest.json`) that records the configuration and
//! the SHA-256 of every output.
//!
//! Parallel work is split into fixed units and merged in unit order, so
//! every CSV and JSON output is byte-identical for any `--workers`.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod records;
pub mod svg;

use std::path::{Path, PathBuf};
use std::time::Instant;

use args::{galois_filter, Cli, Command, Pipeline, RunConfig};
use commands::Ctx;
use error::{CliError, CliResult};
use output::{Manifest, OutputSet};

/// A finished run: where its manifest went and what it says.
pub struct Outcome {
    pub manifest_path: PathBuf,
    pub manifest: Manifest,
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let workers = match cli.workers {
        Some(n) => n.get(),
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    match &cli.command {
        Command::Pipeline(p) => {
            execute(RunConfig { pipeline: p.clone(), records: cli.records }, &cli.out, workers, cli.quiet)
        }
        Command::Replay { manifest } => replay(manifest, &cli.out, workers, cli.quiet),
    }
}

/// Runs one configuration into `out` and writes its manifest.
pub fn execute(config: RunConfig, out: &Path, workers: usize, quiet: bool) -> CliResult<Outcome> {
    config.pipeline.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {workers} workers: {e}")))?;
    let ctx = Ctx { pool, records: config.records, quiet };
    let mut set = OutputSet::new(out, stem(&config.pipeline))?;
    let start = Instant::now();
    match &config.pipeline {
        Pipeline::SieveIntegers { x, segment } => commands::integers::run(&ctx, &mut set, *x, *segment)?,
        Pipeline::EnumQuadratic { x, segment, moduli } => {
            commands::quadratic::run(&ctx, &mut set, *x, *segment, moduli)?
        }
        Pipeline::EnumCubic { x, only, moduli } => {
            commands::cubic::run(&ctx, &mut set, *x, galois_filter(*only), moduli)?
        }
        Pipeline::ModelMoments { d, z, k, x, law } => commands::model::moments(&mut set, *d, *z, *k, *x, *law)?,
        Pipeline::ModelSample { d, z, n, seed, k } => commands::model::sample(&ctx, &mut set, *d, *z, *n, *seed, *k)?,
        Pipeline::Analyze { input, x, z, k, moduli } => commands::analyze::run(&mut set, input, *x, *z, *k, moduli)?,
        Pipeline::Figure { which, x, segment } => commands::figure::run(&ctx, &mut set, *which, *x, *segment)?,
    }
    let wall = start.elapsed().as_secs_f64();
    let (manifest_path, manifest) = set.write_manifest(config, workers, wall)?;
    Ok(Outcome { manifest_path, manifest })
}

/// Re-runs a manifest's configuration and compares output checksums.
pub fn replay(path: &Path, out: &Path, workers: usize, quiet: bool) -> CliResult<Outcome> {
    let recorded = Manifest::read(path)?;
    let outcome = execute(recorded.config.clone(), out, workers, quiet)?;
    if outcome.manifest.outputs != recorded.outputs {
        let differing: Vec<&str> = recorded
            .outputs
            .iter()
            .filter(|e| !outcome.manifest.outputs.contains(e))
            .map(|e| e.file.as_str())
            .collect();
        return Err(CliError::Invariant(format!(
            "replay of {} did not reproduce: {}",
            path.display(),
            differing.join(", ")
        )));
    }
    Ok(outcome)
}

/// File-name stem of a run; distinct configurations get distinct stems.
pub fn stem(p: &Pipeline) -> String {
    let moduli = |m: &[u64]| {
        if m == args::DEFAULT_MODULI {
            String::new()
        } else {
            format!("-q{}", m.iter().map(u64::to_string).collect::<Vec<_>>().join("_"))
        }
    };
    let segment = |s: usize| {
        if s == ramify_core::intsieve::DEFAULT_SEGMENT {
            String::new()
        } else {
            format!("-s{s}")
        }
    };
    match p {
        Pipeline::SieveIntegers { x, segment: s } => format!("integers-x{x}{}", segment(*s)),
        Pipeline::EnumQuadratic { x, segment: s, moduli: m } => format!("quadratic-x{x}{}{}", segment(*s), moduli(m)),
        Pipeline::EnumCubic { x, only, moduli: m } => {
            let only = match only {
                None => "",
                Some(args::Only::S3) => "-s3",
                Some(args::Only::Cyclic) => "-cyclic",
            };
            format!("cubic-x{x}{only}{}", moduli(m))
        }
        Pipeline::ModelMoments { d, z, k, x, .. } => match x {
            Some(x) => format!("model-d{d}-z{z}-k{k}-x{x}"),
            None => format!("model-d{d}-z{z}-k{k}"),
        },
        Pipeline::ModelSample { d, z, n, seed, k } => format!("sample-d{d}-z{z}-n{n}-seed{seed}-k{k}"),
        Pipeline::Analyze { input, x, z, k, moduli: m } => {
            format!("{}{}", commands::analyze::stem(input, *x, *z, *k), moduli(m))
        }
        Pipeline::Figure { which, x, segment: s } => {
            let which = match which {
                args::Which::Cubic => "cubic",
                args::Which::Integers => "integers",
            };
            format!("figure-{which}-x{x}{}", segment(*s))
        }
    }
}
