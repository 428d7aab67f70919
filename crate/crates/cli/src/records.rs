//! Field-record files: CSV (`disc,omega` for quadratic, `disc,omega,cyclic`
//! for cubic) or a binary dump of little-endian `i64` discriminants behind
//! an 8-byte magic. Histogram files (`omega,count`) are read here as well.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use ramify_core::primes::PrimeTable;
use ramify_core::{FamilySpec, FieldRecord, Histogram};
use serde::Deserialize;

use crate::args::RecordFormat;
use crate::error::{CliError, CliResult};

pub const QUADRATIC_MAGIC: &[u8; 8] = b"RAMLABQ1";
pub const CUBIC_MAGIC: &[u8; 8] = b"RAMLABC1";
pub const QUADRATIC_HEADER: &str = "disc,omega";
pub const CUBIC_HEADER: &str = "disc,omega,cyclic";
pub const HISTOGRAM_HEADER: &str = "omega,count";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Quadratic,
    Cubic,
}

impl Family {
    pub fn spec(self) -> FamilySpec {
        match self {
            Family::Quadratic => FamilySpec::QUADRATIC,
            Family::Cubic => FamilySpec::CUBIC,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Quadratic => "quadratic",
            Family::Cubic => "cubic",
        }
    }

    fn magic(self) -> &'static [u8; 8] {
        match self {
            Family::Quadratic => QUADRATIC_MAGIC,
            Family::Cubic => CUBIC_MAGIC,
        }
    }

    fn header(self) -> &'static str {
        match self {
            Family::Quadratic => QUADRATIC_HEADER,
            Family::Cubic => CUBIC_HEADER,
        }
    }
}

/// The file preamble for a records file.
pub fn preamble(format: RecordFormat, family: Family) -> Vec<u8> {
    match format {
        RecordFormat::Csv => format!("{}\n", family.header()).into_bytes(),
        RecordFormat::Bin => family.magic().to_vec(),
        RecordFormat::None => Vec::new(),
    }
}

/// Appends one record in the chosen format.
#[inline]
pub fn encode(format: RecordFormat, family: Family, rec: &FieldRecord, buf: &mut Vec<u8>) {
    match format {
        RecordFormat::Csv => {
            let _ = match family {
                Family::Quadratic => writeln!(buf, "{},{}", rec.discriminant, rec.omega),
                Family::Cubic => writeln!(buf, "{},{},{}", rec.discriminant, rec.omega, u8::from(rec.is_cyclic)),
            };
        }
        RecordFormat::Bin => buf.extend_from_slice(&rec.discriminant.to_le_bytes()),
        RecordFormat::None => {}
    }
}

pub fn records_suffix(format: RecordFormat) -> Option<&'static str> {
    match format {
        RecordFormat::Csv => Some("-records.csv"),
        RecordFormat::Bin => Some("-records.bin"),
        RecordFormat::None => None,
    }
}

/// What an input file holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputKind {
    Records(Family),
    Histogram,
}

enum Source {
    Binary(BufReader<File>),
    Csv(csv::Reader<BufReader<File>>),
}

/// A records or histogram file opened for streaming.
pub struct Input {
    kind: InputKind,
    source: Source,
    path: std::path::PathBuf,
}

#[derive(Deserialize)]
struct CsvRecord {
    disc: i64,
    omega: u8,
    #[serde(default)]
    cyclic: Option<u8>,
}

#[derive(Deserialize)]
struct CsvBin {
    omega: u32,
    count: u64,
}

impl Input {
    pub fn open(path: &Path) -> CliResult<Input> {
        let mut file = BufReader::new(File::open(path).map_err(CliError::io(path))?);
        let mut head = [0u8; 8];
        let n = read_up_to(&mut file, &mut head).map_err(CliError::io(path))?;
        let family = match &head[..n] {
            h if h == QUADRATIC_MAGIC => Some(Family::Quadratic),
            h if h == CUBIC_MAGIC => Some(Family::Cubic),
            _ => None,
        };
        if let Some(family) = family {
            return Ok(Input {
                kind: InputKind::Records(family),
                source: Source::Binary(file),
                path: path.to_path_buf(),
            });
        }
        let file = BufReader::new(File::open(path).map_err(CliError::io(path))?);
        let mut reader = csv::Reader::from_reader(file);
        let headers = reader.headers().map_err(|e| bad_input(path, &e.to_string()))?;
        let joined = headers.iter().collect::<Vec<_>>().join(",");
        let kind = match joined.as_str() {
            QUADRATIC_HEADER => InputKind::Records(Family::Quadratic),
            CUBIC_HEADER => InputKind::Records(Family::Cubic),
            HISTOGRAM_HEADER => InputKind::Histogram,
            other => return Err(bad_input(path, &format!("unrecognised header `{other}`"))),
        };
        Ok(Input { kind, source: Source::Csv(reader), path: path.to_path_buf() })
    }

    pub fn kind(&self) -> InputKind {
        self.kind
    }

    /// Streams the records, rejecting any with `|D| > x`. Binary dumps carry
    /// no `omega`, so it is recomputed by factoring.
    pub fn for_each_record(self, x: u64, mut f: impl FnMut(FieldRecord) -> CliResult<()>) -> CliResult<()> {
        let Input { kind, source, path } = self;
        let InputKind::Records(family) = kind else {
            return Err(CliError::Invariant("for_each_record on a histogram file".into()));
        };
        let out_of_range = |n: u64| CliError::Domain(format!("{}: |D| = {n} is outside 2..=X", path.display()));
        match source {
            Source::Binary(mut r) => {
                let table = PrimeTable::new(x.max(2))?;
                let mut word = [0u8; 8];
                loop {
                    match read_up_to(&mut r, &mut word).map_err(CliError::io(&path))? {
                        0 => return Ok(()),
                        8 => {}
                        _ => return Err(bad_input(&path, "truncated discriminant")),
                    }
                    let disc = i64::from_le_bytes(word);
                    let n = disc.unsigned_abs();
                    if n <= 1 || n > x {
                        return Err(out_of_range(n));
                    }
                    let omega = table.square_signature(n)?.omega;
                    let is_cyclic = match family {
                        Family::Quadratic => true,
                        Family::Cubic => disc > 0 && is_square(n),
                    };
                    f(FieldRecord { discriminant: disc, omega, is_cyclic })?;
                }
            }
            Source::Csv(mut r) => {
                for row in r.deserialize::<CsvRecord>() {
                    let row = row.map_err(|e| bad_input(&path, &e.to_string()))?;
                    let n = row.disc.unsigned_abs();
                    if n <= 1 || n > x {
                        return Err(out_of_range(n));
                    }
                    let is_cyclic = match family {
                        Family::Quadratic => true,
                        Family::Cubic => row.cyclic.unwrap_or(0) != 0,
                    };
                    f(FieldRecord { discriminant: row.disc, omega: row.omega, is_cyclic })?;
                }
                Ok(())
            }
        }
    }

    pub fn read_histogram(self) -> CliResult<Histogram> {
        let Input { kind, source, path } = self;
        let (InputKind::Histogram, Source::Csv(mut r)) = (kind, source) else {
            return Err(CliError::Invariant("read_histogram on a records file".into()));
        };
        let mut h = Histogram::new();
        for row in r.deserialize::<CsvBin>() {
            let row = row.map_err(|e| bad_input(&path, &e.to_string()))?;
            h.add_count(row.omega, row.count);
        }
        Ok(h)
    }
}

fn is_square(n: u64) -> bool {
    let r = ramify_core::primes::isqrt(n);
    r * r == n
}

fn bad_input(path: &Path, why: &str) -> CliError {
    CliError::Domain(format!("{}: {why}", path.display()))
}

fn read_up_to(r: &mut impl Read, buf: &mut [u8]) -> std::io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match r.read(&mut buf[filled..])? {
            0 => break,
            n => filled += n,
        }
    }
    Ok(filled)
}

/// `omega,count` rows, sorted by omega, header first.
pub fn histogram_csv(h: &Histogram) -> Vec<u8> {
    let mut out = format!("{HISTOGRAM_HEADER}\n").into_bytes();
    for (w, c) in h.iter() {
        let _ = writeln!(out, "{w},{c}");
    }
    out
}
