//! Output files and the manifest that accounts for them.
//!
//! Every file is written under a temporary name and renamed into place once
//! complete, and its SHA-256 is computed on the bytes as they are written.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::RunConfig;
use crate::error::{CliError, CliResult};

pub const MANIFEST_SCHEMA: &str = "ramify-manifest/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputEntry {
    /// File name relative to the manifest's directory.
    pub file: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: String,
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    /// Worker threads used. Recorded for provenance only; outputs are
    /// identical for every value.
    pub workers: usize,
    pub wall_seconds: f64,
    pub outputs: Vec<OutputEntry>,
}

impl Manifest {
    pub fn read(path: &Path) -> CliResult<Manifest> {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        let m: Manifest = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{} is not a manifest: {e}", path.display())))?;
        if m.schema != MANIFEST_SCHEMA {
            return Err(CliError::Config(format!("unsupported manifest schema `{}`", m.schema)));
        }
        Ok(m)
    }
}

/// The files one run produces, all in one directory and sharing a stem.
pub struct OutputSet {
    dir: PathBuf,
    stem: String,
    entries: Vec<OutputEntry>,
}

impl OutputSet {
    pub fn new(dir: &Path, stem: String) -> CliResult<Self> {
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
        Ok(OutputSet { dir: dir.to_path_buf(), stem, entries: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn stem(&self) -> &str {
        &self.stem
    }

    pub fn entries(&self) -> &[OutputEntry] {
        &self.entries
    }

    /// `<stem><suffix>`, e.g. suffix `-omega.csv`.
    pub fn name(&self, suffix: &str) -> String {
        format!("{}{suffix}", self.stem)
    }

    pub fn create(&mut self, suffix: &str) -> CliResult<HashingWriter> {
        let file = self.name(suffix);
        let path = self.dir.join(&file);
        let partial = self.dir.join(format!(".{file}.partial"));
        let inner = File::create(&partial).map_err(CliError::io(&partial))?;
        Ok(HashingWriter {
            file,
            path,
            partial,
            inner: BufWriter::with_capacity(1 << 20, inner),
            hasher: Sha256::new(),
            bytes: 0,
        })
    }

    pub fn finish(&mut self, w: HashingWriter) -> CliResult<()> {
        let HashingWriter { file, path, partial, inner, hasher, bytes } = w;
        let f = inner.into_inner().map_err(|e| CliError::Io { path: partial.clone(), source: e.into_error() })?;
        f.sync_all().map_err(CliError::io(&partial))?;
        drop(f);
        fs::rename(&partial, &path).map_err(CliError::io(&path))?;
        self.entries.push(OutputEntry { file, bytes, sha256: hex(&hasher.finalize()) });
        Ok(())
    }

    pub fn write_bytes(&mut self, suffix: &str, data: &[u8]) -> CliResult<()> {
        let mut w = self.create(suffix)?;
        w.write_all(data).map_err(CliError::io(&w.path))?;
        self.finish(w)
    }

    /// Pretty JSON with a trailing newline.
    pub fn write_json<T: Serialize>(&mut self, suffix: &str, value: &T) -> CliResult<()> {
        let mut data = serde_json::to_vec_pretty(value)?;
        data.push(b'\n');
        self.write_bytes(suffix, &data)
    }

    /// Writes `<stem>.manifest.json` and returns its path.
    pub fn write_manifest(
        self,
        config: RunConfig,
        workers: usize,
        wall_seconds: f64,
    ) -> CliResult<(PathBuf, Manifest)> {
        let manifest = Manifest {
            schema: MANIFEST_SCHEMA.to_string(),
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            workers,
            wall_seconds,
            outputs: self.entries,
        };
        let path = self.dir.join(format!("{}.manifest.json", self.stem));
        let mut data = serde_json::to_vec_pretty(&manifest)?;
        data.push(b'\n');
        let partial = self.dir.join(format!(".{}.manifest.json.partial", self.stem));
        fs::write(&partial, &data).map_err(CliError::io(&partial))?;
        fs::rename(&partial, &path).map_err(CliError::io(&path))?;
        Ok((path, manifest))
    }
}

/// Buffered file writer that hashes and counts what passes through it.
pub struct HashingWriter {
    file: String,
    path: PathBuf,
    partial: PathBuf,
    inner: BufWriter<File>,
    hasher: Sha256,
    bytes: u64,
}

impl HashingWriter {
    pub fn path(&self) -> &Path {
        &self.path
    }
}

impl Write for HashingWriter {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        self.bytes += n as u64;
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hashes_what_was_written() {
        let dir = tempfile::tempdir().unwrap();
        let mut set = OutputSet::new(dir.path(), "t".into()).unwrap();
        set.write_bytes(".txt", b"abc").unwrap();
        let e = &set.entries()[0];
        assert_eq!(e.file, "t.txt");
        assert_eq!(e.bytes, 3);
        assert_eq!(e.sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        assert_eq!(fs::read(dir.path().join("t.txt")).unwrap(), b"abc");
        assert!(!dir.path().join(".t.txt.partial").exists());
    }
}
