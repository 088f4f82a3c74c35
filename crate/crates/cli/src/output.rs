//! CSV tables and the per-run manifest.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Failure;

/// Nine significant digits in scientific notation; empty for missing values.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.8e}")
    } else {
        String::new()
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// An in-memory CSV table.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Serialize)]
struct FileDigest {
    file: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'a str,
    arguments: &'a [String],
    config_sha256: Option<String>,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
}

/// Everything a command produces, written only after the whole run
/// succeeded.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub inputs: Vec<(String, Vec<u8>)>,
    pub config: Option<Vec<u8>>,
}

impl RunOutput {
    pub fn table(&mut self, t: Table) {
        self.tables.push(t);
    }

    /// Write the tables as `<name>.csv` into `dir` plus `manifest.json`.
    pub fn write(&self, dir: &Path, subcommand: &str, arguments: &[String]) -> Result<Vec<PathBuf>, Failure> {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
        let mut written = Vec::new();
        let mut outputs = Vec::new();
        for t in &self.tables {
            let bytes = t.to_bytes();
            let file = format!("{}.csv", t.name);
            let path = dir.join(&file);
            std::fs::write(&path, &bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            log::info!("wrote {} ({} rows)", path.display(), t.len());
            outputs.push(FileDigest { file, sha256: sha256_hex(&bytes) });
            written.push(path);
        }
        let manifest = Manifest {
            tool: "freelab",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            arguments,
            config_sha256: self.config.as_deref().map(sha256_hex),
            inputs: self.inputs.iter().map(|(name, b)| FileDigest { file: name.clone(), sha256: sha256_hex(b) }).collect(),
            outputs,
        };
        let mut json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
        json.push(b'\n');
        let path = dir.join("manifest.json");
        std::fs::write(&path, json).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        written.push(path);
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(num(6894.757), "6.89475700e3");
        assert_eq!(num(-1.0 / 3.0), "-3.33333333e-1");
        assert_eq!(num(0.0), "0.00000000e0");
        assert_eq!(num(f64::NAN), "");
    }

    #[test]
    fn table_bytes() {
        let mut t = Table::new("x", &["a", "b"]);
        t.push(vec![num(1.0), "ok".into()]);
        assert_eq!(String::from_utf8(t.to_bytes()).unwrap(), "a,b\n1.00000000e0,ok\n");
    }
}
