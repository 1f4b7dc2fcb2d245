//! Report files. JSON reports wrap their body with a `meta` block; CSV files
//! carry the config hash and versions as trailing columns on every row.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{RunConfig, SCHEMA_VERSION};
use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct Versions {
    #[serde(rename = "heisenberg-qc")]
    pub core: &'static str,
    #[serde(rename = "hqc-cli")]
    pub cli: &'static str,
}

pub const VERSIONS: Versions = Versions { core: heisenberg_qc::VERSION, cli: env!("CARGO_PKG_VERSION") };

#[derive(Clone, Debug, Serialize)]
pub struct Meta<'a> {
    pub schema_version: u32,
    pub command: &'a str,
    pub config_hash: String,
    pub versions: Versions,
    pub config: &'a RunConfig,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    meta: &'a Meta<'a>,
    report: &'a T,
}

pub struct Output<'a> {
    pub dir: PathBuf,
    pub meta: Meta<'a>,
    pub written: Vec<PathBuf>,
}

impl<'a> Output<'a> {
    pub fn new(dir: &Path, command: &'a str, config: &'a RunConfig) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
        let meta = Meta { schema_version: SCHEMA_VERSION, command, config_hash: config.hash(), versions: VERSIONS, config };
        Ok(Output { dir: dir.to_path_buf(), meta, written: Vec::new() })
    }

    pub fn json<T: Serialize>(&mut self, name: &str, report: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(&Envelope { meta: &self.meta, report })
            .map_err(|e| CliError::Config(format!("cannot serialize {name}: {e}")))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// RFC 4180 CSV with CRLF line ends.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        let stamp = [
            self.meta.config_hash.clone(),
            SCHEMA_VERSION.to_string(),
            format!("heisenberg-qc {} / hqc-cli {}", VERSIONS.core, VERSIONS.cli),
        ];
        let csv_err = |e: csv::Error| CliError::Config(format!("cannot write {name}: {e}"));
        w.write_record(header.iter().copied().chain(["config_hash", "schema_version", "versions"])).map_err(csv_err)?;
        for r in rows {
            w.write_record(r.iter().map(String::as_str).chain(stamp.iter().map(String::as_str))).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Config(format!("cannot write {name}: {e}")))?;
        self.write(name, &bytes)
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::Io(path.clone(), e))?;
        self.written.push(path);
        Ok(())
    }
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
