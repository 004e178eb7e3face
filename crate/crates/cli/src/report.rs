use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::CliError;
use ergodyn_core::Tolerances;

/// Provenance written at the top of every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// The config with defaults applied.
    pub config: RunConfig,
}

impl Header {
    pub fn new(command: &str, config: &RunConfig, source: &str) -> Self {
        Self {
            tool: "ergodyn".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config_sha256: hex::encode(Sha256::digest(source.as_bytes())),
            seed: config.compute.seed,
            tolerances: config.compute.tolerances,
            config: config.clone(),
        }
    }
}

/// Shortest representation that parses back to the same double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// A table with a fixed column order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// `# {header json}` then the CSV table, LF line endings.
pub fn write_csv(path: &Path, header: &Header, table: &Table) -> Result<(), CliError> {
    let mut buf = format!("# {}\n", serde_json::to_string(header).map_err(|e| io(path, e))?).into_bytes();
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
        w.write_record(&table.columns).map_err(|e| io(path, e))?;
        for row in &table.rows {
            w.write_record(row).map_err(|e| io(path, e))?;
        }
        w.flush().map_err(|e| io(path, e))?;
    }
    std::fs::write(path, buf).map_err(|e| io(path, e))
}

/// `{"header": ..., "data": ...}`, pretty-printed.
pub fn write_json(path: &Path, header: &Header, data: &Value) -> Result<(), CliError> {
    let doc = serde_json::json!({ "header": header, "data": data });
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| io(path, e))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| io(path, e))
}
