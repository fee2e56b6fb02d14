//! Tabular results and their CSV / JSON encodings.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::{hex, Format};
use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    /// Twelve significant digits in scientific notation.
    pub fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => format!("{v:.11e}"),
            Cell::Float(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// A named result table with a fixed column order.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&'static str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "table {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    /// Values of a numeric column, row by row.
    pub fn floats(&self, name: &str) -> Vec<f64> {
        let Some(i) = self.column(name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .map(|r| r[i].as_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

/// Fields written into every data file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FileHeader<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'a str,
    pub schema: String,
    pub schema_version: u32,
    pub config_hash: &'a str,
    pub seed: u64,
}

impl<'a> FileHeader<'a> {
    pub fn new(subcommand: &'a str, table: &Table, config_hash: &'a str, seed: u64) -> Self {
        Self {
            tool: "quenchscape",
            version: TOOL_VERSION,
            subcommand,
            schema: format!("{subcommand}/{}", schema_name(&table.name)),
            schema_version: SCHEMA_VERSION,
            config_hash,
            seed,
        }
    }
}

/// Per-W histogram tables share one schema.
fn schema_name(table: &str) -> &str {
    match table.split_once('-') {
        Some(("histogram", _)) => "histogram",
        _ => table,
    }
}

pub fn encode_csv(table: &Table, header: &FileHeader) -> Result<Vec<u8>, CliError> {
    let mut out = format!(
        "# tool: {} {}\n# schema: {} v{}\n# config_hash: {}\n# seed: {}\n",
        header.tool,
        header.version,
        header.schema,
        header.schema_version,
        header.config_hash,
        header.seed
    )
    .into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(&table.columns)?;
        for row in &table.rows {
            w.write_record(row.iter().map(Cell::to_csv))?;
        }
        w.flush().map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(out)
}

pub fn encode_json(table: &Table, header: &FileHeader) -> Result<Vec<u8>, CliError> {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| ((*c).to_owned(), v.to_json()))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let doc = json!({ "manifest": header, "rows": rows });
    let mut bytes = serde_json::to_vec_pretty(&doc)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn encode(table: &Table, header: &FileHeader, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => encode_csv(table, header),
        Format::Json => encode_json(table, header),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub config_hash: String,
    pub seed: u64,
    pub workers: usize,
    pub wall_clock_seconds: f64,
    pub files: Vec<FileEntry>,
}

pub(crate) fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<FileEntry, CliError> {
    let path: PathBuf = dir.join(name);
    std::fs::write(&path, bytes)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(FileEntry {
        path: name.to_owned(),
        sha256: hex(&Sha256::digest(bytes)),
        bytes: bytes.len(),
    })
}
