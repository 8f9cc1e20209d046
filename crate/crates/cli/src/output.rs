//! Table assembly and the CSV/JSON writers.
//!
//! CSV dialect: comma separator, `.` decimal point, LF line endings, one
//! mandatory header row, floats with 13 significant digits. Metadata (the
//! resolved configuration and the artifact version) rides in `#`-prefixed
//! comment lines ahead of the header so golden-file comparisons stay
//! byte-exact.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::CliError;

/// One table cell: a number or a label.
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Metadata value with its native type preserved for JSON output.
#[derive(Debug, Clone)]
pub enum Meta {
    Num(f64),
    Int(u64),
    Text(String),
}

impl std::fmt::Display for Meta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Meta::Num(v) => write!(f, "{v}"),
            Meta::Int(v) => write!(f, "{v}"),
            Meta::Text(v) => write!(f, "{v}"),
        }
    }
}

impl From<f64> for Meta {
    fn from(v: f64) -> Self {
        Meta::Num(v)
    }
}

impl From<u64> for Meta {
    fn from(v: u64) -> Self {
        Meta::Int(v)
    }
}

impl From<u32> for Meta {
    fn from(v: u32) -> Self {
        Meta::Int(v as u64)
    }
}

impl From<&str> for Meta {
    fn from(v: &str) -> Self {
        Meta::Text(v.to_string())
    }
}

impl From<String> for Meta {
    fn from(v: String) -> Self {
        Meta::Text(v)
    }
}

/// A complete output document: resolved configuration plus tabular data.
#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    pub meta: Vec<(String, Meta)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Table {
            command,
            meta: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Meta>) -> &mut Self {
        self.meta.push((key.to_string(), value.into()));
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }
}

/// Formats a float with 13 significant digits, normalizing negative zero.
pub fn fmt_float(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.12e}")
}

pub fn to_csv(table: &Table) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# dicke2p {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# command = {}", table.command);
    for (key, value) in &table.meta {
        let _ = writeln!(out, "# {key} = {value}");
    }
    let _ = writeln!(out, "{}", table.columns.join(","));
    for row in &table.rows {
        let line: Vec<String> = row
            .iter()
            .map(|cell| match cell {
                Cell::Num(v) => fmt_float(*v),
                Cell::Text(s) => s.clone(),
            })
            .collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

pub fn to_json(table: &Table) -> String {
    use serde_json::{json, Map, Value};
    let mut config = Map::new();
    for (key, value) in &table.meta {
        let v = match value {
            Meta::Num(v) => json!(v),
            Meta::Int(v) => json!(v),
            Meta::Text(v) => json!(v),
        };
        config.insert(key.clone(), v);
    }
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|cell| match cell {
                        Cell::Num(v) => json!(v),
                        Cell::Text(s) => json!(s),
                    })
                    .collect(),
            )
        })
        .collect();
    let doc = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": table.command,
        "config": Value::Object(config),
        "columns": table.columns,
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("static document serializes");
    s.push('\n');
    s
}

/// Output format selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

pub fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => to_csv(table),
        Format::Json => to_json(table),
    }
}

/// Writes to `out` when given, otherwise to stdout.
pub fn emit(table: &Table, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let text = render(table, format);
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Inserts `suffix` ahead of the extension: `x.csv` -> `x+.csv`.
pub fn suffixed_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
    let name = match path.extension().and_then(|s| s.to_str()) {
        Some(ext) => format!("{stem}{suffix}.{ext}"),
        None => format!("{stem}{suffix}"),
    };
    path.with_file_name(name)
}
