//! CSV tables, run manifests and the merged JSON document.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, OutputSpec, RunConfig};
use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Num(f64),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(v) => json!(v),
            Cell::Num(v) => json!(v),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV text; every row carries the config hash as its last column.
    pub fn to_csv(&self, config_hash: &str) -> String {
        let mut out = self.columns.join(",");
        out.push_str(",config_hash\n");
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push(',');
            out.push_str(config_hash);
            out.push('\n');
        }
        out
    }

    pub fn rows_json(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|row| {
                let map: serde_json::Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(map)
            })
            .collect()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }
}

/// Timing and method for one sweep point.
#[derive(Debug, Clone, Serialize)]
pub struct PointRecord {
    pub key: String,
    pub seconds: f64,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub tool_version: String,
    pub seed: u64,
    pub config: RunConfig,
    pub points: Vec<PointRecord>,
    pub notes: Vec<String>,
    pub summary: BTreeMap<String, Value>,
}

impl RunManifest {
    pub fn new(config: RunConfig) -> Self {
        Self {
            config_hash: config.hash(),
            tool_version: concat!("smd ", env!("CARGO_PKG_VERSION")).to_string(),
            seed: config.seed,
            config,
            points: Vec::new(),
            notes: Vec::new(),
            summary: BTreeMap::new(),
        }
    }
}

/// Result of one subcommand.
#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    pub manifest: RunManifest,
}

impl Report {
    pub fn merged_json(&self) -> Value {
        json!({
            "manifest": self.manifest,
            "columns": self.table.columns,
            "rows": self.table.rows_json(),
        })
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Write to `--out` (plus manifest for CSV) or to stdout.
pub fn emit(report: &Report, spec: &OutputSpec) -> CliResult<()> {
    let body = match spec.format {
        Format::Csv => report.table.to_csv(&report.manifest.config_hash),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.merged_json())?;
            s.push('\n');
            s
        }
    };
    match &spec.out {
        Some(path) => {
            fs::write(path, body)?;
            if spec.format == Format::Csv {
                let mut m = serde_json::to_string_pretty(&report.manifest)?;
                m.push('\n');
                fs::write(manifest_path(path), m)?;
            }
        }
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_cells() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![Cell::from("x,y"), Cell::from(0.1), Cell::from(None)]);
        assert_eq!(t.to_csv("h"), "a,b,c,config_hash\n\"x,y\",0.1,,h\n");
        assert_eq!(t.rows_json()[0]["c"], Value::Null);
    }

    #[test]
    fn manifest_sits_next_to_output() {
        assert_eq!(manifest_path(Path::new("/tmp/a.csv")), PathBuf::from("/tmp/a.csv.manifest.json"));
    }
}
