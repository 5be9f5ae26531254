//! CSV tables and JSON summaries.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Criterion {
    pub name: String,
    pub value: Value,
    pub threshold: Value,
    pub pass: bool,
}

impl Criterion {
    pub fn new(name: &str, value: impl Into<Value>, threshold: impl Into<Value>, pass: bool) -> Self {
        Self { name: name.into(), value: value.into(), threshold: threshold.into(), pass }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub command: String,
    pub config_hash: String,
    pub seed: Option<u64>,
    pub config: Value,
    pub criteria: Vec<Criterion>,
    pub statistics: Map<String, Value>,
    /// Left `null` unless timing is requested, so repeated runs stay byte-identical.
    pub runtime_seconds: Option<f64>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }
}

/// In-memory CSV with a fixed header.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| csv::Error::from(e.into_error()))
    }
}

pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn write_outputs(dir: &Path, command: &str, table: &Table, summary: &Summary) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let csv = table.to_bytes().map_err(std::io::Error::other)?;
    fs::write(dir.join(format!("{command}.csv")), csv)?;
    let mut json = serde_json::to_string_pretty(summary)?;
    json.push('\n');
    fs::write(dir.join(format!("{command}.json")), json)
}
