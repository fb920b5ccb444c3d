//! Artifact writers.
//!
//! CSV files start with `#` comment lines carrying the library version and
//! the resolved configuration as one JSON line, then a header row. JSON
//! artifacts are objects with `schema_version`, `version`, `generated_at`,
//! `config` and a command-specific `result`; floating-point values inside
//! `result` are strings with 17 significant digits.

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn num_value(x: f64) -> Value {
    Value::String(num(x))
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num_value(x)).collect())
}

/// Column-oriented table written as CSV or as JSON rows.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, config: &RunConfig, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "# wavespread {VERSION}")?;
        writeln!(
            out,
            "# config: {}",
            serde_json::to_string(config).expect("config serializes")
        )?;
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| num(v)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let map = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, &v)| (c.to_string(), num_value(v)))
                    .collect();
                Value::Object(map)
            })
            .collect();
        json!({ "columns": self.columns, "rows": Value::Array(rows) })
    }
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn envelope(config: &RunConfig, result: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "version": VERSION,
        "generated_at": timestamp(),
        "config": config,
        "result": result,
    })
}

pub fn write_json(value: &Value, out: &mut dyn Write) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}
