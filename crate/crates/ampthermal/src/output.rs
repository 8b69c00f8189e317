//! CSV/JSON emission. CSV is RFC-4180-style with a mandatory header row
//! and LF line endings; floats are printed in Rust's shortest
//! round-trip form (at most 17 significant digits), so identical runs
//! produce byte-identical output.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Str(String),
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Float(v) => fmt_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Str(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            // JSON has no NaN/Inf; emit null for those.
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) => Value::Null,
            Cell::Int(v) => json!(v),
            Cell::Str(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Str(v)
    }
}

/// Shortest representation that round-trips through f64.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v}")
    }
}

/// Columnar result table.
#[derive(Debug, Clone, Default)]
pub struct DataTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl DataTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Run metadata carried in the JSON envelope.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub command: String,
    pub version: String,
    pub parameters: Map<String, Value>,
}

impl Meta {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            parameters: Map::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }
}

pub fn write_table(
    out: &mut dyn Write,
    format: OutputFormat,
    meta: &Meta,
    table: &DataTable,
) -> io::Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{}", table.columns.join(","))?;
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::to_csv).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
                .collect();
            let doc = json!({
                "meta": meta,
                "data": { "columns": table.columns, "rows": rows },
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_deterministic_and_lf() {
        let mut t = DataTable::new(&["k", "rho"]);
        t.push(vec![0usize.into(), 0.4.into()]);
        t.push(vec![1usize.into(), (0.6f64 / 2.5).into()]);
        let meta = Meta::new("pnd");
        let render = || {
            let mut buf = Vec::new();
            write_table(&mut buf, OutputFormat::Csv, &meta, &t).unwrap();
            String::from_utf8(buf).unwrap()
        };
        let a = render();
        assert_eq!(a, render());
        assert_eq!(a, "k,rho\n0,0.4\n1,0.24\n");
    }

    #[test]
    fn float_roundtrip() {
        for v in [0.1, 1.0 / 3.0, 6.352941176470585, 1e-300] {
            let s = fmt_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_float(f64::NAN), "NaN");
    }

    #[test]
    fn json_envelope() {
        let mut t = DataTable::new(&["x"]);
        t.push(vec![f64::NAN.into()]);
        let meta = Meta::new("region").param("nbar", 1.5);
        let mut buf = Vec::new();
        write_table(&mut buf, OutputFormat::Json, &meta, &t).unwrap();
        let doc: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(doc["meta"]["command"], "region");
        assert_eq!(doc["meta"]["parameters"]["nbar"], 1.5);
        assert!(doc["data"]["rows"][0][0].is_null());
    }
}
