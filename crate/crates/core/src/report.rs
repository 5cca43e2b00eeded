//! Deterministic CSV and JSON reports.
//!
//! A report is a table plus metadata and pass/fail verdicts. Floats are
//! always printed with 12 significant digits (scientific notation below
//! `1e-4` and from `1e15` up), and JSON keys keep insertion order, so the
//! same report always serialises to the same bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};

pub const TOOL_NAME: &str = "hecke-density";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    /// A data value written with the shortest representation that parses
    /// back to the same bits.
    Exact(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i128> for Cell {
    fn from(v: i128) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

impl Cell {
    fn to_text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Exact(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => number(&v.to_string()),
            Cell::Float(v) if v.is_finite() => number(&format_float(*v)),
            Cell::Float(v) => Value::String(format_float(*v)),
            Cell::Exact(v) if v.is_finite() => number(&v.to_string()),
            Cell::Exact(v) => Value::String(v.to_string()),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

fn number(text: &str) -> Value {
    Value::Number(Number::from_str(text).expect("formatted numbers are valid JSON"))
}

/// 12 significant digits; scientific for `0 < |x| < 1e-4` and `|x| >= 1e15`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs();
    if !(1e-4..1e15).contains(&magnitude) {
        return format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    }
    let exponent = magnitude.log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Echo of the effective configuration, in a fixed order.
    pub config: Vec<(String, String)>,
    /// Only set on request; a wall-clock time would break byte determinism.
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub metadata: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new<S: Into<String>>(subcommand: &str, columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            metadata: Metadata {
                tool: TOOL_NAME.into(),
                version: TOOL_VERSION.into(),
                subcommand: subcommand.into(),
                config: Vec::new(),
                timestamp: None,
            },
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn config(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.config.push((key.into(), value.to_string()));
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> &mut Self {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
        self
    }

    pub fn verdict(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> &mut Self {
        self.verdicts.push(Verdict::new(name, pass, detail));
        self
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    fn to_json(&self) -> Value {
        let mut meta = Map::new();
        meta.insert("tool".into(), Value::String(self.metadata.tool.clone()));
        meta.insert("version".into(), Value::String(self.metadata.version.clone()));
        meta.insert("subcommand".into(), Value::String(self.metadata.subcommand.clone()));
        let config: Map<String, Value> = self
            .metadata
            .config
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        meta.insert("config".into(), Value::Object(config));
        meta.insert(
            "timestamp".into(),
            self.metadata
                .timestamp
                .clone()
                .map_or(Value::Null, Value::String),
        );

        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, cell)| (c.clone(), cell.to_json()))
                        .collect(),
                )
            })
            .collect();
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| {
                let mut m = Map::new();
                m.insert("name".into(), Value::String(v.name.clone()));
                m.insert("pass".into(), Value::Bool(v.pass));
                m.insert("detail".into(), Value::String(v.detail.clone()));
                Value::Object(m)
            })
            .collect();

        let mut root = Map::new();
        root.insert("metadata".into(), Value::Object(meta));
        root.insert(
            "columns".into(),
            Value::Array(self.columns.iter().cloned().map(Value::String).collect()),
        );
        root.insert("rows".into(), Value::Array(rows));
        root.insert("verdicts".into(), Value::Array(verdicts));
        Value::Object(root)
    }

    /// Serialises the report. CSV carries only the table (header plus one
    /// line per row); JSON carries everything.
    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(&self.to_json())
                    .map_err(|e| Error::Serialize(e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let mut writer = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(Vec::new());
                let ser = |e: csv::Error| Error::Serialize(e.to_string());
                writer.write_record(&self.columns).map_err(ser)?;
                for row in &self.rows {
                    writer
                        .write_record(row.iter().map(Cell::to_text))
                        .map_err(ser)?;
                }
                writer
                    .into_inner()
                    .map_err(|e| Error::Serialize(e.to_string()))
            }
        }
    }
}

/// Where [`emit_report`] writes.
pub enum Destination<'a> {
    Writer(&'a mut dyn Write),
    File(PathBuf),
}

pub fn emit_report(report: &Report, format: Format, destination: Destination<'_>) -> Result<()> {
    let bytes = report.render(format)?;
    match destination {
        Destination::Writer(w) => w.write_all(&bytes).map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
        Destination::File(path) => {
            let io_err = |source| Error::Io {
                path: path.clone(),
                source,
            };
            let mut file = BufWriter::new(File::create(&path).map_err(io_err)?);
            file.write_all(&bytes).map_err(io_err)?;
            file.flush().map_err(io_err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(1.0), "1.00000000000");
        assert_eq!(format_float(0.778_703_904_069_444_1), "0.778703904069");
        assert_eq!(format_float(-24.0), "-24.0000000000");
        assert_eq!(format_float(1.5e-5), "1.50000000000e-5");
        assert_eq!(format_float(1e-4), "0.000100000000000");
        assert_eq!(format_float(2.5e20), "2.50000000000e20");
        assert_eq!(format_float(f64::NAN), "NaN");
        assert_eq!(format_float(f64::NEG_INFINITY), "-inf");
    }

    fn sample() -> Report {
        let mut r = Report::new("sweep", ["delta", "c", "status"]);
        r.config("deltas", "0.02,0.01,0.005");
        for (d, c) in [(0.02, 0.74), (0.01, 0.7787), (0.005, 0.81)] {
            r.row(vec![d.into(), c.into(), "ok".into()]);
        }
        r
    }

    #[test]
    fn csv_rows_and_header() {
        let text = String::from_utf8(sample().render(Format::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "delta,c,status");
        assert_eq!(lines[2], "0.0100000000000,0.778700000000,ok");
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let mut r = Report::new("x", ["name"]);
        r.row(vec!["a,b".into()]);
        let text = String::from_utf8(r.render(Format::Csv).unwrap()).unwrap();
        assert_eq!(text, "name\n\"a,b\"\n");
    }

    #[test]
    fn json_with_empty_verdicts_is_valid() {
        let bytes = sample().render(Format::Json).unwrap();
        let v: Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(v["verdicts"], Value::Array(vec![]));
        assert_eq!(v["metadata"]["tool"], "hecke-density");
        assert_eq!(v["rows"].as_array().unwrap().len(), 3);
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["metadata", "columns", "rows", "verdicts"]);
    }

    #[test]
    fn rendering_is_byte_identical() {
        for format in [Format::Csv, Format::Json] {
            assert_eq!(sample().render(format).unwrap(), sample().render(format).unwrap());
        }
    }

    #[test]
    fn non_finite_floats_become_strings_in_json() {
        let mut r = Report::new("x", ["v"]);
        r.row(vec![f64::NAN.into()]);
        let v: Value = serde_json::from_slice(&r.render(Format::Json).unwrap()).unwrap();
        assert_eq!(v["rows"][0]["v"], "NaN");
    }

    #[test]
    fn emit_to_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        emit_report(&sample(), Format::Json, Destination::File(path.clone())).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), sample().render(Format::Json).unwrap());
        let bad = dir.path().join("missing").join("r.json");
        assert!(matches!(
            emit_report(&sample(), Format::Json, Destination::File(bad)),
            Err(Error::Io { .. })
        ));
    }
}
