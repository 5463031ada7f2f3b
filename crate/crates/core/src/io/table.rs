use crate::error::{invalid, Error, Result};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

/// Text written for a missing value.
pub const MISSING: &str = "NA";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Missing,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Float(x) => Some(x),
            Cell::Int(i) => Some(i as f64),
            _ => None,
        }
    }

    /// Bit-level equality for floats, so `NaN == NaN` and `0.0 != -0.0`.
    pub fn identical(&self, other: &Cell) -> bool {
        match (self, other) {
            (Cell::Float(a), Cell::Float(b)) => a.to_bits() == b.to_bits(),
            _ => self == other,
        }
    }

    fn parse(field: &str) -> Cell {
        if field == MISSING {
            return Cell::Missing;
        }
        if let Ok(i) = field.parse::<i64>() {
            return Cell::Int(i);
        }
        if let Ok(b) = field.parse::<bool>() {
            return Cell::Bool(b);
        }
        match f64::from_str(field) {
            Ok(x) => Cell::Float(x),
            Err(_) => Cell::Text(field.to_string()),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Missing => Value::Null,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            // 17 significant digits: parses back to the same bits
            Cell::Float(x) if x.is_finite() => write!(f, "{x:.16e}"),
            Cell::Float(x) => write!(f, "{x}"),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Missing => f.write_str(MISSING),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(invalid(format!(
                "unknown format {other:?}; expected csv or json"
            ))),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    schema: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new<S: Into<String>>(schema: impl IntoIterator<Item = S>) -> Self {
        Self {
            schema: schema.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.schema.len() {
            return Err(invalid(format!(
                "row has {} fields but the schema has {}",
                row.len(),
                self.schema.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.schema.iter().position(|c| c == name)
    }

    /// Same schema and bit-identical cells.
    pub fn identical(&self, other: &ResultTable) -> bool {
        self.schema == other.schema
            && self.rows.len() == other.rows.len()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| x.identical(y)))
    }

    pub fn to_csv_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.schema)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))?;
        }
        w.into_inner().map_err(|e| Error::Io(e.into_error()))
    }

    pub fn from_csv_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let schema: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        let mut table = ResultTable::new(schema);
        for record in r.records() {
            let record = record?;
            table.push(record.iter().map(Cell::parse).collect())?;
        }
        Ok(table)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_csv_reader(fs::File::open(path)?)
    }

    /// `{"schema": [...], "rows": [{column: value}, ...]}` plus an optional
    /// `"manifest"` member.
    pub fn to_json(&self, manifest: Option<Value>) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .schema
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::to_json))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut out = Map::new();
        out.insert("schema".into(), Value::from(self.schema.clone()));
        out.insert("rows".into(), Value::Array(rows));
        if let Some(m) = manifest {
            out.insert("manifest".into(), m);
        }
        Value::Object(out)
    }

    /// Content hash of the CSV serialization, whatever format is written.
    pub fn content_hash(&self) -> Result<String> {
        Ok(content_hash(&self.to_csv_bytes()?))
    }

    pub fn render(&self, format: Format, manifest: Option<Value>) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv_bytes(),
            Format::Json => {
                let mut bytes = serde_json::to_vec_pretty(&self.to_json(manifest))?;
                bytes.push(b'\n');
                Ok(bytes)
            }
        }
    }

    pub fn write(&self, path: &Path, format: Format, manifest: Option<Value>) -> Result<()> {
        fs::write(path, self.render(format, manifest)?)?;
        Ok(())
    }
}

/// Git-style blob hash over SHA-256: `sha256("blob <len>\0" ++ bytes)`, hex.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", bytes.len()).as_bytes());
    h.update(bytes);
    hex::encode(h.finalize())
}
