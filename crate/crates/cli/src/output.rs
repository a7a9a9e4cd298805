//! Tabular output: CSV (header row, LF endings) or a JSON array of records.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::config::Format;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Empty,
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => sig12(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Empty => Value::Null,
            Cell::Int(i) => Value::from(*i),
            Cell::Float(x) => sig12(*x).parse::<f64>().ok().and_then(Number::from_f64).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

/// `x` to 12 significant digits, trailing zeros removed.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&exp) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Three-decimal rendering used in the `paper_rounded` column.
pub fn round3(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// `name=value` pairs joined by `;`.
pub fn rounded_summary(pairs: &[(&str, f64)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k}={}", round3(*v))).collect::<Vec<_>>().join(";")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
        }
        w.flush().map_err(|e| CliError::Io { path: "<output>".into(), source: e })
    }

    fn write_json(&self, out: &mut dyn Write) -> Result<()> {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    m.insert((*c).to_string(), v.to_json());
                }
                Value::Object(m)
            })
            .collect();
        let io = |e| CliError::Io { path: "<output>".into(), source: e };
        serde_json::to_writer_pretty(&mut *out, &records).map_err(|e| io(e.into()))?;
        out.write_all(b"\n").map_err(io)
    }

    pub fn to_bytes(&self, format: Format) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        Ok(buf)
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io { path: "<output>".into(), source: e.into() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1.5), "1.5");
        assert_eq!(sig12(std::f64::consts::LN_2), "0.69314718056");
        assert_eq!(sig12(0.398_765_432_101_23), "0.398765432101");
        assert_eq!(sig12(1024.0), "1024");
        assert_eq!(sig12(-0.000_123_456_789_012_34), "-0.000123456789012");
        assert_eq!(sig12(1e-9), "1.00000000000e-9");
    }

    #[test]
    fn rounding_column() {
        assert_eq!(round3(-1e-9), "0.000");
        assert_eq!(rounded_summary(&[("h", 0.4812), ("asc", 0.2656)]), "h=0.481;asc=0.266");
    }

    #[test]
    fn csv_and_json() {
        let mut t = Table::new(&["n", "x", "tag"]);
        t.push(vec![3usize.into(), 0.25.into(), Cell::Empty]);
        let csv = String::from_utf8(t.to_bytes(Format::Csv).unwrap()).unwrap();
        assert_eq!(csv, "n,x,tag\n3,0.25,\n");
        let json: Value = serde_json::from_slice(&t.to_bytes(Format::Json).unwrap()).unwrap();
        assert_eq!(json[0]["x"], Value::from(0.25));
        assert_eq!(json[0]["tag"], Value::Null);
    }
}
