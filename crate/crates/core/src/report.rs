//! Tabular scan output.
//!
//! CSV is the canonical form: one header row, floats with 17 significant
//! digits (`{:.16e}`), so every value survives a write/parse round trip
//! bit for bit. JSON output mirrors the CSV row by row and field by field.
//! Fitted statistics live in a separate JSON sidecar and are always
//! recomputed from the table itself, which is what makes a replay from a
//! saved CSV reproduce them exactly.

use std::fmt::Write as _;
use std::io::{Read, Write};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(i) => Some(i as f64),
            Cell::Float(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i128> {
        match *self {
            Cell::Int(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match *self {
            Cell::Bool(b) => Some(b),
            _ => None,
        }
    }

    fn csv_text(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => format_float(*f),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json_text(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) if f.is_finite() => format_float(*f),
            Cell::Float(_) => "null".to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("strings serialize"),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn parse(text: &str) -> Cell {
        if let Ok(i) = text.parse::<i128>() {
            return Cell::Int(i);
        }
        match text {
            "true" => return Cell::Bool(true),
            "false" => return Cell::Bool(false),
            _ => {}
        }
        // only accept what format_float writes, so that text like "inf" stays text
        if text.contains('e') || matches!(text, "NaN" | "inf" | "-inf") {
            if let Ok(f) = text.parse::<f64>() {
                return Cell::Float(f);
            }
        }
        Cell::Text(text.to_string())
    }
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

impl From<u128> for Cell {
    fn from(v: u128) -> Self {
        Cell::Int(i128::try_from(v).expect("count fits in i128"))
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
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

/// 17 significant digits; `NaN`, `inf`, `-inf` for non-finite values.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub kind: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Fitted statistics, in a fixed order.
    pub stats: Vec<(String, Cell)>,
}

impl ScanReport {
    pub fn new(kind: &str, columns: &[&str]) -> Self {
        ScanReport {
            kind: kind.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            stats: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All cells of one column.
    pub fn column(&self, name: &str) -> Result<Vec<&Cell>> {
        let i = self
            .column_index(name)
            .ok_or_else(|| Error::Report(format!("{} report has no column {name}", self.kind)))?;
        Ok(self.rows.iter().map(|r| &r[i]).collect())
    }

    /// A numeric column; non-numeric cells are an error.
    pub fn floats(&self, name: &str) -> Result<Vec<f64>> {
        self.column(name)?
            .into_iter()
            .map(|c| {
                c.as_f64()
                    .ok_or_else(|| Error::Report(format!("non-numeric value in column {name}: {c:?}")))
            })
            .collect()
    }

    pub fn stat(&self, name: &str) -> Option<&Cell> {
        self.stats.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns).map_err(report_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_text)).map_err(report_err)?;
        }
        w.flush().map_err(|e| Error::Report(e.to_string()))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// `{"kind": …, "columns": […], "rows": [{column: value, …}, …]}`.
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{{\n  \"kind\": {},\n  \"columns\": [", json_str(&self.kind));
        let cols: Vec<String> = self.columns.iter().map(|c| json_str(c)).collect();
        s.push_str(&cols.join(", "));
        s.push_str("],\n  \"rows\": [");
        for (i, row) in self.rows.iter().enumerate() {
            s.push_str(if i == 0 { "\n    {" } else { ",\n    {" });
            let fields: Vec<String> = self
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| format!("{}: {}", json_str(c), v.json_text()))
                .collect();
            s.push_str(&fields.join(", "));
            s.push('}');
        }
        s.push_str(if self.rows.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
        s
    }

    /// The statistics sidecar: `{"kind": …, "rows": n, "stats": {…}}`.
    pub fn stats_json(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{{\n  \"kind\": {},\n  \"rows\": {},\n  \"stats\": {{", json_str(&self.kind), self.rows.len());
        for (i, (k, v)) in self.stats.iter().enumerate() {
            s.push_str(if i == 0 { "\n    " } else { ",\n    " });
            let _ = write!(s, "{}: {}", json_str(k), v.json_text());
        }
        s.push_str(if self.stats.is_empty() { "}\n}\n" } else { "\n  }\n}\n" });
        s
    }

    /// Read back a CSV written by [`ScanReport::write_csv`]. Statistics are
    /// left empty; recompute them from the rows.
    pub fn parse_csv<R: Read>(kind: &str, input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let columns: Vec<String> = r.headers().map_err(report_err)?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(report_err)?;
            if rec.len() != columns.len() {
                return Err(Error::Report(format!("row has {} fields, header has {}", rec.len(), columns.len())));
            }
            rows.push(rec.iter().map(Cell::parse).collect());
        }
        Ok(ScanReport { kind: kind.to_string(), columns, rows, stats: Vec::new() })
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn report_err(e: csv::Error) -> Error {
    Error::Report(e.to_string())
}
