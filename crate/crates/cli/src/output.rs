//! Rendering of result records as text, JSON or CSV.

use std::fmt::Write as _;

pub const CSV_HEADER: &str = "# pncsv v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    /// Unbounded side or infinite saddle variable.
    Inf,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            Value::Inf
        } else {
            Value::Num(v)
        }
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<Option<u64>> for Value {
    fn from(v: Option<u64>) -> Self {
        v.map_or(Value::Inf, Value::Int)
    }
}

/// Ordered key/value pairs; key order is the output order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(&'static str, Value)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.0.push((key, value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }
}

/// 17 significant digits, enough to round-trip any double.
pub fn sci(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

pub fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_value(v: &Value) -> String {
    match v {
        Value::Num(x) if x.is_finite() => sci(*x),
        Value::Num(_) | Value::Inf => "null".into(),
        Value::Int(i) => i.to_string(),
        Value::Text(s) => json_string(s),
        Value::Bool(b) => b.to_string(),
    }
}

fn plain_value(v: &Value) -> String {
    match v {
        Value::Num(x) => sci(*x),
        Value::Inf => "inf".into(),
        Value::Int(i) => i.to_string(),
        Value::Text(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
    }
}

pub fn json_object(r: &Record) -> String {
    let fields: Vec<String> = r
        .0
        .iter()
        .map(|(k, v)| format!("{}:{}", json_string(k), json_value(v)))
        .collect();
    format!("{{{}}}", fields.join(","))
}

pub fn json_array(rows: &[Record]) -> String {
    let items: Vec<String> = rows.iter().map(json_object).collect();
    format!("[{}]", items.join(","))
}

pub fn text(r: &Record) -> String {
    let width = r.0.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in &r.0 {
        let _ = writeln!(out, "{k:<width$}  {}", plain_value(v));
    }
    out
}

fn csv_cell(v: &Value) -> String {
    let s = plain_value(v);
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

/// CSV with the version comment, a header row and one line per record.
pub fn csv(columns: &[&str], rows: &[Record]) -> String {
    let mut out = format!("{CSV_HEADER}\n{}\n", columns.join(","));
    for r in rows {
        let cells: Vec<String> = columns
            .iter()
            .map(|c| r.get(c).map_or_else(String::new, csv_cell))
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn columns(r: &Record) -> Vec<&'static str> {
    r.0.iter().map(|(k, _)| *k).collect()
}
