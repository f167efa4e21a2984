//! Output rendering: one table or row-set, three formats, deterministic
//! bytes. No ANSI escapes anywhere, so NO_COLOR needs no special casing.

use serde_json::{json, Value};

/// A single typed cell.
#[derive(Debug, Clone)]
pub enum Cell {
    F(f64),
    U(u64),
    I(u32),
    B(bool),
    S(String),
    /// Missing value: empty in CSV, null in JSON, "-" for humans.
    None,
}

impl Cell {
    /// 17 significant digits: enough to round-trip any f64 exactly.
    fn csv(&self) -> String {
        match self {
            Cell::F(x) => format!("{x:.16e}"),
            Cell::U(x) => x.to_string(),
            Cell::I(x) => x.to_string(),
            Cell::B(x) => x.to_string(),
            Cell::S(s) => s.clone(),
            Cell::None => String::new(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::F(x) => format!("{x}"),
            Cell::U(x) => x.to_string(),
            Cell::I(x) => x.to_string(),
            Cell::B(x) => x.to_string(),
            Cell::S(s) => s.clone(),
            Cell::None => "-".into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) => json!(x),
            Cell::U(x) => json!(x),
            Cell::I(x) => json!(x),
            Cell::B(x) => json!(x),
            Cell::S(s) => json!(s),
            Cell::None => Value::Null,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Json,
}

/// One labeled record (most subcommands) rendered to the chosen format.
pub fn render_record(fields: &[(&str, Cell)], format: Format) -> String {
    match format {
        Format::Human => {
            let mut out = String::new();
            for (k, v) in fields {
                out.push_str(&format!("{k} = {}\n", v.human()));
            }
            out
        }
        Format::Csv => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let row: Vec<String> = fields.iter().map(|(_, v)| v.csv()).collect();
            format!("{}\n{}\n", header.join(","), row.join(","))
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (k, v) in fields {
                obj.insert((*k).to_string(), v.json());
            }
            let mut s = Value::Object(obj).to_string();
            s.push('\n');
            s
        }
    }
}

/// Many rows under one header (sweeps).
pub fn render_rows(header: &[String], rows: &[Vec<Cell>], format: Format) -> String {
    match format {
        Format::Human => {
            let mut out = String::new();
            for row in rows {
                let line: Vec<String> = header
                    .iter()
                    .zip(row)
                    .map(|(k, v)| format!("{k}={}", v.human()))
                    .collect();
                out.push_str(&line.join("  "));
                out.push('\n');
            }
            out
        }
        Format::Csv => {
            let mut out = header.join(",");
            out.push('\n');
            for row in rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    for (k, v) in header.iter().zip(row) {
                        obj.insert(k.clone(), v.json());
                    }
                    Value::Object(obj)
                })
                .collect();
            let mut s = Value::Array(arr).to_string();
            s.push('\n');
            s
        }
    }
}
