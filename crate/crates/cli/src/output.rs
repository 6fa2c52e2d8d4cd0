//! Output envelope and the JSON / CSV writers.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// What a command produced: the `result` payload plus an optional flat
/// table that `--format csv` prints instead of key/value rows.
pub struct Report {
    pub result: Value,
    pub backend: &'static str,
    pub table: Option<Table>,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(result: impl Serialize, backend: &'static str) -> Report {
        Report {
            result: serde_json::to_value(result).expect("result types serialize"),
            backend,
            table: None,
        }
    }

    pub fn with_table(mut self, table: Table) -> Report {
        self.table = Some(table);
        self
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    inputs: &'a Value,
    result: &'a Value,
    backend: &'a str,
}

/// Fields that are legitimately absent for some methods.
const NULLABLE: &[&str] = &["residual", "stationarity_residual"];

/// serde_json writes non-finite floats as null, so a null outside the known
/// optional fields means a NaN or infinity reached the payload.
pub fn find_non_finite(v: &Value, path: &str) -> Option<String> {
    match v {
        Value::Null => Some(path.to_string()),
        Value::Array(xs) => xs
            .iter()
            .enumerate()
            .find_map(|(i, x)| find_non_finite(x, &format!("{path}[{i}]"))),
        Value::Object(m) => m.iter().find_map(|(k, x)| {
            if x.is_null() && NULLABLE.contains(&k.as_str()) {
                None
            } else {
                find_non_finite(x, &format!("{path}.{k}"))
            }
        }),
        _ => None,
    }
}

pub fn write(
    out: &mut impl Write,
    format: Format,
    command: &str,
    inputs: &Value,
    report: &Report,
) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let env = Envelope {
                command,
                inputs,
                result: &report.result,
                backend: report.backend,
            };
            serde_json::to_writer_pretty(&mut *out, &env)?;
            writeln!(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            match &report.table {
                Some(t) => {
                    w.write_record(&t.header)?;
                    for row in &t.rows {
                        w.write_record(row)?;
                    }
                }
                None => {
                    w.write_record(["key", "value"])?;
                    w.write_record(["command", command])?;
                    w.write_record(["backend", report.backend])?;
                    let mut flat = Vec::new();
                    flatten("", &report.result, &mut flat);
                    for (k, v) in flat {
                        w.write_record([k, v])?;
                    }
                }
            }
            w.flush()
        }
    }
}

/// Object keys joined with '.', arrays of scalars kept as one JSON cell.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => flatten_map(prefix, m, out),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn flatten_map(prefix: &str, m: &Map<String, Value>, out: &mut Vec<(String, String)>) {
    for (k, v) in m {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        flatten(&key, v, out);
    }
}
