//! Report serialization. JSON objects are emitted with sorted keys; CSV uses
//! fixed headers. Every report ends with a newline.

use serde::Serialize;
use serde_json::{Map, Value};
use sl2act_core::spectra::ScanRow;

use crate::error::CliError;

pub const SCAN_HEADER: [&str; 8] = [
    "p",
    "class_mod4",
    "group_size",
    "generated",
    "lambda2",
    "gap",
    "method",
    "flag",
];

/// Pretty JSON with lexicographically ordered keys.
pub fn to_json<T: Serialize>(report: &T) -> Result<String, CliError> {
    // serde_json's default map is ordered by key.
    let value = serde_json::to_value(report)?;
    let mut s = serde_json::to_string_pretty(&value)?;
    s.push('\n');
    Ok(s)
}

pub fn scan_csv(rows: &[ScanRow]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(SCAN_HEADER)?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.p.to_string(),
            r.class_mod4.to_string(),
            r.group_size.to_string(),
            r.generated.to_string(),
            opt(r.lambda2),
            opt(r.gap),
            r.method.map(|m| m.name().to_string()).unwrap_or_default(),
            r.flag.name().to_string(),
        ])?;
    }
    finish(w)
}

/// One header line of dotted keys and one value line.
pub fn flat_csv(report: &Value) -> Result<String, CliError> {
    let mut flat = Map::new();
    flatten("", report, &mut flat);
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(flat.keys())?;
    w.write_record(flat.values().map(|v| match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }))?;
    finish(w)
}

fn flatten(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
    match v {
        Value::Object(m) => {
            for (k, child) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, child, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}
