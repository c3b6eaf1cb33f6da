use std::io::Write;

use anyhow::{Context, Result};
use serde_json::{Map, Value};

use crate::config::{Format, RunConfig};

/// Flattens one row for CSV: `[re, im]` pairs become `key_re`, `key_im`; other arrays and
/// objects are kept as JSON text.
fn flatten(row: &Value) -> Vec<(String, String)> {
    let Value::Object(map) = row else {
        return vec![("value".into(), cell(row))];
    };
    let mut out = Vec::new();
    for (key, v) in map {
        match v {
            Value::Array(xs) if xs.len() == 2 && xs.iter().all(|x| x.is_number() || x.is_null()) => {
                out.push((format!("{key}_re"), cell(&xs[0])));
                out.push((format!("{key}_im"), cell(&xs[1])));
            }
            _ => out.push((key.clone(), cell(v))),
        }
    }
    out
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        other => other.to_string(),
    }
}

fn csv_text(rows: &[Value]) -> Result<String> {
    let flat: Vec<Vec<(String, String)>> = rows.iter().map(flatten).collect();
    let mut header: Vec<String> = Vec::new();
    for row in &flat {
        for (k, _) in row {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for row in &flat {
        let lookup: Map<String, Value> = row.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        w.write_record(header.iter().map(|h| lookup.get(h).and_then(Value::as_str).unwrap_or("")))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Renders `doc` as pretty JSON, or `rows` as CSV, and writes it to `--out` or standard output.
pub fn emit(cfg: &RunConfig, doc: &Value, rows: &[Value]) -> Result<()> {
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(doc)? + "\n",
        Format::Csv => csv_text(rows)?,
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_flattening() {
        let rows = vec![
            json!({"a": 1, "z": [0.5, -1.0], "m": [[1, 0], [0, 1]]}),
            json!({"a": 2, "z": [0.0, 0.0], "extra": true}),
        ];
        let text = csv_text(&rows).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        // Object keys come out sorted; new keys are appended in order of first appearance.
        assert_eq!(lines[0], "a,m,z_re,z_im,extra");
        assert_eq!(lines[1], "1,\"[[1,0],[0,1]]\",0.5,-1.0,");
        assert_eq!(lines[2], "2,,0.0,0.0,true");
    }
}
