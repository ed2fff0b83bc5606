//! Human-readable rendering of reports.

use serde_json::Value;

use crate::scenario::Report;

fn walk(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                let next = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                walk(&next, val, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let joined: Vec<String> = items.iter().map(render_scalar).collect();
            out.push(format!("{prefix} = [{}]", joined.join(", ")));
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                walk(&format!("{prefix}[{i}]"), item, out);
            }
        }
        scalar => out.push(format!("{prefix} = {}", render_scalar(scalar))),
    }
}

fn render_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Flat key = value lines, deterministic order.
pub fn render_text(report: &Report) -> String {
    let mut lines = vec![format!("kind = {}", report.kind)];
    walk("", &report.result, &mut lines);
    lines.join("\n")
}
