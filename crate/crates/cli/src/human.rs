//! Indented plain-text rendering of a JSON report.

use std::fmt::Write;

use serde_json::Value;

/// Renders the summary line first, then every other field as an indented
/// outline. Multi-line strings become literal blocks.
pub fn render(report: &Value) -> String {
    let mut out = String::new();
    if let Some(s) = report.get("summary").and_then(Value::as_str) {
        let _ = writeln!(out, "{s}");
    }
    if let Value::Object(map) = report {
        for (k, v) in map.iter().filter(|(k, _)| k.as_str() != "summary") {
            field(&mut out, 0, k, v);
        }
    }
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) if !s.contains('\n') => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = a.iter().filter_map(scalar).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn field(out: &mut String, depth: usize, key: &str, v: &Value) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        let _ = writeln!(out, "{pad}{key}: {s}");
        return;
    }
    let _ = writeln!(out, "{pad}{key}:");
    body(out, depth + 1, v);
}

fn body(out: &mut String, depth: usize, v: &Value) {
    let pad = "  ".repeat(depth);
    match v {
        Value::String(s) => {
            for line in s.lines() {
                let _ = writeln!(out, "{pad}{line}");
            }
        }
        Value::Object(map) => {
            for (k, x) in map {
                field(out, depth, k, x);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}- [{i}]");
                        body(out, depth + 1, x);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn outline() {
        let v = json!({
            "summary": "done",
            "a": 1,
            "b": {"c": [1, 2], "d": "x\ny"},
            "e": [{"f": null}],
        });
        assert_eq!(render(&v), "done\na: 1\nb:\n  c: [1, 2]\n  d:\n    x\n    y\ne:\n  - [0]\n    f: -\n");
    }
}
