//! The single JSON document every command emits, and its human rendering.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Bumped whenever a field of any command's report changes.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub diagnostics: Value,
}

impl Report {
    pub fn new(command: &str, inputs: Value, results: Value, diagnostics: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            inputs,
            results,
            diagnostics,
        }
    }

    /// Canonical JSON: keys sorted at every level, shortest round-trip floats.
    /// Parsing the output and serializing it again gives the same bytes.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }

    pub fn to_human(&self) -> String {
        let mut out = format!("{} (schema {})\n", self.command, self.schema_version);
        for (title, value) in [
            ("inputs", &self.inputs),
            ("results", &self.results),
            ("diagnostics", &self.diagnostics),
        ] {
            out.push_str(title);
            out.push_str(":\n");
            render(value, 1, &mut out);
        }
        out
    }
}

/// A section that could not be computed for this input.
pub fn skipped(code: &str, reason: &str) -> Value {
    let mut inner = Map::new();
    inner.insert("code".into(), Value::String(code.into()));
    inner.insert("reason".into(), Value::String(reason.into()));
    let mut outer = Map::new();
    outer.insert("skipped".into(), Value::Object(inner));
    Value::Object(outer)
}

fn scalar(value: &Value) -> Option<String> {
    match value {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(match n.as_i64().or_else(|| n.as_u64().map(|u| u as i64)) {
            Some(i) if n.is_i64() || n.is_u64() => i.to_string(),
            _ => format!("{:.6}", n.as_f64().unwrap_or(f64::NAN)),
        }),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|v| matches!(v, Value::Number(_))) => Some(format!(
            "[{}]",
            items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn render(value: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                match scalar(v) {
                    Some(s) => out.push_str(&format!("{pad}{key}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{key}:\n"));
                        render(v, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for v in items {
                match scalar(v) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render(v, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
