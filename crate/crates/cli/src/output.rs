use serde_json::Value;

use crate::Format;

/// Result of a command: a JSON value, plus an optional first line for text
/// output.
#[derive(Debug)]
pub struct Report {
    pub headline: Option<String>,
    pub value: Value,
    /// Always written as JSON, e.g. an emitted protocol file.
    pub document: bool,
}

impl Report {
    pub fn new(value: Value) -> Self {
        Report { headline: None, value, document: false }
    }

    pub fn document(value: Value) -> Self {
        Report { headline: None, value, document: true }
    }

    pub fn with_headline(headline: impl Into<String>, value: Value) -> Self {
        Report { headline: Some(headline.into()), value, document: false }
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match if report.document { Format::Json } else { format } {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            if let Some(h) = &report.headline {
                out.push_str(h);
                out.push('\n');
            }
            text(&report.value, 0, &mut out);
            out
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            Some(format!("[{}]", items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(items) if items.iter().all(|i| i.as_array().is_some_and(|a| a.iter().all(|x| !x.is_object() && !x.is_array()))) => {
            Some(format!("[{}]", items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(item, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        text(item, indent + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
