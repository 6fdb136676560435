//! File formats, builtin fixtures and command implementations behind the
//! `localh` binary.

pub mod commands;
pub mod config;
pub mod corpus;
pub mod error;
pub mod format;

use serde_json::Value;

pub use config::{OutputFormat, RunConfig};
pub use error::CliError;

/// Canonical output: sorted keys, two-space indentation, trailing newline.
pub fn render(report: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("values serialize");
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut out = String::new();
            text(report, "", &mut out);
            out
        }
    }
}

fn text(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                text(x, &p, out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object()) => {
            for (i, x) in xs.iter().enumerate() {
                text(x, &format!("{path}[{i}]"), out);
            }
        }
        _ => {
            out.push_str(path);
            out.push_str(": ");
            out.push_str(&v.to_string());
            out.push('\n');
        }
    }
}
