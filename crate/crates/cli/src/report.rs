//! Reports and their JSON and text renderings.

use serde::Serialize;
use serde_json::{Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub input_digest: String,
    pub command: String,
    pub parameters: Map<String, Value>,
    pub verdict: Option<bool>,
    pub certificate: Option<Value>,
    pub diagnostics: Vec<String>,
    pub timing_ms: u64,
}

impl Report {
    /// The report as a JSON value; object keys come out sorted.
    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.to_value()).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Text => render_text(report),
    }
}

fn render_text(r: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("etale {} {}\n", r.version, r.command));
    out.push_str(&format!("input {}\n", r.input_digest));
    for (k, v) in &r.parameters {
        out.push_str(&format!("  {k} = {}\n", scalar_text(v)));
    }
    match r.verdict {
        Some(v) => out.push_str(&format!("verdict: {v}\n")),
        None => out.push_str("verdict: n/a\n"),
    }
    if let Some(c) = &r.certificate {
        out.push_str("certificate:\n");
        render_value(&mut out, c, 1);
    }
    if !r.diagnostics.is_empty() {
        out.push_str("diagnostics:\n");
        for d in &r.diagnostics {
            out.push_str(&format!("  - {d}\n"));
        }
    }
    out.push_str(&format!("time: {} ms\n", r.timing_ms));
    out
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

/// `1 = -(g_1) + (c_2)*(g_2)`, skipping zero cofactors.
pub fn identity_text(generators: &[Value], cofactors: &[Value]) -> String {
    let terms: Vec<String> = cofactors
        .iter()
        .zip(generators)
        .filter_map(|(c, g)| {
            let (c, g) = (c.as_str()?, g.as_str()?);
            match c {
                "0" => None,
                "1" => Some(format!("({g})")),
                "-1" => Some(format!("-({g})")),
                _ => Some(format!("({c})*({g})")),
            }
        })
        .collect();
    let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
    format!("1 = {}", rhs.replace("+ -", "- "))
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            if let (Some(Value::Array(g)), Some(Value::Array(c))) = (m.get("generators"), m.get("cofactors")) {
                out.push_str(&format!("{pad}{}\n", identity_text(g, c)));
            }
            for (k, x) in m {
                if k == "generators" || k == "cofactors" {
                    continue;
                }
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(out, x, depth + 1);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for (i, item) in items.iter().enumerate() {
                            out.push_str(&format!("{pad}  [{i}]\n"));
                            render_value(out, item, depth + 2);
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", inline(x))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => scalar_text(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn identity_rendering() {
        let g = [json!("x^2 - 1"), json!("2*x")];
        let c = [json!("-1"), json!("1/2*x")];
        assert_eq!(identity_text(&g, &c), "1 = -(x^2 - 1) + (1/2*x)*(2*x)");
        let c = [json!("1"), json!("-1/2*x")];
        assert_eq!(identity_text(&g, &c), "1 = (x^2 - 1) + (-1/2*x)*(2*x)");
    }

    #[test]
    fn json_keys_are_sorted() {
        let r = Report {
            version: "0".into(),
            input_digest: "d".into(),
            command: "check".into(),
            parameters: Map::new(),
            verdict: Some(true),
            certificate: Some(json!({"z": 1, "a": 2})),
            diagnostics: vec![],
            timing_ms: 3,
        };
        let s = emit_report(&r, Format::Json);
        let keys: Vec<usize> = ["certificate", "command", "diagnostics", "input_digest", "parameters", "timing_ms", "verdict", "version"]
            .iter()
            .map(|k| s.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(s.find("\"a\"").unwrap() < s.find("\"z\"").unwrap());
    }
}
