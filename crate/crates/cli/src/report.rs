//! Command reports: one fixed JSON shape, or an aligned plain-text table.

use std::fmt::Write as _;

use linlogic::typespace::Fragment;
use linlogic::Scalar;
use serde_json::{json, Map, Value};

pub fn num<N: Scalar>(x: &N) -> Value {
    if N::EXACT {
        Value::String(x.serialize())
    } else {
        json!(x.to_f64())
    }
}

pub fn nums<N: Scalar>(xs: &[N]) -> Value {
    Value::Array(xs.iter().map(num).collect())
}

pub fn fragment_summary<N: Scalar>(frag: &Fragment<N>) -> Value {
    json!({
        "contexts": frag.max_context(),
        "dims": frag.dims(),
        "saturated": frag.saturated(),
        "mode": frag.mode().name(),
        "rounds": frag.rounds_run(),
    })
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub fragment: Option<Value>,
    pub results: Map<String, Value>,
    pub certificates: Vec<Value>,
    pub counterexamples: Vec<Value>,
    /// Set when the command found a violated property or a negative verdict
    /// that was asserted.
    pub failed: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            fragment: None,
            results: Map::new(),
            certificates: Vec::new(),
            counterexamples: Vec::new(),
            failed: false,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub fn to_json(&self, timing_ms: f64) -> Value {
        let mut out = Map::new();
        out.insert("command".into(), json!(self.command));
        out.insert("inputs".into(), Value::Object(self.inputs.clone()));
        out.insert("fragment".into(), self.fragment.clone().unwrap_or(Value::Null));
        out.insert("results".into(), Value::Object(self.results.clone()));
        out.insert("certificates".into(), Value::Array(self.certificates.clone()));
        out.insert("counterexamples".into(), Value::Array(self.counterexamples.clone()));
        out.insert("timing_ms".into(), json!(timing_ms));
        Value::Object(out)
    }

    pub fn to_table(&self, timing_ms: f64) -> String {
        let mut rows: Vec<(String, String)> = vec![("command".into(), self.command.clone())];
        for (k, v) in &self.inputs {
            rows.push((format!("input.{k}"), cell(v)));
        }
        if let Some(Value::Object(f)) = &self.fragment {
            for (k, v) in f {
                rows.push((format!("fragment.{k}"), cell(v)));
            }
        }
        for (k, v) in &self.results {
            match v {
                Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
                    for (i, item) in items.iter().enumerate() {
                        rows.push((format!("{k}[{i}]"), cell(item)));
                    }
                }
                _ => rows.push((k.clone(), cell(v))),
            }
        }
        for (i, c) in self.certificates.iter().enumerate() {
            rows.push((format!("certificate[{i}]"), cell(c)));
        }
        for (i, c) in self.counterexamples.iter().enumerate() {
            rows.push((format!("counterexample[{i}]"), cell(c)));
        }
        rows.push(("timing_ms".into(), format!("{timing_ms:.1}")));
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let mut lines = v.lines();
            let _ = writeln!(out, "{k:<width$}  {}", lines.next().unwrap_or(""));
            for line in lines {
                let _ = writeln!(out, "{:<width$}  {line}", "");
            }
        }
        out
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use linlogic::scalar::rat;

    #[test]
    fn rationals_serialize_as_fractions() {
        assert_eq!(num(&rat(3, 1)), json!("3/1"));
        assert_eq!(num(&0.5f64), json!(0.5));
    }

    #[test]
    fn key_order_is_fixed() {
        let mut r = Report::new("eval");
        r.result("value", "1/1");
        r.input("formula", "1");
        let text = r.to_json(0.0).to_string();
        let keys = ["command", "inputs", "fragment", "results", "certificates", "counterexamples", "timing_ms"];
        let positions: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        assert!(r.to_table(1.0).contains("value"));
    }
}
