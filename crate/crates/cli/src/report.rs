//! The result envelope shared by every command, and its two renderings.

use serde_json::{json, Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Rejected,
    Inconsistent,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Rejected => 2,
            Status::Inconsistent => 3,
            Status::Inconclusive => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Rejected => "rejected",
            Status::Inconsistent => "inconsistent",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// What a command hands back before the envelope is added.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub payload: Value,
    pub residuals: Option<Value>,
}

impl Outcome {
    pub fn ok(payload: Value) -> Self {
        Outcome { status: Status::Ok, payload, residuals: None }
    }

    pub fn with_residuals(mut self, residuals: Value) -> Self {
        self.residuals = Some(residuals);
        self
    }

    pub fn from_error(err: &CliError) -> Self {
        let status = match err {
            CliError::Input(_) => Status::Rejected,
            CliError::Core(e) => match e.kind() {
                hk_core::ErrorKind::Rejected => Status::Rejected,
                hk_core::ErrorKind::Inconsistent => Status::Inconsistent,
            },
            CliError::Inconsistent(_) => Status::Inconsistent,
        };
        Outcome { status, payload: json!({ "error": err.to_string() }), residuals: None }
    }
}

pub struct Provenance<'a> {
    pub args: &'a [String],
    pub seed: u64,
}

pub fn envelope(outcome: &Outcome, prov: &Provenance<'_>) -> Value {
    let mut m = Map::new();
    m.insert("status".into(), Value::from(outcome.status.as_str()));
    m.insert("payload".into(), outcome.payload.clone());
    m.insert("residuals".into(), outcome.residuals.clone().unwrap_or(Value::Null));
    m.insert(
        "provenance".into(),
        json!({
            "args": prov.args,
            "seed": prov.seed.to_string(),
            "version": env!("CARGO_PKG_VERSION"),
        }),
    );
    Value::Object(m)
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values built from strings serialize");
    s.push('\n');
    s
}

/// One `path  value` line per leaf, paths joined with dots.
pub fn render_table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, val) in rows {
        let pad = width - k.chars().count();
        out.push_str(&k);
        out.push_str(&" ".repeat(pad + 2));
        out.push_str(&val);
        out.push('\n');
    }
    out
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |key: &str| if prefix.is_empty() { key.to_string() } else { format!("{prefix}.{key}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, rows);
            }
        }
        // short arrays of scalars stay on one line
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = a.iter().map(scalar).collect();
            rows.push((prefix.to_string(), format!("[{}]", parts.join(", "))));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), x, rows);
            }
        }
        _ => rows.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_flattens_nested_values() {
        let v = json!({"a": {"b": "1", "c": ["1", "2"]}, "d": [{"e": true}]});
        let t = render_table(&v);
        assert!(t.contains("a.b    1\n"));
        assert!(t.contains("a.c    [1, 2]\n"));
        assert!(t.contains("d.0.e  true\n"));
    }

    #[test]
    fn exit_codes() {
        let codes: Vec<i32> =
            [Status::Ok, Status::Rejected, Status::Inconsistent, Status::Inconclusive].map(Status::exit_code).into();
        assert_eq!(codes, vec![0, 2, 3, 4]);
    }
}
