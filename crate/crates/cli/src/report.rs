use std::fmt::Write as _;

use gns_core::RankPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    Json,
    #[default]
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(u64),
    Real(f64),
    Bool(bool),
    Text(String),
}

impl Value {
    pub fn as_int(&self) -> Option<u64> {
        match self {
            Value::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Value::Real(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(v) => Some(*v),
            _ => None,
        }
    }

    fn json(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Real(v) => real(*v),
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => serde_json::to_string(s).unwrap(),
        }
    }

    fn text(&self) -> String {
        match self {
            Value::Text(s) => s.clone(),
            other => other.json(),
        }
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

/// 17 significant digits, enough to round-trip any `f64`. Non-finite values
/// become `null` so the JSON stays valid.
fn real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".into()
    }
}

/// Outcome of one command: echoed invocation, tolerance policy, computed
/// numbers, the pass flag and wall time.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub arguments: Vec<String>,
    pub policy: RankPolicy,
    pub fields: Vec<(&'static str, Value)>,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl Report {
    pub fn new(command: &str, arguments: Vec<String>, policy: RankPolicy) -> Self {
        Self {
            command: command.to_owned(),
            arguments,
            policy,
            fields: Vec::new(),
            pass: false,
            wall_time_s: 0.0,
        }
    }

    pub fn field(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.fields.push((key, value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn int(&self, key: &str) -> Option<u64> {
        self.get(key).and_then(Value::as_int)
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        self.get(key).and_then(Value::as_real)
    }

    fn policy_text(&self) -> String {
        match self.policy.absolute {
            Some(t) => format!("absolute {}", real(t)),
            None => "relative dim*eps*max(lambda_max,1)".into(),
        }
    }

    /// Single-line JSON object.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        let _ = write!(
            out,
            "\"command\":{}",
            serde_json::to_string(&self.command).unwrap()
        );
        let _ = write!(
            out,
            ",\"arguments\":{}",
            serde_json::to_string(&self.arguments).unwrap()
        );
        let policy = match self.policy.absolute {
            Some(t) => format!("{{\"kind\":\"absolute\",\"threshold\":{}}}", real(t)),
            None => "{\"kind\":\"relative\"}".into(),
        };
        let _ = write!(out, ",\"tolerance_policy\":{policy}");
        for (k, v) in &self.fields {
            let _ = write!(out, ",\"{k}\":{}", v.json());
        }
        let _ = write!(out, ",\"pass\":{}", self.pass);
        let _ = write!(out, ",\"wall_time_s\":{}", real(self.wall_time_s));
        out.push('}');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "command: {} {}",
            self.command,
            self.arguments.join(" ")
        );
        let _ = writeln!(out, "tolerance_policy: {}", self.policy_text());
        for (k, v) in &self.fields {
            let _ = writeln!(out, "{k}: {}", v.text());
        }
        let _ = writeln!(out, "pass: {}", self.pass);
        let _ = writeln!(out, "wall_time_s: {}", real(self.wall_time_s));
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = self.to_json();
                s.push('\n');
                s
            }
            Format::Text => self.to_text(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("index", vec!["ch.json".into()], RankPolicy::default())
            .field("d_span", 3usize)
            .field("residual", 0.1f64)
            .field("agree", true)
            .field("name", "x\"y");
        r.pass = true;
        r
    }

    #[test]
    fn json_is_valid_and_exact() {
        let v: serde_json::Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["d_span"], 3);
        assert_eq!(v["residual"].as_f64().unwrap(), 0.1);
        assert_eq!(v["pass"], true);
        assert_eq!(v["name"], "x\"y");
        assert_eq!(v["tolerance_policy"]["kind"], "relative");
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(real(0.1), "1.0000000000000001e-1");
        let x = 1.0 / 3.0;
        assert_eq!(real(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn text_lists_fields() {
        let t = sample().to_text();
        assert!(t.contains("d_span: 3\n"));
        assert!(t.contains("pass: true\n"));
    }
}
