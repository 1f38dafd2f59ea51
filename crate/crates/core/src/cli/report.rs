//! Command reports: exact values rendered symbolically, as decimals, and as
//! machine-readable coefficient maps.

use std::fmt::Write;

use num_bigint::BigInt;
use serde_json::{json, Map, Value as Json};

use crate::arith::{format_rational, Q};
use crate::logvalue::LogValue;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Log(LogValue),
    Rational(Q),
    Integer(BigInt),
    Text(String),
    Flag(bool),
    Float(f64),
    List(Vec<Value>),
    Record(Vec<(String, Value)>),
}

impl From<LogValue> for Value {
    fn from(v: LogValue) -> Self {
        Value::Log(v)
    }
}

impl From<Q> for Value {
    fn from(v: Q) -> Self {
        Value::Rational(v)
    }
}

impl From<BigInt> for Value {
    fn from(v: BigInt) -> Self {
        Value::Integer(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Flag(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Integer(v.into())
    }
}

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(v: Vec<T>) -> Self {
        Value::List(v.into_iter().map(Into::into).collect())
    }
}

/// Builds a [`Value::Record`] from `key => value` pairs.
macro_rules! record {
    ($($k:expr => $v:expr),* $(,)?) => {
        $crate::cli::report::Value::Record(vec![$(($k.to_string(), $v.into())),*])
    };
}
pub(crate) use record;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    CheckFailed,
    OracleDisagreement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub body: Vec<(String, Value)>,
    pub outcome: Outcome,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            body: Vec::new(),
            outcome: Outcome::Success,
        }
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.body.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.body.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::Success => 0,
            Outcome::CheckFailed | Outcome::OracleDisagreement => 4,
        }
    }

    /// Human-readable text; exact values carry a decimal with `digits`
    /// fractional digits.
    pub fn to_text(&self, digits: usize) -> String {
        let mut out = String::new();
        for (k, v) in &self.body {
            write_entry(&mut out, 0, k, v, digits);
        }
        match self.outcome {
            Outcome::Success => {}
            Outcome::CheckFailed => out.push_str("status: FAILED\n"),
            Outcome::OracleDisagreement => out.push_str("status: ORACLE DISAGREES\n"),
        }
        out
    }

    pub fn to_json(&self, digits: usize) -> Json {
        let status = match self.outcome {
            Outcome::Success => "ok",
            Outcome::CheckFailed => "check-failed",
            Outcome::OracleDisagreement => "oracle-disagreement",
        };
        let mut result = Map::new();
        for (k, v) in &self.body {
            result.insert(k.clone(), to_json(v, digits));
        }
        json!({
            "command": self.command,
            "status": status,
            "decimal_digits": digits,
            "result": result,
        })
    }
}

fn scalar_text(v: &Value, digits: usize) -> Option<String> {
    Some(match v {
        Value::Log(x) if x.is_zero() => "0".to_string(),
        Value::Log(x) => format!("{x} ≈ {}", x.to_decimal(digits)),
        Value::Rational(x) => format_rational(x),
        Value::Integer(x) => x.to_string(),
        Value::Text(s) => s.clone(),
        Value::Flag(b) => b.to_string(),
        Value::Float(x) => format!("{x:.prec$e}", prec = digits.min(16)),
        Value::List(items) if items.iter().all(|i| matches!(i, Value::Rational(_) | Value::Integer(_))) => {
            let parts: Vec<String> = items.iter().map(|i| scalar_text(i, digits).unwrap()).collect();
            format!("({})", parts.join(", "))
        }
        Value::List(items) if items.is_empty() => "[]".to_string(),
        _ => return None,
    })
}

fn write_entry(out: &mut String, indent: usize, key: &str, v: &Value, digits: usize) {
    let pad = " ".repeat(indent);
    if let Some(s) = scalar_text(v, digits) {
        let _ = writeln!(out, "{pad}{key}: {s}");
        return;
    }
    let _ = writeln!(out, "{pad}{key}:");
    match v {
        Value::Record(fields) => {
            for (k, x) in fields {
                write_entry(out, indent + 2, k, x, digits);
            }
        }
        Value::List(items) => {
            for (i, x) in items.iter().enumerate() {
                write_entry(out, indent + 2, &format!("[{i}]"), x, digits);
            }
        }
        _ => unreachable!("scalars handled above"),
    }
}

/// `{"2": "2", "3": "-1/2"}` for `2*log(2) - 1/2*log(3)`.
pub fn coefficient_map(x: &LogValue) -> Json {
    let mut m = Map::new();
    for (p, c) in x.terms() {
        m.insert(p.to_string(), Json::String(format_rational(c)));
    }
    Json::Object(m)
}

fn to_json(v: &Value, digits: usize) -> Json {
    match v {
        Value::Log(x) => json!({
            "symbolic": x.to_string(),
            "coefficients": coefficient_map(x),
            "decimal": x.to_decimal(digits),
        }),
        Value::Rational(x) => Json::String(format_rational(x)),
        Value::Integer(x) => match i64::try_from(x) {
            Ok(k) => json!(k),
            Err(_) => Json::String(x.to_string()),
        },
        Value::Text(s) => Json::String(s.clone()),
        Value::Flag(b) => Json::Bool(*b),
        Value::Float(x) => json!(x),
        Value::List(items) => Json::Array(items.iter().map(|i| to_json(i, digits)).collect()),
        Value::Record(fields) => {
            let mut m = Map::new();
            for (k, x) in fields {
                m.insert(k.clone(), to_json(x, digits));
            }
            Json::Object(m)
        }
    }
}
