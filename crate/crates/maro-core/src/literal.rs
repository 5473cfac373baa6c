//! Scalar values that hyperparameters can take: strings, booleans, integers, floats.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A concrete hyperparameter value.
///
/// Serializes as a plain JSON scalar. Integers and floats are distinct kinds
/// (`5` is `Int`, `5.0` is `Float`), but numeric comparisons promote across
/// the two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
}

impl Literal {
    pub fn str(s: impl Into<String>) -> Self {
        Literal::Str(s.into())
    }

    /// Numeric view, promoting `Int` to `f64`. `None` for strings and bools.
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Literal::Int(i) => Some(*i as f64),
            Literal::Float(f) => Some(*f),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        self.as_number().is_some()
    }

    /// Equality with numeric promotion: `Int(5)` equals `Float(5.0)`.
    pub fn same_value(&self, other: &Literal) -> bool {
        match (self.as_number(), other.as_number()) {
            (Some(a), Some(b)) => a == b,
            _ => self == other,
        }
    }

    /// Total order over numeric literals; `None` when either side is non-numeric.
    pub fn num_cmp(&self, other: &Literal) -> Option<std::cmp::Ordering> {
        let (a, b) = (self.as_number()?, other.as_number()?);
        a.partial_cmp(&b)
    }
}

impl fmt::Display for Literal {
    /// Python-flavored rendering: quoted strings, `True`/`False`, floats with
    /// a decimal point so they stay floats when re-read.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Bool(true) => write!(f, "True"),
            Literal::Bool(false) => write!(f, "False"),
            Literal::Int(i) => write!(f, "{i}"),
            Literal::Float(x) => write!(f, "{}", fmt_float(*x)),
            Literal::Str(s) => write!(f, "\"{}\"", escape_str(s)),
        }
    }
}

/// Shortest round-trip rendering, forced to contain `.` or `e` so the kind
/// survives a parse.
pub fn fmt_float(x: f64) -> String {
    let mut s = format!("{x}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

pub fn escape_str(s: &str) -> String {
    s.chars()
        .flat_map(|c| match c {
            '"' => vec!['\\', '"'],
            '\\' => vec!['\\', '\\'],
            '\n' => vec!['\\', 'n'],
            c => vec![c],
        })
        .collect()
}

impl From<&str> for Literal {
    fn from(s: &str) -> Self {
        Literal::Str(s.to_string())
    }
}

impl From<i64> for Literal {
    fn from(i: i64) -> Self {
        Literal::Int(i)
    }
}

impl From<f64> for Literal {
    fn from(f: f64) -> Self {
        Literal::Float(f)
    }
}

impl From<bool> for Literal {
    fn from(b: bool) -> Self {
        Literal::Bool(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numeric_promotion() {
        assert!(Literal::Int(5).same_value(&Literal::Float(5.0)));
        assert!(!Literal::Int(5).same_value(&Literal::Float(5.5)));
        assert!(!Literal::str("5").same_value(&Literal::Int(5)));
        assert_eq!(
            Literal::Int(3).num_cmp(&Literal::Float(8.0)),
            Some(std::cmp::Ordering::Less)
        );
        assert_eq!(Literal::str("a").num_cmp(&Literal::Int(1)), None);
    }

    #[test]
    fn display_is_python_flavored() {
        assert_eq!(Literal::Bool(false).to_string(), "False");
        assert_eq!(Literal::Float(1.0).to_string(), "1.0");
        assert_eq!(Literal::Float(0.48518719297596336).to_string(), "0.48518719297596336");
        assert_eq!(Literal::str("ignore").to_string(), "\"ignore\"");
    }

    #[test]
    fn json_scalars_round_trip() {
        let v: Literal = serde_json::from_str("5").unwrap();
        assert_eq!(v, Literal::Int(5));
        let v: Literal = serde_json::from_str("5.5").unwrap();
        assert_eq!(v, Literal::Float(5.5));
        let v: Literal = serde_json::from_str("true").unwrap();
        assert_eq!(v, Literal::Bool(true));
        let v: Literal = serde_json::from_str("\"median\"").unwrap();
        assert_eq!(v, Literal::str("median"));
    }
}
