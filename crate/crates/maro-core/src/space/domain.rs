//! Hyperparameter domains and the schema algebra over them: membership,
//! restriction by an atomic comparison, and range splitting.
//!
//! Domains are closed under the restrictions the remediator needs. Where an
//! exact restriction is not representable (removing an interior point from a
//! range), the result is the widest representable sub-domain, which keeps
//! restriction sound at the cost of excluding some valid values.

use crate::constraint::{AtomicConstraint, CmpOp};
use crate::literal::{fmt_float, Literal};
use crate::space::SpaceError;
use serde::{Deserialize, Serialize};
use std::fmt;

/// The set of values a hyperparameter may take.
///
/// Canonical form: one-element categoricals and zero-width ranges collapse to
/// `Constant`. Constructors and all algebra operations return canonical values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum HyperparamDomain {
    /// Finite, ordered, duplicate-free set of literals.
    #[serde(rename = "cat")]
    Categorical(Vec<Literal>),
    /// Inclusive integer range.
    #[serde(rename = "int")]
    IntRange(i64, i64),
    /// Real interval. The lower bound is always inclusive; `open_hi` marks an
    /// exclusive upper bound.
    #[serde(rename = "float", with = "float_range_serde")]
    FloatRange { lo: f64, hi: f64, open_hi: bool },
    /// A single pinned value.
    #[serde(rename = "const")]
    Constant(Literal),
    /// Unconstrained marker.
    #[serde(rename = "any", with = "any_serde")]
    Anything,
}

mod float_range_serde {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(lo: &f64, hi: &f64, open_hi: &bool, s: S) -> Result<S::Ok, S::Error> {
        // External form is {"float":[lo,hi]} plus a sibling "openHi" key, so
        // FloatRange is serialized by hand in `to_json`; this in-tag form
        // ([lo, hi, open]) only backs derived serde (notes, debug dumps).
        (*lo, *hi, *open_hi).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(f64, f64, bool), D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::Array(xs) if xs.len() == 2 || xs.len() == 3 => {
                let lo = xs[0].as_f64().ok_or_else(|| D::Error::custom("float lo"))?;
                let hi = xs[1].as_f64().ok_or_else(|| D::Error::custom("float hi"))?;
                let open = xs.get(2).map(|x| x.as_bool().unwrap_or(false)).unwrap_or(false);
                Ok((lo, hi, open))
            }
            _ => Err(D::Error::custom("expected [lo, hi] or [lo, hi, open]")),
        }
    }
}

mod any_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        true.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let _ = bool::deserialize(d)?;
        Ok(())
    }
}

/// Smallest f64 strictly greater than `x` (finite inputs).
fn next_up(x: f64) -> f64 {
    if x == f64::INFINITY {
        return x;
    }
    let bits = x.to_bits();
    let next = if x == 0.0 {
        1 // +0.0 and -0.0 both step to the smallest positive subnormal
    } else if x.is_sign_positive() {
        bits + 1
    } else {
        bits - 1
    };
    f64::from_bits(next)
}

impl HyperparamDomain {
    /// Integer range, canonicalized.
    pub fn int_range(lo: i64, hi: i64) -> Result<Self, SpaceError> {
        if lo > hi {
            return Err(SpaceError::InvalidDomain(format!("int range {lo}..{hi} has lo > hi")));
        }
        Ok(if lo == hi {
            HyperparamDomain::Constant(Literal::Int(lo))
        } else {
            HyperparamDomain::IntRange(lo, hi)
        })
    }

    /// Float range, canonicalized.
    pub fn float_range(lo: f64, hi: f64, open_hi: bool) -> Result<Self, SpaceError> {
        if lo > hi || (lo == hi && open_hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(SpaceError::InvalidDomain(format!("float range {lo}..{hi} is empty or non-finite")));
        }
        Ok(if lo == hi {
            HyperparamDomain::Constant(Literal::Float(lo))
        } else {
            HyperparamDomain::FloatRange { lo, hi, open_hi }
        })
    }

    /// Categorical domain, canonicalized. Order is preserved; duplicates and
    /// emptiness are rejected.
    pub fn categorical(values: Vec<Literal>) -> Result<Self, SpaceError> {
        if values.is_empty() {
            return Err(SpaceError::InvalidDomain("empty categorical".into()));
        }
        for (i, v) in values.iter().enumerate() {
            if values[..i].iter().any(|w| w == v) {
                return Err(SpaceError::InvalidDomain(format!("duplicate categorical value {v}")));
            }
        }
        Ok(if values.len() == 1 {
            HyperparamDomain::Constant(values.into_iter().next().unwrap())
        } else {
            HyperparamDomain::Categorical(values)
        })
    }

    pub fn constant(v: impl Into<Literal>) -> Self {
        HyperparamDomain::Constant(v.into())
    }

    /// Membership test.
    pub fn contains_value(&self, v: &Literal) -> bool {
        match self {
            HyperparamDomain::Categorical(vs) => vs.iter().any(|w| w.same_value(v)),
            HyperparamDomain::IntRange(lo, hi) => match v {
                Literal::Int(i) => lo <= i && i <= hi,
                Literal::Float(f) => f.fract() == 0.0 && *lo as f64 <= *f && *f <= *hi as f64,
                _ => false,
            },
            HyperparamDomain::FloatRange { lo, hi, open_hi } => match v.as_number() {
                Some(x) => *lo <= x && (x < *hi || (x == *hi && !open_hi)),
                None => false,
            },
            HyperparamDomain::Constant(c) => c.same_value(v),
            HyperparamDomain::Anything => true,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            HyperparamDomain::IntRange(..) | HyperparamDomain::FloatRange { .. }
        ) || matches!(self, HyperparamDomain::Constant(c) if c.is_numeric())
    }

    /// Lower bound of a numeric domain.
    pub fn numeric_lo(&self) -> Option<Literal> {
        match self {
            HyperparamDomain::IntRange(lo, _) => Some(Literal::Int(*lo)),
            HyperparamDomain::FloatRange { lo, .. } => Some(Literal::Float(*lo)),
            HyperparamDomain::Constant(c) if c.is_numeric() => Some(c.clone()),
            _ => None,
        }
    }

    /// Restricts this domain to the values satisfying `atom`, which must be a
    /// single-hyperparameter comparison (`Eq`, `Neq`, or `CmpConst`). The
    /// operator/hyperparameter names on the atom are ignored here; callers
    /// resolve targeting.
    pub fn restrict(&self, atom: &AtomicConstraint) -> Result<HyperparamDomain, SpaceError> {
        match atom {
            AtomicConstraint::Eq { value, .. } => self.restrict_eq(value),
            AtomicConstraint::Neq { value, .. } => self.restrict_neq(value),
            AtomicConstraint::CmpConst { cmp, limit, .. } => self.restrict_cmp(*cmp, limit),
            other => Err(SpaceError::InvalidDomain(format!(
                "atom {other:?} does not denote a single-hyperparameter restriction"
            ))),
        }
    }

    fn restrict_eq(&self, v: &Literal) -> Result<HyperparamDomain, SpaceError> {
        if self.contains_value(v) {
            Ok(HyperparamDomain::Constant(v.clone()))
        } else {
            Err(SpaceError::EmptyDomain)
        }
    }

    fn restrict_neq(&self, v: &Literal) -> Result<HyperparamDomain, SpaceError> {
        match self {
            HyperparamDomain::Categorical(vs) => {
                let kept: Vec<Literal> = vs.iter().filter(|w| !w.same_value(v)).cloned().collect();
                if kept.len() == vs.len() {
                    return Ok(self.clone());
                }
                HyperparamDomain::categorical(kept).map_err(|_| SpaceError::EmptyDomain)
            }
            HyperparamDomain::Constant(c) => {
                if c.same_value(v) {
                    Err(SpaceError::EmptyDomain)
                } else {
                    Ok(self.clone())
                }
            }
            HyperparamDomain::IntRange(lo, hi) => {
                if !self.contains_value(v) {
                    return Ok(self.clone());
                }
                let x = v.as_number().unwrap() as i64;
                if x == *lo {
                    HyperparamDomain::int_range(lo + 1, *hi)
                } else if x == *hi {
                    HyperparamDomain::int_range(*lo, hi - 1)
                } else {
                    // Interior point: a hole is not representable, so keep
                    // the wider side (lower side on ties).
                    let lower = x - lo; // width of lo..x-1
                    let upper = hi - x; // width of x+1..hi
                    if lower >= upper {
                        HyperparamDomain::int_range(*lo, x - 1)
                    } else {
                        HyperparamDomain::int_range(x + 1, *hi)
                    }
                }
            }
            HyperparamDomain::FloatRange { lo, hi, open_hi } => {
                if !self.contains_value(v) {
                    return Ok(self.clone());
                }
                let x = v.as_number().unwrap();
                if x == *lo {
                    HyperparamDomain::float_range(next_up(*lo), *hi, *open_hi)
                        .map_err(|_| SpaceError::EmptyDomain)
                } else if x == *hi {
                    HyperparamDomain::float_range(*lo, *hi, true).map_err(|_| SpaceError::EmptyDomain)
                } else if x - lo >= hi - x {
                    HyperparamDomain::float_range(*lo, x, true).map_err(|_| SpaceError::EmptyDomain)
                } else {
                    HyperparamDomain::float_range(next_up(x), *hi, *open_hi)
                        .map_err(|_| SpaceError::EmptyDomain)
                }
            }
            HyperparamDomain::Anything => match v {
                Literal::Bool(b) => Ok(HyperparamDomain::Constant(Literal::Bool(!b))),
                Literal::Int(x) => HyperparamDomain::int_range(i64::MIN, x - 1),
                Literal::Float(x) => HyperparamDomain::float_range(f64::MIN, *x, true)
                    .map_err(|_| SpaceError::EmptyDomain),
                Literal::Str(_) => Err(SpaceError::NotRepresentable(
                    "cannot exclude one string from an unconstrained domain".into(),
                )),
            },
        }
    }

    fn restrict_cmp(&self, cmp: CmpOp, limit: &Literal) -> Result<HyperparamDomain, SpaceError> {
        let c = limit
            .as_number()
            .ok_or_else(|| SpaceError::InvalidDomain(format!("non-numeric comparison limit {limit}")))?;
        match self {
            HyperparamDomain::Categorical(vs) => {
                let kept: Vec<Literal> = vs
                    .iter()
                    .filter(|w| w.as_number().map(|x| cmp.holds(x, c)).unwrap_or(false))
                    .cloned()
                    .collect();
                HyperparamDomain::categorical(kept).map_err(|_| SpaceError::EmptyDomain)
            }
            HyperparamDomain::Constant(v) => {
                let x = v
                    .as_number()
                    .ok_or_else(|| SpaceError::InvalidDomain(format!("comparison on non-numeric constant {v}")))?;
                if cmp.holds(x, c) {
                    Ok(self.clone())
                } else {
                    Err(SpaceError::EmptyDomain)
                }
            }
            HyperparamDomain::IntRange(lo, hi) => {
                // Integers admit exact tightening of strict bounds.
                let (lo, hi) = (*lo, *hi);
                let (new_lo, new_hi) = match cmp {
                    CmpOp::Le => (lo, hi.min(c.floor() as i64)),
                    CmpOp::Lt => (lo, hi.min(if c.fract() == 0.0 { c as i64 - 1 } else { c.floor() as i64 })),
                    CmpOp::Ge => (lo.max(c.ceil() as i64), hi),
                    CmpOp::Gt => (lo.max(if c.fract() == 0.0 { c as i64 + 1 } else { c.ceil() as i64 }), hi),
                };
                if new_lo > new_hi {
                    Err(SpaceError::EmptyDomain)
                } else {
                    HyperparamDomain::int_range(new_lo, new_hi)
                }
            }
            HyperparamDomain::FloatRange { lo, hi, open_hi } => {
                let (lo, hi, open_hi) = (*lo, *hi, *open_hi);
                let (new_lo, new_hi, new_open) = match cmp {
                    CmpOp::Le => {
                        if c < hi {
                            (lo, c, false)
                        } else {
                            (lo, hi, open_hi)
                        }
                    }
                    CmpOp::Lt => {
                        if c <= hi {
                            (lo, c, true)
                        } else {
                            (lo, hi, open_hi)
                        }
                    }
                    CmpOp::Ge => (lo.max(c), hi, open_hi),
                    CmpOp::Gt => (lo.max(next_up(c)), hi, open_hi),
                };
                if new_lo > new_hi || (new_lo == new_hi && new_open) {
                    Err(SpaceError::EmptyDomain)
                } else {
                    HyperparamDomain::float_range(new_lo, new_hi, new_open)
                }
            }
            HyperparamDomain::Anything => {
                // Machine extremes play the role of the missing infinite bound.
                match limit {
                    Literal::Int(x) => match cmp {
                        CmpOp::Le => HyperparamDomain::int_range(i64::MIN, *x),
                        CmpOp::Lt => HyperparamDomain::int_range(i64::MIN, x - 1),
                        CmpOp::Ge => HyperparamDomain::int_range(*x, i64::MAX),
                        CmpOp::Gt => HyperparamDomain::int_range(x + 1, i64::MAX),
                    },
                    _ => match cmp {
                        CmpOp::Le => HyperparamDomain::float_range(f64::MIN, c, false),
                        CmpOp::Lt => HyperparamDomain::float_range(f64::MIN, c, true),
                        CmpOp::Ge => HyperparamDomain::float_range(c, f64::MAX, false),
                        CmpOp::Gt => HyperparamDomain::float_range(next_up(c), f64::MAX, false),
                    },
                }
            }
        }
    }

    /// Splits a numeric range into at most `n` contiguous, disjoint pieces
    /// covering it exactly. Integer remainders go to the earlier (wider)
    /// buckets; when the range holds fewer than `n` integers, each value gets
    /// its own bucket.
    pub fn split(&self, n: usize) -> Result<Vec<HyperparamDomain>, SpaceError> {
        if n == 0 {
            return Err(SpaceError::InvalidDomain("split count must be at least 1".into()));
        }
        match self {
            HyperparamDomain::IntRange(lo, hi) => {
                let total = (hi - lo + 1) as u64;
                let n = (n as u64).min(total);
                let base = total / n;
                let rem = total % n;
                let mut out = Vec::with_capacity(n as usize);
                let mut start = *lo;
                for i in 0..n {
                    let size = base + if i < rem { 1 } else { 0 };
                    let end = start + size as i64 - 1;
                    out.push(HyperparamDomain::int_range(start, end)?);
                    start = end + 1;
                }
                Ok(out)
            }
            HyperparamDomain::FloatRange { lo, hi, open_hi } => {
                let n = n as u32;
                let width = (hi - lo) / n as f64;
                let mut out = Vec::with_capacity(n as usize);
                for i in 0..n {
                    let a = if i == 0 { *lo } else { lo + width * i as f64 };
                    let b = if i == n - 1 { *hi } else { lo + width * (i + 1) as f64 };
                    let open = if i == n - 1 { *open_hi } else { true };
                    out.push(HyperparamDomain::float_range(a, b, open)?);
                }
                Ok(out)
            }
            HyperparamDomain::Constant(c) if c.is_numeric() => Ok(vec![self.clone()]),
            _ => Err(SpaceError::NotNumeric),
        }
    }

    /// Enumerates every value of a finite domain (categoricals, constants,
    /// and integer ranges). Used by exhaustive soundness checks.
    pub fn enumerate(&self) -> Option<Vec<Literal>> {
        match self {
            HyperparamDomain::Categorical(vs) => Some(vs.clone()),
            HyperparamDomain::Constant(c) => Some(vec![c.clone()]),
            HyperparamDomain::IntRange(lo, hi) => Some((*lo..=*hi).map(Literal::Int).collect()),
            _ => None,
        }
    }

    /// Canonical JSON form: `{"cat":[...]}`, `{"int":[lo,hi]}`,
    /// `{"float":[lo,hi],"openHi":b}`, `{"const":v}`, `{"any":true}`.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            HyperparamDomain::Categorical(vs) => json!({ "cat": vs }),
            HyperparamDomain::IntRange(lo, hi) => json!({ "int": [lo, hi] }),
            HyperparamDomain::FloatRange { lo, hi, open_hi } => {
                if *open_hi {
                    json!({ "float": [lo, hi], "openHi": true })
                } else {
                    json!({ "float": [lo, hi] })
                }
            }
            HyperparamDomain::Constant(c) => json!({ "const": c }),
            HyperparamDomain::Anything => json!({ "any": true }),
        }
    }

    pub fn from_json(v: &serde_json::Value, path: &str) -> Result<Self, SpaceError> {
        let obj = v
            .as_object()
            .ok_or_else(|| SpaceError::Parse(format!("{path}: expected a domain object")))?;
        let bad = |msg: &str| SpaceError::Parse(format!("{path}: {msg}"));
        if let Some(vs) = obj.get("cat") {
            let vs: Vec<Literal> =
                serde_json::from_value(vs.clone()).map_err(|e| bad(&format!("bad cat values: {e}")))?;
            return HyperparamDomain::categorical(vs);
        }
        if let Some(r) = obj.get("int") {
            let (lo, hi): (i64, i64) =
                serde_json::from_value(r.clone()).map_err(|e| bad(&format!("bad int range: {e}")))?;
            return HyperparamDomain::int_range(lo, hi);
        }
        if let Some(r) = obj.get("float") {
            let (lo, hi): (f64, f64) =
                serde_json::from_value(r.clone()).map_err(|e| bad(&format!("bad float range: {e}")))?;
            let open = obj.get("openHi").and_then(|b| b.as_bool()).unwrap_or(false);
            return HyperparamDomain::float_range(lo, hi, open);
        }
        if let Some(c) = obj.get("const") {
            let c: Literal =
                serde_json::from_value(c.clone()).map_err(|e| bad(&format!("bad const value: {e}")))?;
            return Ok(HyperparamDomain::Constant(c));
        }
        if obj.contains_key("any") {
            return Ok(HyperparamDomain::Anything);
        }
        Err(bad("unknown domain form (expected cat/int/float/const/any)"))
    }
}

impl fmt::Display for HyperparamDomain {
    /// The textual form used by `customize_schema(...)` arguments.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HyperparamDomain::Categorical(vs) => {
                write!(f, "cat(")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ")")
            }
            HyperparamDomain::IntRange(lo, hi) => write!(f, "int({lo}, {hi})"),
            HyperparamDomain::FloatRange { lo, hi, open_hi } => {
                if *open_hi {
                    write!(f, "float({}, {}, open)", fmt_float(*lo), fmt_float(*hi))
                } else {
                    write!(f, "float({}, {})", fmt_float(*lo), fmt_float(*hi))
                }
            }
            HyperparamDomain::Constant(c) => write!(f, "const({c})"),
            HyperparamDomain::Anything => write!(f, "any()"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::AtomicConstraint as A;

    fn cat(vals: &[&str]) -> HyperparamDomain {
        HyperparamDomain::categorical(vals.iter().map(|s| Literal::str(*s)).collect()).unwrap()
    }

    fn eq(v: impl Into<Literal>) -> AtomicConstraint {
        A::eq("Op", "hp", v)
    }

    fn neq(v: impl Into<Literal>) -> AtomicConstraint {
        A::neq("Op", "hp", v)
    }

    fn cmp(op: CmpOp, v: impl Into<Literal>) -> AtomicConstraint {
        A::cmp_const("Op", "hp", op, v)
    }

    #[test]
    fn canonicalization_collapses_to_constant() {
        assert_eq!(
            HyperparamDomain::int_range(3, 3).unwrap(),
            HyperparamDomain::Constant(Literal::Int(3))
        );
        assert_eq!(
            HyperparamDomain::categorical(vec![Literal::str("a")]).unwrap(),
            HyperparamDomain::Constant(Literal::str("a"))
        );
        assert!(HyperparamDomain::int_range(5, 4).is_err());
        assert!(HyperparamDomain::categorical(vec![]).is_err());
    }

    #[test]
    fn restrict_eq_to_constant() {
        let d = cat(&["mean", "median", "most_frequent"]);
        let r = d.restrict(&eq("most_frequent")).unwrap();
        assert_eq!(r, HyperparamDomain::Constant(Literal::str("most_frequent")));
    }

    #[test]
    fn restrict_neq_drops_value() {
        let d = cat(&["mean", "median", "most_frequent"]);
        let r = d.restrict(&neq("median")).unwrap();
        assert_eq!(r, cat(&["mean", "most_frequent"]));
    }

    #[test]
    fn restrict_int_range_by_le() {
        let d = HyperparamDomain::int_range(1, 50).unwrap();
        let r = d.restrict(&cmp(CmpOp::Le, 16)).unwrap();
        assert_eq!(r, HyperparamDomain::int_range(1, 16).unwrap());
    }

    #[test]
    fn restrict_to_empty_is_an_error() {
        let d = HyperparamDomain::int_range(5, 10).unwrap();
        assert!(matches!(d.restrict(&cmp(CmpOp::Ge, 20)), Err(SpaceError::EmptyDomain)));
        let d = cat(&["a"]);
        assert!(matches!(d.restrict(&neq("a")), Err(SpaceError::EmptyDomain)));
    }

    #[test]
    fn restrict_strict_ops() {
        let d = HyperparamDomain::int_range(1, 40).unwrap();
        assert_eq!(
            d.restrict(&cmp(CmpOp::Lt, 16)).unwrap(),
            HyperparamDomain::int_range(1, 15).unwrap()
        );
        assert_eq!(
            d.restrict(&cmp(CmpOp::Gt, 16)).unwrap(),
            HyperparamDomain::int_range(17, 40).unwrap()
        );
        let f = HyperparamDomain::float_range(0.0, 1.0, false).unwrap();
        assert_eq!(
            f.restrict(&cmp(CmpOp::Lt, 0.5)).unwrap(),
            HyperparamDomain::FloatRange { lo: 0.0, hi: 0.5, open_hi: true }
        );
    }

    #[test]
    fn restriction_is_sound_and_complete_on_finite_domains() {
        // Enumerate small domains and compare membership pointwise.
        let domains = vec![cat(&["a", "b", "c"]), HyperparamDomain::int_range(0, 9).unwrap()];
        let atoms = vec![
            eq("b"),
            neq("b"),
            eq(4),
            cmp(CmpOp::Le, 4),
            cmp(CmpOp::Ge, 7),
            cmp(CmpOp::Lt, 1),
            cmp(CmpOp::Gt, 8),
        ];
        for d in &domains {
            for a in &atoms {
                let restricted = d.restrict(a);
                for v in d.enumerate().unwrap() {
                    let holds = a.holds_on_value(&v).unwrap_or(false);
                    let member = restricted.as_ref().map(|r| r.contains_value(&v)).unwrap_or(false);
                    // Complete for everything except interior-point Neq,
                    // which intentionally keeps only the wider side.
                    if member {
                        assert!(holds && d.contains_value(&v), "unsound: {d:?} ∧ {a:?} kept {v}");
                    }
                    if holds && matches!(a, A::Eq { .. } | A::CmpConst { .. }) {
                        assert!(member, "incomplete: {d:?} ∧ {a:?} lost {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn neq_interior_point_keeps_wider_side() {
        let d = HyperparamDomain::int_range(1, 10).unwrap();
        let r = d.restrict(&neq(3)).unwrap();
        assert_eq!(r, HyperparamDomain::int_range(4, 10).unwrap());
        let r = d.restrict(&neq(8)).unwrap();
        assert_eq!(r, HyperparamDomain::int_range(1, 7).unwrap());
        // Edge values are exact.
        let r = d.restrict(&neq(1)).unwrap();
        assert_eq!(r, HyperparamDomain::int_range(2, 10).unwrap());
        let r = d.restrict(&neq(10)).unwrap();
        assert_eq!(r, HyperparamDomain::int_range(1, 9).unwrap());
    }

    #[test]
    fn split_matches_worked_example() {
        let d = HyperparamDomain::int_range(5, 55).unwrap();
        let parts = d.split(5).unwrap();
        let expected: Vec<HyperparamDomain> = [(5, 15), (16, 25), (26, 35), (36, 45), (46, 55)]
            .iter()
            .map(|&(a, b)| HyperparamDomain::int_range(a, b).unwrap())
            .collect();
        assert_eq!(parts, expected);
    }

    #[test]
    fn split_remainder_goes_to_early_buckets() {
        let d = HyperparamDomain::int_range(1, 7).unwrap();
        let parts = d.split(3).unwrap();
        let expected: Vec<HyperparamDomain> = [(1, 3), (4, 5), (6, 7)]
            .iter()
            .map(|&(a, b)| HyperparamDomain::int_range(a, b).unwrap())
            .collect();
        assert_eq!(parts, expected);
        // Brute-force: union equals the input, pieces pairwise disjoint.
        for v in 1..=7 {
            let hits = parts.iter().filter(|p| p.contains_value(&Literal::Int(v))).count();
            assert_eq!(hits, 1, "value {v} covered {hits} times");
        }
    }

    #[test]
    fn split_identity_and_small_ranges() {
        let d = HyperparamDomain::int_range(1, 5).unwrap();
        assert_eq!(d.split(1).unwrap(), vec![d.clone()]);
        // Fewer integers than buckets: one singleton per value.
        let parts = d.split(9).unwrap();
        assert_eq!(parts.len(), 5);
        assert!(matches!(parts[0], HyperparamDomain::Constant(Literal::Int(1))));
        assert!(matches!(
            cat(&["a", "b"]).split(2),
            Err(SpaceError::NotNumeric)
        ));
    }

    #[test]
    fn split_propagates_the_open_upper_bound() {
        let d = HyperparamDomain::float_range(0.0, 1.0, true).unwrap();
        let parts = d.split(3).unwrap();
        // Interior buckets are half-open so neighbors never overlap; the
        // last bucket inherits the input's openness.
        for (i, p) in parts.iter().enumerate() {
            match p {
                HyperparamDomain::FloatRange { open_hi, .. } => assert!(open_hi, "bucket {i}"),
                other => panic!("bucket {i}: {other}"),
            }
        }
        assert!(!parts.last().unwrap().contains_value(&Literal::Float(1.0)));
    }

    #[test]
    fn split_float_ranges_are_disjoint_and_cover() {
        let d = HyperparamDomain::float_range(0.0, 1.0, false).unwrap();
        let parts = d.split(4).unwrap();
        assert_eq!(parts.len(), 4);
        for x in [0.0, 0.1, 0.25, 0.5, 0.74, 0.75, 0.99, 1.0] {
            let hits = parts.iter().filter(|p| p.contains_value(&Literal::Float(x))).count();
            assert_eq!(hits, 1, "value {x} covered {hits} times");
        }
    }

    #[test]
    fn json_forms_round_trip() {
        let domains = vec![
            cat(&["mean", "median"]),
            HyperparamDomain::int_range(1, 50).unwrap(),
            HyperparamDomain::float_range(0.1, 0.9, true).unwrap(),
            HyperparamDomain::Constant(Literal::Bool(true)),
            HyperparamDomain::Anything,
        ];
        for d in domains {
            let j = d.to_json();
            let back = HyperparamDomain::from_json(&j, "test").unwrap();
            assert_eq!(back, d);
        }
    }
}
