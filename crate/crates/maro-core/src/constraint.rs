//! The constraint language shared by the localizer, remediator, and explainer:
//! atomic comparisons and presence checks, conjunctions, and if-then-else
//! trees, plus evaluation against a pipeline instance and atom negation.

use crate::literal::Literal;
use crate::space::PipelineInstance;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConstraintError {
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("constraint parse error at {path}: {msg}")]
    Parse { path: String, msg: String },
}

/// Comparison against a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CmpOp {
    Le,
    Lt,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn holds(self, a: f64, b: f64) -> bool {
        match self {
            CmpOp::Le => a <= b,
            CmpOp::Lt => a < b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
        }
    }

    pub fn negate(self) -> CmpOp {
        match self {
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Ge => CmpOp::Lt,
            CmpOp::Gt => CmpOp::Le,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Option<CmpOp> {
        match s {
            "<=" => Some(CmpOp::Le),
            "<" => Some(CmpOp::Lt),
            ">=" => Some(CmpOp::Ge),
            ">" => Some(CmpOp::Gt),
            _ => None,
        }
    }
}

/// Comparison between two hyperparameters. Kept to `{<=, <}`: the other
/// directions are expressed by swapping operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamOp {
    Le,
    Lt,
}

impl ParamOp {
    pub fn holds(self, a: f64, b: f64) -> bool {
        match self {
            ParamOp::Le => a <= b,
            ParamOp::Lt => a < b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ParamOp::Le => "<=",
            ParamOp::Lt => "<",
        }
    }

    pub fn to_cmp(self) -> CmpOp {
        match self {
            ParamOp::Le => CmpOp::Le,
            ParamOp::Lt => CmpOp::Lt,
        }
    }
}

/// A single comparison or presence check over hyperparameter bindings.
///
/// Equality, inequality, and numeric comparisons all require the binding to
/// be present; an absent binding makes them false. `Present`/`Absent` test
/// presence alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AtomicConstraint {
    Eq { op: String, hp: String, value: Literal },
    Neq { op: String, hp: String, value: Literal },
    Present { op: String, hp: String },
    Absent { op: String, hp: String },
    CmpConst { op: String, hp: String, cmp: CmpOp, limit: Literal },
    CmpParam { lhs_op: String, lhs_hp: String, cmp: ParamOp, rhs_op: String, rhs_hp: String },
    LitTrue,
    LitFalse,
}

impl AtomicConstraint {
    pub fn eq(op: impl Into<String>, hp: impl Into<String>, value: impl Into<Literal>) -> Self {
        AtomicConstraint::Eq { op: op.into(), hp: hp.into(), value: value.into() }
    }

    pub fn neq(op: impl Into<String>, hp: impl Into<String>, value: impl Into<Literal>) -> Self {
        AtomicConstraint::Neq { op: op.into(), hp: hp.into(), value: value.into() }
    }

    pub fn present(op: impl Into<String>, hp: impl Into<String>) -> Self {
        AtomicConstraint::Present { op: op.into(), hp: hp.into() }
    }

    pub fn absent(op: impl Into<String>, hp: impl Into<String>) -> Self {
        AtomicConstraint::Absent { op: op.into(), hp: hp.into() }
    }

    pub fn cmp_const(
        op: impl Into<String>,
        hp: impl Into<String>,
        cmp: CmpOp,
        limit: impl Into<Literal>,
    ) -> Self {
        AtomicConstraint::CmpConst { op: op.into(), hp: hp.into(), cmp, limit: limit.into() }
    }

    pub fn cmp_param(
        lhs_op: impl Into<String>,
        lhs_hp: impl Into<String>,
        cmp: ParamOp,
        rhs_op: impl Into<String>,
        rhs_hp: impl Into<String>,
    ) -> Self {
        AtomicConstraint::CmpParam {
            lhs_op: lhs_op.into(),
            lhs_hp: lhs_hp.into(),
            cmp,
            rhs_op: rhs_op.into(),
            rhs_hp: rhs_hp.into(),
        }
    }

    /// Exact negation on the presence-augmented reading: `Eq`/`Neq`,
    /// `Present`/`Absent`, and comparison operators flip; two-hyperparameter
    /// comparisons swap operands.
    pub fn negate(&self) -> AtomicConstraint {
        use AtomicConstraint::*;
        match self {
            Eq { op, hp, value } => Neq { op: op.clone(), hp: hp.clone(), value: value.clone() },
            Neq { op, hp, value } => Eq { op: op.clone(), hp: hp.clone(), value: value.clone() },
            Present { op, hp } => Absent { op: op.clone(), hp: hp.clone() },
            Absent { op, hp } => Present { op: op.clone(), hp: hp.clone() },
            CmpConst { op, hp, cmp, limit } => CmpConst {
                op: op.clone(),
                hp: hp.clone(),
                cmp: cmp.negate(),
                limit: limit.clone(),
            },
            // ¬(a <= b) is (b < a); ¬(a < b) is (b <= a).
            CmpParam { lhs_op, lhs_hp, cmp, rhs_op, rhs_hp } => CmpParam {
                lhs_op: rhs_op.clone(),
                lhs_hp: rhs_hp.clone(),
                cmp: match cmp {
                    ParamOp::Le => ParamOp::Lt,
                    ParamOp::Lt => ParamOp::Le,
                },
                rhs_op: lhs_op.clone(),
                rhs_hp: lhs_hp.clone(),
            },
            LitTrue => LitFalse,
            LitFalse => LitTrue,
        }
    }

    /// Evaluates this atom against an instance's bindings.
    pub fn eval(&self, inst: &PipelineInstance) -> Result<bool, ConstraintError> {
        use AtomicConstraint::*;
        match self {
            Eq { op, hp, value } => Ok(inst.get(op, hp).map(|v| v.same_value(value)).unwrap_or(false)),
            Neq { op, hp, value } => Ok(inst.get(op, hp).map(|v| !v.same_value(value)).unwrap_or(false)),
            Present { op, hp } => Ok(inst.get(op, hp).is_some()),
            Absent { op, hp } => Ok(inst.get(op, hp).is_none()),
            CmpConst { op, hp, cmp, limit } => match inst.get(op, hp) {
                None => Ok(false),
                Some(v) => {
                    let a = v.as_number().ok_or_else(|| {
                        ConstraintError::TypeMismatch(format!(
                            "{op}.{hp} is bound to non-numeric {v} but compared numerically"
                        ))
                    })?;
                    let b = limit.as_number().ok_or_else(|| {
                        ConstraintError::TypeMismatch(format!("comparison limit {limit} is not numeric"))
                    })?;
                    Ok(cmp.holds(a, b))
                }
            },
            CmpParam { lhs_op, lhs_hp, cmp, rhs_op, rhs_hp } => {
                match (inst.get(lhs_op, lhs_hp), inst.get(rhs_op, rhs_hp)) {
                    (Some(a), Some(b)) => {
                        let x = a.as_number().ok_or_else(|| {
                            ConstraintError::TypeMismatch(format!(
                                "{lhs_op}.{lhs_hp} is bound to non-numeric {a} but compared numerically"
                            ))
                        })?;
                        let y = b.as_number().ok_or_else(|| {
                            ConstraintError::TypeMismatch(format!(
                                "{rhs_op}.{rhs_hp} is bound to non-numeric {b} but compared numerically"
                            ))
                        })?;
                        Ok(cmp.holds(x, y))
                    }
                    _ => Ok(false),
                }
            }
            LitTrue => Ok(true),
            LitFalse => Ok(false),
        }
    }

    /// Truth of a single-hyperparameter atom at a raw value, ignoring
    /// operator targeting. `None` for presence atoms and two-parameter
    /// comparisons, which have no per-value reading.
    pub fn holds_on_value(&self, v: &Literal) -> Option<bool> {
        use AtomicConstraint::*;
        match self {
            Eq { value, .. } => Some(v.same_value(value)),
            Neq { value, .. } => Some(!v.same_value(value)),
            CmpConst { cmp, limit, .. } => match (v.as_number(), limit.as_number()) {
                (Some(a), Some(b)) => Some(cmp.holds(a, b)),
                _ => Some(false),
            },
            LitTrue => Some(true),
            LitFalse => Some(false),
            _ => None,
        }
    }

    /// The `(operator, hyperparameter)` pairs this atom reads.
    pub fn targets(&self) -> Vec<(&str, &str)> {
        use AtomicConstraint::*;
        match self {
            Eq { op, hp, .. } | Neq { op, hp, .. } | Present { op, hp } | Absent { op, hp }
            | CmpConst { op, hp, .. } => vec![(op, hp)],
            CmpParam { lhs_op, lhs_hp, rhs_op, rhs_hp, .. } => {
                vec![(lhs_op, lhs_hp), (rhs_op, rhs_hp)]
            }
            LitTrue | LitFalse => vec![],
        }
    }

    pub fn to_json(&self) -> Value {
        use AtomicConstraint::*;
        match self {
            Eq { op, hp, value } => json!({ "eq": [op, hp, value] }),
            Neq { op, hp, value } => json!({ "neq": [op, hp, value] }),
            Present { op, hp } => json!({ "present": [op, hp] }),
            Absent { op, hp } => json!({ "absent": [op, hp] }),
            CmpConst { op, hp, cmp, limit } => json!({ "cmp": [op, hp, cmp.symbol(), limit] }),
            CmpParam { lhs_op, lhs_hp, cmp, rhs_op, rhs_hp } => {
                json!({ "cmp2": [lhs_op, lhs_hp, cmp.symbol(), rhs_op, rhs_hp] })
            }
            LitTrue => Value::Bool(true),
            LitFalse => Value::Bool(false),
        }
    }

    pub fn from_json(v: &Value, path: &str) -> Result<Self, ConstraintError> {
        match Constraint::from_json(v, path)? {
            Constraint::Atom(a) => Ok(a),
            other => Err(ConstraintError::Parse {
                path: path.to_string(),
                msg: format!("expected an atomic constraint, found {other:?}"),
            }),
        }
    }
}

impl fmt::Display for AtomicConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AtomicConstraint::*;
        match self {
            Eq { op, hp, value } => write!(f, "{op}.{hp} == {value}"),
            Neq { op, hp, value } => write!(f, "{op}.{hp} != {value}"),
            Present { op, hp } => write!(f, "{op}.{hp} present"),
            Absent { op, hp } => write!(f, "{op}.{hp} absent"),
            CmpConst { op, hp, cmp, limit } => write!(f, "{op}.{hp} {} {limit}", cmp.symbol()),
            CmpParam { lhs_op, lhs_hp, cmp, rhs_op, rhs_hp } => {
                write!(f, "{lhs_op}.{lhs_hp} {} {rhs_op}.{rhs_hp}", cmp.symbol())
            }
            LitTrue => write!(f, "true"),
            LitFalse => write!(f, "false"),
        }
    }
}

/// A root-cause constraint: an atom, a flattened conjunction, or an
/// if-then-else tree whose condition is atomic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Constraint {
    Atom(AtomicConstraint),
    And(Vec<Constraint>),
    Ite { cond: AtomicConstraint, then_c: Box<Constraint>, else_c: Box<Constraint> },
}

impl Constraint {
    pub fn atom(a: AtomicConstraint) -> Self {
        Constraint::Atom(a)
    }

    pub fn lit_true() -> Self {
        Constraint::Atom(AtomicConstraint::LitTrue)
    }

    pub fn lit_false() -> Self {
        Constraint::Atom(AtomicConstraint::LitFalse)
    }

    pub fn ite(cond: AtomicConstraint, then_c: Constraint, else_c: Constraint) -> Self {
        Constraint::Ite { cond, then_c: Box::new(then_c), else_c: Box::new(else_c) }
    }

    /// Conjunction with flattening: nested `And`s are spliced in and
    /// `LitTrue` children dropped. Zero conjuncts yield `LitTrue`, one yields
    /// the conjunct itself.
    pub fn and(parts: Vec<Constraint>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Constraint::And(xs) => flat.extend(xs),
                Constraint::Atom(AtomicConstraint::LitTrue) => {}
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Constraint::lit_true(),
            1 => flat.into_iter().next().unwrap(),
            _ => Constraint::And(flat),
        }
    }

    pub fn is_lit_true(&self) -> bool {
        matches!(self, Constraint::Atom(AtomicConstraint::LitTrue))
    }

    pub fn eval(&self, inst: &PipelineInstance) -> Result<bool, ConstraintError> {
        match self {
            Constraint::Atom(a) => a.eval(inst),
            Constraint::And(parts) => {
                for p in parts {
                    if !p.eval(inst)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Constraint::Ite { cond, then_c, else_c } => {
                if cond.eval(inst)? {
                    then_c.eval(inst)
                } else {
                    else_c.eval(inst)
                }
            }
        }
    }

    /// All `(operator, hyperparameter)` pairs mentioned anywhere in the tree.
    pub fn targets(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        self.collect_targets(&mut out);
        out
    }

    fn collect_targets(&self, out: &mut Vec<(String, String)>) {
        match self {
            Constraint::Atom(a) => {
                out.extend(a.targets().into_iter().map(|(o, h)| (o.to_string(), h.to_string())))
            }
            Constraint::And(parts) => parts.iter().for_each(|p| p.collect_targets(out)),
            Constraint::Ite { cond, then_c, else_c } => {
                out.extend(cond.targets().into_iter().map(|(o, h)| (o.to_string(), h.to_string())));
                then_c.collect_targets(out);
                else_c.collect_targets(out);
            }
        }
    }

    /// Depth of `Ite` nesting: atoms and conjunctions of atoms are depth 0.
    pub fn ite_depth(&self) -> usize {
        match self {
            Constraint::Atom(_) => 0,
            Constraint::And(parts) => parts.iter().map(|p| p.ite_depth()).max().unwrap_or(0),
            Constraint::Ite { then_c, else_c, .. } => 1 + then_c.ite_depth().max(else_c.ite_depth()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Constraint::Atom(a) => a.to_json(),
            Constraint::And(parts) => json!({ "and": parts.iter().map(|p| p.to_json()).collect::<Vec<_>>() }),
            Constraint::Ite { cond, then_c, else_c } => json!({
                "ite": { "if": cond.to_json(), "then": then_c.to_json(), "else": else_c.to_json() }
            }),
        }
    }

    pub fn from_json(v: &Value, path: &str) -> Result<Self, ConstraintError> {
        let err = |msg: String| ConstraintError::Parse { path: path.to_string(), msg };
        match v {
            Value::Bool(true) => return Ok(Constraint::lit_true()),
            Value::Bool(false) => return Ok(Constraint::lit_false()),
            Value::Object(_) => {}
            _ => return Err(err("expected a constraint object or boolean".into())),
        }
        let obj = v.as_object().unwrap();
        let mut keys = obj.keys();
        let (key, extra) = (keys.next(), keys.next());
        let key = key.ok_or_else(|| err("empty constraint object".into()))?;
        if extra.is_some() {
            return Err(err(format!("constraint object has more than one key: {:?}", obj.keys().collect::<Vec<_>>())));
        }
        let body = &obj[key];
        let triple = |what: &str| -> Result<(String, String, Literal), ConstraintError> {
            serde_json::from_value(body.clone())
                .map_err(|e| err(format!("bad {what} form (expected [op, hp, value]): {e}")))
        };
        let pair = |what: &str| -> Result<(String, String), ConstraintError> {
            serde_json::from_value(body.clone())
                .map_err(|e| err(format!("bad {what} form (expected [op, hp]): {e}")))
        };
        match key.as_str() {
            "eq" => triple("eq").map(|(op, hp, value)| Constraint::Atom(AtomicConstraint::Eq { op, hp, value })),
            "neq" => triple("neq").map(|(op, hp, value)| Constraint::Atom(AtomicConstraint::Neq { op, hp, value })),
            "present" => pair("present").map(|(op, hp)| Constraint::Atom(AtomicConstraint::Present { op, hp })),
            "absent" => pair("absent").map(|(op, hp)| Constraint::Atom(AtomicConstraint::Absent { op, hp })),
            "cmp" => {
                let (op, hp, sym, limit): (String, String, String, Literal) =
                    serde_json::from_value(body.clone())
                        .map_err(|e| err(format!("bad cmp form (expected [op, hp, op-symbol, limit]): {e}")))?;
                let cmp = CmpOp::from_symbol(&sym).ok_or_else(|| err(format!("unknown comparison {sym:?}")))?;
                Ok(Constraint::Atom(AtomicConstraint::CmpConst { op, hp, cmp, limit }))
            }
            "cmp2" => {
                let (lhs_op, lhs_hp, sym, rhs_op, rhs_hp): (String, String, String, String, String) =
                    serde_json::from_value(body.clone())
                        .map_err(|e| err(format!("bad cmp2 form (expected [op1, hp1, op-symbol, op2, hp2]): {e}")))?;
                let cmp = match sym.as_str() {
                    "<=" => ParamOp::Le,
                    "<" => ParamOp::Lt,
                    _ => return Err(err(format!("cmp2 comparison must be \"<=\" or \"<\", found {sym:?}"))),
                };
                Ok(Constraint::Atom(AtomicConstraint::CmpParam { lhs_op, lhs_hp, cmp, rhs_op, rhs_hp }))
            }
            "and" => {
                let parts = body
                    .as_array()
                    .ok_or_else(|| err("and expects an array".into()))?;
                if parts.len() < 2 {
                    return Err(err("and needs at least two conjuncts".into()));
                }
                let parsed: Result<Vec<_>, _> = parts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| Constraint::from_json(p, &format!("{path}.and[{i}]")))
                    .collect();
                Ok(Constraint::and(parsed?))
            }
            "ite" => {
                let o = body.as_object().ok_or_else(|| err("ite expects an object".into()))?;
                let cond_v = o.get("if").ok_or_else(|| err("ite is missing \"if\"".into()))?;
                let then_v = o.get("then").ok_or_else(|| err("ite is missing \"then\"".into()))?;
                let else_v = o.get("else").ok_or_else(|| err("ite is missing \"else\"".into()))?;
                let cond = match Constraint::from_json(cond_v, &format!("{path}.ite.if"))? {
                    Constraint::Atom(a) => a,
                    _ => {
                        return Err(ConstraintError::Parse {
                            path: format!("{path}.ite.if"),
                            msg: "ite condition must be atomic".into(),
                        })
                    }
                };
                Ok(Constraint::ite(
                    cond,
                    Constraint::from_json(then_v, &format!("{path}.ite.then"))?,
                    Constraint::from_json(else_v, &format!("{path}.ite.else"))?,
                ))
            }
            other => Err(err(format!("unknown constraint form {other:?}"))),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Atom(a) => write!(f, "{a}"),
            Constraint::And(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " && ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            Constraint::Ite { cond, then_c, else_c } => {
                write!(f, "if {cond} then ({then_c}) else ({else_c})")
            }
        }
    }
}
