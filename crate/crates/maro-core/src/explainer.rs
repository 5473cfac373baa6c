//! Natural-language rendering of a constraint, mirroring the remediation
//! traversal: conditional branches become alternatives joined by `OR`,
//! conjuncts within an alternative are chained with `and`.

use crate::constraint::{AtomicConstraint, CmpOp, Constraint, ParamOp};
use crate::literal::Literal;

/// A rendered explanation. `alternatives` mirrors the constraint tree: one
/// entry per conditional leaf branch, each a list of advice fragments.
#[derive(Debug, Clone, PartialEq)]
pub struct Explanation {
    pub text: String,
    pub alternatives: Vec<Vec<String>>,
}

/// Renders a constraint as advice. Branch alternatives are joined by a line
/// containing exactly `OR`; conjuncts are joined by a newline, a leading
/// space, and `and `. The first fragment of each alternative is capitalized.
pub fn explain(c: &Constraint) -> Explanation {
    let alternatives = collect_alternatives(c, &[]);
    let text = alternatives
        .iter()
        .map(|fragments| {
            let mut joined = String::new();
            for (i, frag) in fragments.iter().enumerate() {
                if i == 0 {
                    joined.push_str(&capitalize(frag));
                } else {
                    joined.push_str("\n and ");
                    joined.push_str(frag);
                }
            }
            joined
        })
        .collect::<Vec<_>>()
        .join("\nOR\n");
    Explanation { text, alternatives }
}

/// Walks the constraint the way remediation does: a conditional splits into
/// (cond ∧ then) and (¬cond ∧ else); conjunction fragments accumulate along
/// the way. Fragments arrive lowercase; presentation capitalizes.
fn collect_alternatives(c: &Constraint, prefix: &[String]) -> Vec<Vec<String>> {
    match c {
        Constraint::Atom(AtomicConstraint::LitTrue) => {
            if prefix.is_empty() {
                vec![vec!["no changes needed".to_string()]]
            } else {
                vec![prefix.to_vec()]
            }
        }
        Constraint::Atom(AtomicConstraint::LitFalse) => {
            let mut fragments = prefix.to_vec();
            fragments
                .push("note that every observed configuration failed; widen the search instead".into());
            vec![fragments]
        }
        Constraint::Atom(a) => {
            let mut fragments = prefix.to_vec();
            fragments.push(atom_advice(a));
            vec![fragments]
        }
        Constraint::And(parts) => {
            let mut alts = vec![prefix.to_vec()];
            for part in parts {
                let mut next = Vec::new();
                for alt in &alts {
                    next.extend(collect_alternatives(part, alt));
                }
                alts = next;
            }
            alts
        }
        Constraint::Ite { cond, then_c, else_c } => {
            let then_formula =
                Constraint::and(vec![Constraint::Atom(cond.clone()), (**then_c).clone()]);
            let else_formula =
                Constraint::and(vec![Constraint::Atom(cond.negate()), (**else_c).clone()]);
            let mut alts = collect_alternatives(&then_formula, prefix);
            alts.extend(collect_alternatives(&else_formula, prefix));
            alts
        }
    }
}

fn atom_advice(a: &AtomicConstraint) -> String {
    use AtomicConstraint::*;
    match a {
        Eq { op, hp, value } => {
            format!("try setting argument '{hp}' in operator {op} to '{}'", plain(value))
        }
        // Excluding one boolean value means requiring the other.
        Neq { op, hp, value: Literal::Bool(b) } => {
            format!("try setting argument '{hp}' in operator {op} to '{}'", plain(&Literal::Bool(!b)))
        }
        Neq { op, hp, value } => {
            format!("try avoiding value '{}' for argument '{hp}' in operator {op}", plain(value))
        }
        Present { op, hp } => format!(
            "try ensuring that argument '{hp}' in operator {op} is present for all runs \
             (a Choice operator may need to be removed)"
        ),
        Absent { op, hp } => format!(
            "try ensuring that argument '{hp}' in operator {op} is absent for all runs \
             (the operator may need to be removed from a Choice)"
        ),
        CmpConst { op, hp, cmp, limit } => format!(
            "try setting argument '{hp}' in operator {op} to a value {} {}",
            cmp_words(*cmp),
            plain(limit)
        ),
        CmpParam { lhs_op, lhs_hp, cmp, rhs_op, rhs_hp } => format!(
            "try ensuring argument '{lhs_hp}' in operator {lhs_op} is {} argument '{rhs_hp}' in operator {rhs_op}",
            param_words(*cmp)
        ),
        LitTrue => "no changes needed".into(),
        LitFalse => "note that every observed configuration failed; widen the search instead".into(),
    }
}

fn cmp_words(cmp: CmpOp) -> &'static str {
    cmp.symbol()
}

fn param_words(cmp: ParamOp) -> &'static str {
    match cmp {
        ParamOp::Le => "less than or equal to",
        ParamOp::Lt => "less than",
    }
}

/// Values inside advice render without quotes of their own; the template
/// supplies the surrounding single quotes.
fn plain(v: &Literal) -> String {
    match v {
        Literal::Str(s) => s.clone(),
        other => other.to_string(),
    }
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}
