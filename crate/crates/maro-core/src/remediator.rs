//! Remediation: rewrite a planned pipeline so that its instance set excludes
//! the failure region a constraint describes, while staying as close to the
//! original pipeline as possible.
//!
//! The rewrite follows the constraint tree bottom-up. Conditionals become a
//! choice of two remediated pipelines (the condition conjoined with the then
//! branch, its negation with the else branch); conjunctions thread the
//! pipeline through one rewrite per conjunct; atoms restrict a domain, force
//! or remove a choice alternative, or proxy a two-hyperparameter comparison
//! by range splitting.

use crate::constraint::{AtomicConstraint, Constraint, ParamOp};
use crate::space::{HyperparamDomain, OperatorSpec, PlannedPipeline, SpaceError, Step};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

/// Default number of ranges a two-hyperparameter comparison is split into.
pub const DEFAULT_SPLITS: usize = 5;

#[derive(Debug, Error)]
pub enum RemediateError {
    #[error("the constraint is literally false; no pipeline can satisfy it")]
    LitFalseConstraint,
    #[error("restricting {op}.{hp} by {atom} emptied its domain")]
    EmptyDomain { op: String, hp: String, atom: String },
    #[error("unsatisfiable: {0}")]
    Unsatisfiable(String),
    #[error("both branches of the conditional are unsatisfiable; then: {then_reason}; else: {else_reason}")]
    UnsatisfiableBranch { then_reason: String, else_reason: String },
    #[error("all {0} comparison buckets emptied the dependent domain")]
    AllBucketsEmpty(usize),
    #[error("comparison between {0} and {1} needs numeric range domains")]
    NotNumeric(String, String),
    #[error("constraint references operator {0}, which the pipeline does not contain")]
    UnknownTarget(String),
    #[error("unsupported comparison shape: {0}")]
    UnsupportedComparison(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

impl RemediateError {
    /// Errors that mean "this branch admits no instances": inside a
    /// conditional such a branch is dropped in favor of its sibling.
    fn is_unsatisfiable(&self) -> bool {
        matches!(
            self,
            RemediateError::LitFalseConstraint
                | RemediateError::EmptyDomain { .. }
                | RemediateError::Unsatisfiable(_)
                | RemediateError::UnsatisfiableBranch { .. }
                | RemediateError::AllBucketsEmpty(_)
        )
    }
}

/// A record of one rewrite rule firing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RewriteNote {
    /// `customize_schema`: a hyperparameter domain was narrowed.
    DomainRestricted { op: String, hp: String, atom: String, result: HyperparamDomain },
    /// The atom already holds everywhere (fixed value, guaranteed bound, or
    /// presence of a mandatory step); nothing to rewrite.
    AlreadySatisfied { atom: String },
    /// A choice was collapsed to the alternatives containing an operator.
    ChoiceRestricted { kept: String },
    /// A choice alternative containing an operator was removed.
    AlternativeRemoved { removed: String },
    /// An alternative was dropped because a restriction emptied it.
    AlternativeDropped { atom: String, reason: String },
    /// A two-hyperparameter comparison was proxied by paired range buckets.
    RangeSplit {
        dependent_op: String,
        dependent_hp: String,
        bound_op: String,
        bound_hp: String,
        buckets: usize,
        dropped: usize,
    },
    /// Both branches of a conditional survived and were combined as a choice.
    BranchCombined { cond: String },
    /// One branch of a conditional was unsatisfiable and dropped.
    BranchDropped { cond: String, kept_then: bool, reason: String },
}

/// The result of remediation: the rewritten pipeline plus the constraint and
/// rewrite records that produced it.
#[derive(Debug, Clone)]
pub struct Remediation {
    pub original: PlannedPipeline,
    pub remediated: PlannedPipeline,
    pub constraint: Constraint,
    pub notes: Vec<RewriteNote>,
}

impl Remediation {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "original": self.original.to_json(),
            "remediated": self.remediated.to_json(),
            "constraint": self.constraint.to_json(),
            "notes": serde_json::to_value(&self.notes).unwrap(),
        })
    }
}

#[derive(Debug, Error)]
pub enum AutoRemediateError {
    #[error(transparent)]
    Localize(#[from] crate::localizer::LocalizeError),
    #[error(transparent)]
    Remediate(#[from] RemediateError),
}

/// The full composition: localize a root cause from the trace, then rewrite
/// the trace's pipeline to exclude it. The config's split hint feeds the
/// comparison proxying.
pub fn auto_remediate(
    trace: &crate::localizer::EvaluationTrace,
    cfg: &crate::localizer::LocalizerConfig,
) -> Result<Remediation, AutoRemediateError> {
    let constraint = crate::localizer::solve(trace, cfg)?;
    Ok(remediate(trace.pipeline(), &constraint, cfg.n_splits_hint)?)
}

/// Rewrites `orig` into a pipeline whose instances satisfy `c`.
pub fn remediate(
    orig: &PlannedPipeline,
    c: &Constraint,
    n_splits: usize,
) -> Result<Remediation, RemediateError> {
    if n_splits == 0 {
        return Err(RemediateError::UnsupportedComparison("split count must be at least 1".into()));
    }
    for (op, _) in c.targets() {
        if orig.find_operator(&op).is_none() {
            return Err(RemediateError::UnknownTarget(op));
        }
    }
    let mut notes = Vec::new();
    let remediated = process(orig.clone(), c, n_splits, &mut notes)?;
    Ok(Remediation {
        original: orig.clone(),
        remediated,
        constraint: c.clone(),
        notes,
    })
}

fn process(
    pipe: PlannedPipeline,
    c: &Constraint,
    n_splits: usize,
    notes: &mut Vec<RewriteNote>,
) -> Result<PlannedPipeline, RemediateError> {
    match c {
        Constraint::Ite { cond, then_c, else_c } => {
            let then_formula =
                Constraint::and(vec![Constraint::Atom(cond.clone()), (**then_c).clone()]);
            let else_formula =
                Constraint::and(vec![Constraint::Atom(cond.negate()), (**else_c).clone()]);
            let mut then_notes = Vec::new();
            let mut else_notes = Vec::new();
            let then_pipe = process(pipe.clone(), &then_formula, n_splits, &mut then_notes);
            let else_pipe = process(pipe, &else_formula, n_splits, &mut else_notes);
            match (then_pipe, else_pipe) {
                (Ok(t), Ok(e)) => {
                    notes.extend(then_notes);
                    notes.extend(else_notes);
                    notes.push(RewriteNote::BranchCombined { cond: cond.to_string() });
                    make_choice(t, e)
                }
                (Ok(t), Err(e)) if e.is_unsatisfiable() => {
                    notes.extend(then_notes);
                    notes.push(RewriteNote::BranchDropped {
                        cond: cond.to_string(),
                        kept_then: true,
                        reason: e.to_string(),
                    });
                    Ok(t)
                }
                (Err(e), Ok(el)) if e.is_unsatisfiable() => {
                    notes.extend(else_notes);
                    notes.push(RewriteNote::BranchDropped {
                        cond: cond.to_string(),
                        kept_then: false,
                        reason: e.to_string(),
                    });
                    Ok(el)
                }
                (Err(t), Err(e)) if t.is_unsatisfiable() && e.is_unsatisfiable() => {
                    Err(RemediateError::UnsatisfiableBranch {
                        then_reason: t.to_string(),
                        else_reason: e.to_string(),
                    })
                }
                (Err(t), _) => Err(t),
                (_, Err(e)) => Err(e),
            }
        }
        Constraint::And(parts) => {
            let mut pipe = pipe;
            for part in parts {
                pipe = process(pipe, part, n_splits, notes)?;
            }
            Ok(pipe)
        }
        Constraint::Atom(atom) => apply_atom(pipe, atom, n_splits, notes),
    }
}

/// Combines two remediated pipelines as a single-step choice. Identical
/// branches collapse to one.
fn make_choice(
    then_pipe: PlannedPipeline,
    else_pipe: PlannedPipeline,
) -> Result<PlannedPipeline, RemediateError> {
    if then_pipe == else_pipe {
        return Ok(then_pipe);
    }
    Ok(PlannedPipeline::new(vec![Step::Choice(vec![then_pipe, else_pipe])])?)
}

fn apply_atom(
    pipe: PlannedPipeline,
    atom: &AtomicConstraint,
    n_splits: usize,
    notes: &mut Vec<RewriteNote>,
) -> Result<PlannedPipeline, RemediateError> {
    use AtomicConstraint::*;
    match atom {
        LitTrue => Ok(pipe),
        LitFalse => Err(RemediateError::LitFalseConstraint),
        Present { op, hp } => {
            let spec = pipe.find_operator(op).ok_or_else(|| {
                RemediateError::Unsatisfiable(format!("operator {op} is absent from this branch"))
            })?;
            if !spec.hyperparams.contains_key(hp) && !spec.fixed.contains_key(hp) {
                return Err(RemediateError::Unsatisfiable(format!(
                    "{op}.{hp} is never bound, so it cannot be present"
                )));
            }
            let (pipe, changed) = pipe.restrict_choice_to(op)?;
            if changed {
                notes.push(RewriteNote::ChoiceRestricted { kept: op.clone() });
            } else {
                notes.push(RewriteNote::AlreadySatisfied { atom: atom.to_string() });
            }
            Ok(pipe)
        }
        Absent { op, hp } => match pipe.find_operator(op) {
            None => {
                notes.push(RewriteNote::AlreadySatisfied { atom: atom.to_string() });
                Ok(pipe)
            }
            Some(spec) => {
                if !spec.hyperparams.contains_key(hp) && !spec.fixed.contains_key(hp) {
                    // The hyperparameter is never bound; absence holds.
                    notes.push(RewriteNote::AlreadySatisfied { atom: atom.to_string() });
                    return Ok(pipe);
                }
                if !pipe.is_choice_member(op) {
                    return Err(RemediateError::Unsatisfiable(format!(
                        "{op} is a mandatory step; {op}.{hp} cannot be absent"
                    )));
                }
                let pipe = match pipe.remove_choice_alternative(op) {
                    Ok(p) => p,
                    Err(SpaceError::WouldEmptyChoice(o)) => {
                        return Err(RemediateError::Unsatisfiable(format!(
                            "removing {o} would empty its choice"
                        )))
                    }
                    Err(e) => return Err(e.into()),
                };
                notes.push(RewriteNote::AlternativeRemoved { removed: op.clone() });
                Ok(pipe)
            }
        },
        Eq { op, .. } | Neq { op, .. } | CmpConst { op, .. } => {
            // These atoms hold only when the binding is present, so an
            // operator inside a choice must first be made mandatory.
            let pipe = force_presence(pipe, op, notes)?;
            customize_schemas(pipe, atom, notes)
        }
        CmpParam { lhs_op, lhs_hp, cmp, rhs_op, rhs_hp } => {
            let pipe = force_presence(pipe, lhs_op, notes)?;
            let pipe = force_presence(pipe, rhs_op, notes)?;
            make_comparison(pipe, (lhs_op, lhs_hp), *cmp, (rhs_op, rhs_hp), n_splits, notes)
        }
    }
}

/// Collapses any choice containing `op` to the alternatives that hold it.
fn force_presence(
    pipe: PlannedPipeline,
    op: &str,
    notes: &mut Vec<RewriteNote>,
) -> Result<PlannedPipeline, RemediateError> {
    if pipe.find_operator(op).is_none() {
        return Err(RemediateError::Unsatisfiable(format!(
            "operator {op} is absent from this branch"
        )));
    }
    let (pipe, changed) = pipe.restrict_choice_to(op)?;
    if changed {
        notes.push(RewriteNote::ChoiceRestricted { kept: op.to_string() });
    }
    Ok(pipe)
}

enum RestrictOutcome {
    Unchanged,
    Changed(OperatorSpec),
    EmptyHere,
}

/// Applies a single-hyperparameter restriction to one operator spec.
fn restrict_spec(
    spec: &OperatorSpec,
    hp: &str,
    atom: &AtomicConstraint,
) -> Result<RestrictOutcome, RemediateError> {
    if let Some(fixed) = spec.fixed.get(hp) {
        return match atom.holds_on_value(fixed) {
            Some(true) => Ok(RestrictOutcome::Unchanged),
            _ => Ok(RestrictOutcome::EmptyHere),
        };
    }
    // An undeclared hyperparameter reads as unconstrained.
    let current = spec.hyperparams.get(hp).cloned().unwrap_or(HyperparamDomain::Anything);
    match current.restrict(atom) {
        Ok(d) if d == current => Ok(RestrictOutcome::Unchanged),
        Ok(d) => {
            let mut new_spec = spec.clone();
            new_spec.customize(hp, d);
            Ok(RestrictOutcome::Changed(new_spec))
        }
        Err(SpaceError::EmptyDomain) => Ok(RestrictOutcome::EmptyHere),
        Err(e) => Err(e.into()),
    }
}

/// Restricts the targeted hyperparameter on every occurrence of the operator.
/// Occurrences inside a choice whose restriction empties drop their
/// alternative; a mandatory occurrence that empties fails the whole branch.
fn customize_schemas(
    pipe: PlannedPipeline,
    atom: &AtomicConstraint,
    notes: &mut Vec<RewriteNote>,
) -> Result<PlannedPipeline, RemediateError> {
    let (op, hp) = match atom.targets().first() {
        Some((op, hp)) => (op.to_string(), hp.to_string()),
        None => return Ok(pipe),
    };

    fn walk(
        steps: &[Step],
        op: &str,
        hp: &str,
        atom: &AtomicConstraint,
        notes: &mut Vec<RewriteNote>,
    ) -> Result<Vec<Step>, RemediateError> {
        let mut out = Vec::new();
        for step in steps {
            match step {
                Step::Operator(spec) if spec.name == op => match restrict_spec(spec, hp, atom)? {
                    RestrictOutcome::Unchanged => {
                        notes.push(RewriteNote::AlreadySatisfied { atom: atom.to_string() });
                        out.push(step.clone());
                    }
                    RestrictOutcome::Changed(new_spec) => {
                        notes.push(RewriteNote::DomainRestricted {
                            op: op.to_string(),
                            hp: hp.to_string(),
                            atom: atom.to_string(),
                            result: new_spec.hyperparams[hp].clone(),
                        });
                        out.push(Step::Operator(new_spec));
                    }
                    RestrictOutcome::EmptyHere => {
                        return Err(RemediateError::EmptyDomain {
                            op: op.to_string(),
                            hp: hp.to_string(),
                            atom: atom.to_string(),
                        })
                    }
                },
                Step::Operator(_) => out.push(step.clone()),
                Step::Choice(alts) => {
                    let mut kept = Vec::new();
                    for alt in alts {
                        match walk(alt.steps(), op, hp, atom, notes) {
                            Ok(steps) => kept.push(PlannedPipeline::from_steps_unchecked(steps)),
                            Err(e) if e.is_unsatisfiable() => {
                                notes.push(RewriteNote::AlternativeDropped {
                                    atom: atom.to_string(),
                                    reason: e.to_string(),
                                });
                            }
                            Err(e) => return Err(e),
                        }
                    }
                    match kept.len() {
                        0 => {
                            return Err(RemediateError::EmptyDomain {
                                op: op.to_string(),
                                hp: hp.to_string(),
                                atom: atom.to_string(),
                            })
                        }
                        1 => out.extend(kept.into_iter().next().unwrap().steps().to_vec()),
                        _ => out.push(Step::Choice(kept)),
                    }
                }
            }
        }
        Ok(out)
    }

    let steps = walk(pipe.steps(), &op, &hp, atom, notes)?;
    Ok(PlannedPipeline::new(steps)?)
}

/// Upper bound of a numeric domain, reading an open float bound as its
/// supremum (conservative for guarantee checks).
fn numeric_hi(d: &HyperparamDomain) -> Option<f64> {
    match d {
        HyperparamDomain::IntRange(_, hi) => Some(*hi as f64),
        HyperparamDomain::FloatRange { hi, .. } => Some(*hi),
        HyperparamDomain::Constant(c) => c.as_number(),
        _ => None,
    }
}

fn numeric_lo(d: &HyperparamDomain) -> Option<f64> {
    match d {
        HyperparamDomain::IntRange(lo, _) => Some(*lo as f64),
        HyperparamDomain::FloatRange { lo, .. } => Some(*lo),
        HyperparamDomain::Constant(c) => c.as_number(),
        _ => None,
    }
}

/// Proxies `lhs op rhs` by splitting the bound side (`rhs`) into `n_splits`
/// ranges and capping the dependent side (`lhs`) per bucket so the comparison
/// holds for every combination within a pair. Pairs combine as a choice.
fn make_comparison(
    pipe: PlannedPipeline,
    lhs: (&str, &str),
    cmp: ParamOp,
    rhs: (&str, &str),
    n_splits: usize,
    notes: &mut Vec<RewriteNote>,
) -> Result<PlannedPipeline, RemediateError> {
    let (lhs_op, lhs_hp) = lhs;
    let (rhs_op, rhs_hp) = rhs;

    let domain_of = |spec: &OperatorSpec, hp: &str| -> Option<HyperparamDomain> {
        spec.hyperparams
            .get(hp)
            .cloned()
            .or_else(|| spec.fixed.get(hp).cloned().map(HyperparamDomain::Constant))
    };

    // Already guaranteed? The comparison holds for all combinations within a
    // resolution iff max(lhs) op min(rhs) there.
    let mut guaranteed = true;
    for resolution in pipe.resolutions() {
        let l = resolution.iter().find(|s| s.name == lhs_op).and_then(|s| domain_of(s, lhs_hp));
        let r = resolution.iter().find(|s| s.name == rhs_op).and_then(|s| domain_of(s, rhs_hp));
        match (l.as_ref().and_then(numeric_hi), r.as_ref().and_then(numeric_lo)) {
            (Some(l_hi), Some(r_lo)) if cmp.holds(l_hi, r_lo) => {}
            _ => {
                guaranteed = false;
                break;
            }
        }
    }
    if guaranteed {
        notes.push(RewriteNote::AlreadySatisfied {
            atom: format!("{lhs_op}.{lhs_hp} {} {rhs_op}.{rhs_hp}", cmp.symbol()),
        });
        return Ok(pipe);
    }

    // The split path clones pipeline steps, so it needs unique targets.
    let count = |name: &str| pipe.operators().iter().filter(|o| o.name == name).count();
    if count(lhs_op) != 1 || count(rhs_op) != 1 {
        return Err(RemediateError::UnsupportedComparison(format!(
            "{lhs_op} and {rhs_op} must each occur exactly once to be range-split"
        )));
    }

    let lhs_spec = pipe.find_operator(lhs_op).expect("checked above");
    let rhs_spec = pipe.find_operator(rhs_op).expect("checked above");
    let lhs_domain = domain_of(lhs_spec, lhs_hp)
        .ok_or_else(|| RemediateError::UnknownTarget(format!("{lhs_op}.{lhs_hp}")))?;
    let rhs_domain = domain_of(rhs_spec, rhs_hp)
        .ok_or_else(|| RemediateError::UnknownTarget(format!("{rhs_op}.{rhs_hp}")))?;
    if !lhs_domain.is_numeric() || !rhs_domain.is_numeric() {
        return Err(RemediateError::NotNumeric(
            format!("{lhs_op}.{lhs_hp}"),
            format!("{rhs_op}.{rhs_hp}"),
        ));
    }

    // Top-level step index of each operator (steps inside a choice map to the
    // choice's own index).
    let top_index = |name: &str| -> usize {
        pipe.steps()
            .iter()
            .position(|step| match step {
                Step::Operator(s) => s.name == name,
                Step::Choice(alts) => alts.iter().any(|a| a.find_operator(name).is_some()),
            })
            .expect("operator located above")
    };
    let (span_lo, span_hi) = {
        let (a, b) = (top_index(lhs_op), top_index(rhs_op));
        (a.min(b), a.max(b))
    };
    let span: Vec<Step> = pipe.steps()[span_lo..=span_hi].to_vec();

    let buckets = match rhs_domain.split(n_splits) {
        Ok(b) => b,
        Err(SpaceError::NotNumeric) => {
            return Err(RemediateError::NotNumeric(
                format!("{lhs_op}.{lhs_hp}"),
                format!("{rhs_op}.{rhs_hp}"),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let total = buckets.len();
    let mut alternatives: Vec<PlannedPipeline> = Vec::new();
    for bucket in buckets {
        let bucket_lo = bucket.numeric_lo().expect("split buckets are numeric");
        let cap = AtomicConstraint::cmp_const(lhs_op, lhs_hp, cmp.to_cmp(), bucket_lo);
        let capped = match lhs_domain.restrict(&cap) {
            Ok(d) => d,
            Err(SpaceError::EmptyDomain) => continue,
            Err(e) => return Err(e.into()),
        };
        let mut alt_steps = span.clone();
        for step in &mut alt_steps {
            if let Step::Operator(spec) = step {
                if spec.name == rhs_op {
                    spec.customize(rhs_hp, bucket.clone());
                }
                if spec.name == lhs_op {
                    spec.customize(lhs_hp, capped.clone());
                }
            }
        }
        alternatives.push(PlannedPipeline::from_steps_unchecked(alt_steps));
    }
    if alternatives.is_empty() {
        return Err(RemediateError::AllBucketsEmpty(total));
    }
    notes.push(RewriteNote::RangeSplit {
        dependent_op: lhs_op.to_string(),
        dependent_hp: lhs_hp.to_string(),
        bound_op: rhs_op.to_string(),
        bound_hp: rhs_hp.to_string(),
        buckets: total,
        dropped: total - alternatives.len(),
    });

    let mut steps: Vec<Step> = pipe.steps()[..span_lo].to_vec();
    if alternatives.len() == 1 {
        steps.extend(alternatives.into_iter().next().unwrap().steps().to_vec());
    } else {
        steps.push(Step::Choice(alternatives));
    }
    steps.extend(pipe.steps()[span_hi + 1..].to_vec());
    Ok(PlannedPipeline::new(steps)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::CmpOp;
    use crate::literal::Literal;
    use crate::space::{contains, PipelineInstance};

    fn imputer_pipeline() -> PlannedPipeline {
        PlannedPipeline::new(vec![
            Step::op(OperatorSpec::new("SimpleImputer").with_hyperparam(
                "strategy",
                HyperparamDomain::categorical(vec![
                    Literal::str("mean"),
                    Literal::str("median"),
                    Literal::str("most_frequent"),
                ])
                .unwrap(),
            )),
            Step::op(OperatorSpec::new("OneHotEncoder").with_fixed("handle_unknown", "ignore")),
            Step::op(OperatorSpec::new("LogisticRegression")),
        ])
        .unwrap()
    }

    fn feature_pipeline() -> PlannedPipeline {
        let mut pca = OperatorSpec::new("PCA")
            .with_hyperparam("n_components", HyperparamDomain::int_range(1, 40).unwrap());
        pca.customized.insert("n_components".into());
        let mut skb = OperatorSpec::new("SelectKBest")
            .with_hyperparam("k", HyperparamDomain::int_range(5, 55).unwrap());
        skb.customized.insert("k".into());
        PlannedPipeline::new(vec![
            Step::op(pca),
            Step::op(skb),
            Step::op(OperatorSpec::new("LogisticRegression")),
        ])
        .unwrap()
    }

    fn scaler_encoder_pipeline() -> PlannedPipeline {
        PlannedPipeline::new(vec![
            Step::op(OperatorSpec::new("ProjectCategoricals")),
            Step::choice_of_ops(vec![
                OperatorSpec::new("OneHotEncoder").with_fixed("handle_unknown", "ignore"),
                OperatorSpec::new("OrdinalEncoder").with_fixed("handle_unknown", "ignore"),
            ]),
            Step::op(OperatorSpec::new("StandardScaler").with_hyperparam(
                "with_mean",
                HyperparamDomain::categorical(vec![Literal::Bool(false), Literal::Bool(true)])
                    .unwrap(),
            )),
            Step::op(OperatorSpec::new("LogisticRegression")),
        ])
        .unwrap()
    }

    fn scaler_encoder_constraint() -> Constraint {
        Constraint::ite(
            AtomicConstraint::eq("StandardScaler", "with_mean", false),
            Constraint::lit_true(),
            Constraint::atom(AtomicConstraint::eq("OrdinalEncoder", "handle_unknown", "ignore")),
        )
    }

    fn int_domain(spec: &OperatorSpec, hp: &str) -> (i64, i64) {
        match &spec.hyperparams[hp] {
            HyperparamDomain::IntRange(lo, hi) => (*lo, *hi),
            HyperparamDomain::Constant(Literal::Int(v)) => (*v, *v),
            d => panic!("expected an int range, found {d}"),
        }
    }

    #[test]
    fn equality_pins_the_domain() {
        let p = imputer_pipeline();
        let c = Constraint::atom(AtomicConstraint::eq("SimpleImputer", "strategy", "most_frequent"));
        let r = remediate(&p, &c, DEFAULT_SPLITS).unwrap();
        let spec = r.remediated.find_operator("SimpleImputer").unwrap();
        assert_eq!(
            spec.hyperparams["strategy"],
            HyperparamDomain::Constant(Literal::str("most_frequent"))
        );
        assert!(spec.customized.contains("strategy"));
        // Everything else untouched.
        assert_eq!(r.remediated.steps()[1..], p.steps()[1..]);
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn lit_true_is_identity() {
        let p = imputer_pipeline();
        let r = remediate(&p, &Constraint::lit_true(), DEFAULT_SPLITS).unwrap();
        assert_eq!(r.remediated, p);
        assert!(r.notes.is_empty());
    }

    #[test]
    fn lit_false_is_an_error() {
        let p = imputer_pipeline();
        assert!(matches!(
            remediate(&p, &Constraint::lit_false(), DEFAULT_SPLITS),
            Err(RemediateError::LitFalseConstraint)
        ));
    }

    #[test]
    fn comparison_splits_into_five_pairs() {
        // k in 5..55 splits into 5..15, 16..25, 26..35, 36..45, 46..55; under
        // <= the dependent caps are 5, 16, 26, 36 and 40 (the original top).
        let p = feature_pipeline();
        let c = Constraint::atom(AtomicConstraint::cmp_param(
            "PCA",
            "n_components",
            ParamOp::Le,
            "SelectKBest",
            "k",
        ));
        let r = remediate(&p, &c, 5).unwrap();
        let alts = match &r.remediated.steps()[0] {
            Step::Choice(alts) => alts,
            s => panic!("expected a choice of pairs, found {s:?}"),
        };
        assert_eq!(alts.len(), 5);
        let expected_k = [(5, 15), (16, 25), (26, 35), (36, 45), (46, 55)];
        let expected_n = [(1, 5), (1, 16), (1, 26), (1, 36), (1, 40)];
        for (i, alt) in alts.iter().enumerate() {
            let pca = alt.find_operator("PCA").unwrap();
            let skb = alt.find_operator("SelectKBest").unwrap();
            assert_eq!(int_domain(skb, "k"), expected_k[i], "bucket {i}");
            assert_eq!(int_domain(pca, "n_components"), expected_n[i], "cap {i}");
        }
        // The classifier after the span is untouched.
        assert!(
            matches!(&r.remediated.steps()[1], Step::Operator(s) if s.name == "LogisticRegression")
        );
    }

    #[test]
    fn strict_comparison_reproduces_offset_caps() {
        // Under < the caps land one below each bucket start: 4, 15, 25, 35, 40.
        let p = feature_pipeline();
        let c = Constraint::atom(AtomicConstraint::cmp_param(
            "PCA",
            "n_components",
            ParamOp::Lt,
            "SelectKBest",
            "k",
        ));
        let r = remediate(&p, &c, 5).unwrap();
        let alts = match &r.remediated.steps()[0] {
            Step::Choice(alts) => alts,
            s => panic!("expected a choice of pairs, found {s:?}"),
        };
        let expected_n = [(1, 4), (1, 15), (1, 25), (1, 35), (1, 40)];
        for (i, alt) in alts.iter().enumerate() {
            let pca = alt.find_operator("PCA").unwrap();
            assert_eq!(int_domain(pca, "n_components"), expected_n[i], "cap {i}");
        }
    }

    #[test]
    fn single_split_caps_at_range_start() {
        let p = feature_pipeline();
        let c = Constraint::atom(AtomicConstraint::cmp_param(
            "PCA",
            "n_components",
            ParamOp::Le,
            "SelectKBest",
            "k",
        ));
        let r = remediate(&p, &c, 1).unwrap();
        let pca = r.remediated.find_operator("PCA").unwrap();
        let skb = r.remediated.find_operator("SelectKBest").unwrap();
        assert_eq!(int_domain(pca, "n_components"), (1, 5));
        assert_eq!(int_domain(skb, "k"), (5, 55));
    }

    #[test]
    fn infeasible_comparison_empties_every_bucket() {
        let p = PlannedPipeline::new(vec![
            Step::op(
                OperatorSpec::new("A").with_hyperparam("x", HyperparamDomain::int_range(30, 40).unwrap()),
            ),
            Step::op(
                OperatorSpec::new("B").with_hyperparam("y", HyperparamDomain::int_range(1, 10).unwrap()),
            ),
        ])
        .unwrap();
        let c = Constraint::atom(AtomicConstraint::cmp_param("A", "x", ParamOp::Le, "B", "y"));
        assert!(matches!(remediate(&p, &c, 5), Err(RemediateError::AllBucketsEmpty(5))));
    }

    #[test]
    fn conditional_becomes_choice_of_branches() {
        let p = scaler_encoder_pipeline();
        let r = remediate(&p, &scaler_encoder_constraint(), DEFAULT_SPLITS).unwrap();
        let alts = match &r.remediated.steps()[0] {
            Step::Choice(alts) => alts,
            s => panic!("expected a top-level choice, found {s:?}"),
        };
        assert_eq!(alts.len(), 2);

        // Then branch: with_mean pinned False, encoder choice intact.
        let then_b = &alts[0];
        assert_eq!(
            then_b.find_operator("StandardScaler").unwrap().hyperparams["with_mean"],
            HyperparamDomain::Constant(Literal::Bool(false))
        );
        assert!(then_b.find_operator("OneHotEncoder").is_some());
        assert!(then_b.find_operator("OrdinalEncoder").is_some());

        // Else branch: with_mean pinned True, choice collapsed to the
        // ordinal encoder.
        let else_b = &alts[1];
        assert_eq!(
            else_b.find_operator("StandardScaler").unwrap().hyperparams["with_mean"],
            HyperparamDomain::Constant(Literal::Bool(true))
        );
        assert!(else_b.find_operator("OneHotEncoder").is_none());
        assert!(else_b.find_operator("OrdinalEncoder").is_some());

        // Exactly two branches, recorded in the notes.
        assert!(r.notes.iter().any(|n| matches!(n, RewriteNote::BranchCombined { .. })));
    }

    #[test]
    fn remediation_is_idempotent() {
        let cases: Vec<(PlannedPipeline, Constraint)> = vec![
            (
                imputer_pipeline(),
                Constraint::atom(AtomicConstraint::eq("SimpleImputer", "strategy", "most_frequent")),
            ),
            (
                feature_pipeline(),
                Constraint::atom(AtomicConstraint::cmp_param(
                    "PCA",
                    "n_components",
                    ParamOp::Le,
                    "SelectKBest",
                    "k",
                )),
            ),
            (scaler_encoder_pipeline(), scaler_encoder_constraint()),
        ];
        for (p, c) in cases {
            let once = remediate(&p, &c, DEFAULT_SPLITS).unwrap();
            let twice = remediate(&once.remediated, &c, DEFAULT_SPLITS).unwrap();
            assert_eq!(once.remediated, twice.remediated, "constraint {c}");
        }
    }

    #[test]
    fn depth_two_tree_remediates_idempotently_and_soundly() {
        let pipe = PlannedPipeline::new(vec![
            Step::op(OperatorSpec::new("A").with_hyperparam(
                "x",
                HyperparamDomain::categorical(vec![Literal::Bool(false), Literal::Bool(true)])
                    .unwrap(),
            )),
            Step::op(
                OperatorSpec::new("B")
                    .with_hyperparam("y", HyperparamDomain::int_range(0, 9).unwrap()),
            ),
            Step::op(OperatorSpec::new("C").with_hyperparam(
                "z",
                HyperparamDomain::categorical(vec![
                    Literal::str("p"),
                    Literal::str("q"),
                    Literal::str("r"),
                ])
                .unwrap(),
            )),
        ])
        .unwrap();
        let inner = Constraint::ite(
            AtomicConstraint::cmp_const("B", "y", CmpOp::Le, 4),
            Constraint::atom(AtomicConstraint::eq("C", "z", "p")),
            Constraint::atom(AtomicConstraint::neq("C", "z", "r")),
        );
        let depth2 =
            Constraint::ite(AtomicConstraint::eq("A", "x", false), Constraint::lit_true(), inner);

        let once = remediate(&pipe, &depth2, DEFAULT_SPLITS).unwrap();
        let twice = remediate(&once.remediated, &depth2, DEFAULT_SPLITS).unwrap();
        assert_eq!(once.remediated, twice.remediated);
        for inst in crate::harness::sample(&once.remediated, 500, 99) {
            assert!(depth2.eval(&inst).unwrap(), "sampled violator {:?}", inst.id);
            assert!(contains(&pipe, &inst));
        }
    }

    #[test]
    fn remediated_space_shrinks_and_satisfies_constraint() {
        // Exhaustive check over the scaler/encoder space: an instance of the
        // remediated pipeline is an instance of the original AND satisfies
        // the constraint; instances violating the constraint are excluded.
        let p = scaler_encoder_pipeline();
        let c = scaler_encoder_constraint();
        let r = remediate(&p, &c, DEFAULT_SPLITS).unwrap();
        for encoder in ["OneHotEncoder", "OrdinalEncoder"] {
            for with_mean in [false, true] {
                let mut inst = PipelineInstance::new("i", true);
                inst.bind(encoder, "handle_unknown", "ignore");
                inst.bind("StandardScaler", "with_mean", with_mean);
                let in_orig = contains(&p, &inst);
                assert!(in_orig, "{encoder}/{with_mean} should be in the original space");
                let in_rem = contains(&r.remediated, &inst);
                let satisfied = c.eval(&inst).unwrap();
                assert_eq!(
                    in_rem, satisfied,
                    "{encoder}/{with_mean}: membership {in_rem} vs constraint {satisfied}"
                );
            }
        }
    }

    #[test]
    fn mandatory_presence_is_a_noop_with_note() {
        let p = imputer_pipeline();
        let c = Constraint::atom(AtomicConstraint::present("SimpleImputer", "strategy"));
        let r = remediate(&p, &c, DEFAULT_SPLITS).unwrap();
        assert_eq!(r.remediated, p);
        assert!(matches!(r.notes[0], RewriteNote::AlreadySatisfied { .. }));
    }

    #[test]
    fn unknown_operator_is_rejected() {
        let p = imputer_pipeline();
        let c = Constraint::atom(AtomicConstraint::eq("Mystery", "x", 1));
        assert!(matches!(remediate(&p, &c, 5), Err(RemediateError::UnknownTarget(_))));
    }

    #[test]
    fn empty_domain_bubbles_up() {
        let p = imputer_pipeline();
        // strategy can never be both most_frequent and something else.
        let c = Constraint::and(vec![
            Constraint::atom(AtomicConstraint::eq("SimpleImputer", "strategy", "most_frequent")),
            Constraint::atom(AtomicConstraint::eq("SimpleImputer", "strategy", "median")),
        ]);
        assert!(matches!(remediate(&p, &c, 5), Err(RemediateError::EmptyDomain { .. })));
    }

    #[test]
    fn fixed_value_restriction_matching_is_noop() {
        let p = imputer_pipeline();
        let c = Constraint::atom(AtomicConstraint::eq("OneHotEncoder", "handle_unknown", "ignore"));
        let r = remediate(&p, &c, 5).unwrap();
        assert_eq!(r.remediated, p);
        // Contradicting a fixed value is unsatisfiable.
        let c = Constraint::atom(AtomicConstraint::eq("OneHotEncoder", "handle_unknown", "error"));
        assert!(remediate(&p, &c, 5).is_err());
    }

    #[test]
    fn threshold_restriction_via_cmp() {
        let p = PlannedPipeline::new(vec![Step::op(OperatorSpec::new("KNeighborsClassifier")
            .with_hyperparam("n_neighbors", HyperparamDomain::int_range(1, 40).unwrap()))])
        .unwrap();
        let c = Constraint::atom(AtomicConstraint::cmp_const(
            "KNeighborsClassifier",
            "n_neighbors",
            CmpOp::Le,
            8,
        ));
        let r = remediate(&p, &c, 5).unwrap();
        assert_eq!(
            r.remediated.find_operator("KNeighborsClassifier").unwrap().hyperparams["n_neighbors"],
            HyperparamDomain::int_range(1, 8).unwrap()
        );
    }

    #[test]
    fn auto_remediate_composes_solve_and_rewrite() {
        use crate::localizer::{EvaluationTrace, LocalizerConfig};
        let p = imputer_pipeline();
        let strategies = ["median", "most_frequent", "mean", "most_frequent", "median"];
        let instances: Vec<PipelineInstance> = strategies
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let mut inst = PipelineInstance::new(format!("p{i}"), *s == "most_frequent");
                inst.bind("SimpleImputer", "strategy", *s);
                inst.bind("OneHotEncoder", "handle_unknown", "ignore");
                inst
            })
            .collect();
        let trace = EvaluationTrace::new(p.clone(), instances).unwrap();
        let r = auto_remediate(&trace, &LocalizerConfig::default()).unwrap();
        assert_eq!(
            r.remediated.find_operator("SimpleImputer").unwrap().hyperparams["strategy"],
            HyperparamDomain::Constant(Literal::str("most_frequent"))
        );
    }

    #[test]
    fn remediation_json_has_the_canonical_keys() {
        let p = imputer_pipeline();
        let c = Constraint::atom(AtomicConstraint::eq("SimpleImputer", "strategy", "most_frequent"));
        let r = remediate(&p, &c, DEFAULT_SPLITS).unwrap();
        let j = r.to_json();
        assert_eq!(j["original"], p.to_json());
        assert_eq!(j["remediated"], r.remediated.to_json());
        assert_eq!(j["constraint"], c.to_json());
        assert!(j["notes"].as_array().is_some_and(|n| !n.is_empty()));
    }

    #[test]
    fn branch_dropped_when_unsatisfiable() {
        // The else branch would force with_mean != False on a domain pinned
        // to False, so only the then branch survives.
        let p = PlannedPipeline::new(vec![Step::op(OperatorSpec::new("StandardScaler")
            .with_hyperparam("with_mean", HyperparamDomain::constant(false)))])
        .unwrap();
        let c = Constraint::ite(
            AtomicConstraint::eq("StandardScaler", "with_mean", false),
            Constraint::lit_true(),
            Constraint::lit_true(),
        );
        let r = remediate(&p, &c, 5).unwrap();
        assert!(r
            .notes
            .iter()
            .any(|n| matches!(n, RewriteNote::BranchDropped { kept_then: true, .. })));
        assert_eq!(r.remediated, p);
    }
}
