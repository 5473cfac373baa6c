//! Fault localization: find a constraint that exactly separates passing from
//! failing instances of an evaluation trace.
//!
//! The solver enumerates a finite candidate space of atomic constraints whose
//! constants are drawn from values observed in the trace, then stacks them
//! into if-then-else trees of bounded depth. Over observed data this is
//! equisatisfiable with a solver-aided search for the same templates, and it
//! is deterministic: the returned constraint is the first exact separator in
//! a fixed candidate order.

use crate::constraint::{AtomicConstraint, CmpOp, Constraint, ParamOp};
use crate::literal::Literal;
use crate::space::{contains, PipelineInstance, PlannedPipeline};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LocalizeError {
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("every instance in the trace failed; broaden the search before localizing")]
    AllFailed,
    #[error("no constraint within depth {max_depth} separates the trace; best partial separator: {}, misclassifying instances [{}]",
        best.as_ref().map(|a| a.to_string()).unwrap_or_else(|| "none".into()),
        misclassified.join(", "))]
    NoExplanation {
        max_depth: usize,
        best: Option<Box<AtomicConstraint>>,
        misclassified: Vec<String>,
    },
}

/// A planned pipeline together with the labeled instances an automated search
/// produced from it.
#[derive(Debug, Clone)]
pub struct EvaluationTrace {
    pipeline: PlannedPipeline,
    instances: Vec<PipelineInstance>,
}

impl EvaluationTrace {
    /// Validates that ids are unique and every instance lies in the
    /// pipeline's search space.
    pub fn new(
        pipeline: PlannedPipeline,
        instances: Vec<PipelineInstance>,
    ) -> Result<Self, LocalizeError> {
        if instances.is_empty() {
            return Err(LocalizeError::InvalidTrace("trace has no instances".into()));
        }
        for (i, inst) in instances.iter().enumerate() {
            if instances[..i].iter().any(|other| other.id == inst.id) {
                return Err(LocalizeError::InvalidTrace(format!("duplicate instance id {}", inst.id)));
            }
            if !contains(&pipeline, inst) {
                return Err(LocalizeError::InvalidTrace(format!(
                    "instance {} does not belong to the pipeline's search space",
                    inst.id
                )));
            }
        }
        Ok(EvaluationTrace { pipeline, instances })
    }

    pub fn pipeline(&self) -> &PlannedPipeline {
        &self.pipeline
    }

    pub fn instances(&self) -> &[PipelineInstance] {
        &self.instances
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LocalizerConfig {
    /// Maximum if-then-else stacking depth.
    pub max_depth: usize,
    /// Split-count hint passed through to the remediator.
    pub n_splits_hint: usize,
}

impl Default for LocalizerConfig {
    fn default() -> Self {
        LocalizerConfig { max_depth: 2, n_splits_hint: 5 }
    }
}

impl LocalizerConfig {
    pub fn with_max_depth(mut self, d: usize) -> Self {
        // Bounded to keep the stacked search from blowing up.
        self.max_depth = d.min(4);
        self
    }
}

/// Observed values per `(operator, hyperparameter)`, in lexicographic key
/// order; values keep first-seen order.
fn observed_values(instances: &[PipelineInstance]) -> BTreeMap<(String, String), Vec<Literal>> {
    let mut map: BTreeMap<(String, String), Vec<Literal>> = BTreeMap::new();
    for inst in instances {
        for (key, v) in inst.bindings() {
            let seen = map.entry(key.clone()).or_default();
            if !seen.iter().any(|w| w.same_value(v)) {
                seen.push(v.clone());
            }
        }
    }
    map
}

/// The deterministic candidate list the solver searches, simplest templates
/// first: equality, inequality, absence, presence, numeric thresholds, then
/// two-hyperparameter comparisons. Constants come only from observed values;
/// `<=` thresholds ascend and `>=` thresholds descend so that the first
/// satisfying candidate of either shape is the tightest bound consistent with
/// the successes.
pub fn candidate_atoms(instances: &[PipelineInstance]) -> Vec<AtomicConstraint> {
    let observed = observed_values(instances);
    let mut out = Vec::new();

    for ((op, hp), values) in &observed {
        for v in values {
            out.push(AtomicConstraint::eq(op.clone(), hp.clone(), v.clone()));
        }
    }
    for ((op, hp), values) in &observed {
        for v in values {
            out.push(AtomicConstraint::neq(op.clone(), hp.clone(), v.clone()));
        }
    }
    for (op, hp) in observed.keys() {
        out.push(AtomicConstraint::absent(op.clone(), hp.clone()));
    }
    for (op, hp) in observed.keys() {
        out.push(AtomicConstraint::present(op.clone(), hp.clone()));
    }

    let numeric: Vec<(&(String, String), Vec<Literal>)> = observed
        .iter()
        .filter_map(|(key, values)| {
            let mut nums: Vec<Literal> =
                values.iter().filter(|v| v.is_numeric()).cloned().collect();
            if nums.is_empty() {
                return None;
            }
            nums.sort_by(|a, b| a.num_cmp(b).unwrap());
            Some((key, nums))
        })
        .collect();

    for ((op, hp), nums) in &numeric {
        for v in nums {
            out.push(AtomicConstraint::cmp_const(op.clone(), hp.clone(), CmpOp::Le, v.clone()));
        }
    }
    for ((op, hp), nums) in &numeric {
        for v in nums.iter().rev() {
            out.push(AtomicConstraint::cmp_const(op.clone(), hp.clone(), CmpOp::Ge, v.clone()));
        }
    }

    for ((lop, lhp), _) in &numeric {
        for ((rop, rhp), _) in &numeric {
            if (lop, lhp) == (rop, rhp) {
                continue;
            }
            for cmp in [ParamOp::Le, ParamOp::Lt] {
                out.push(AtomicConstraint::cmp_param(
                    lop.clone(),
                    lhp.clone(),
                    cmp,
                    rop.clone(),
                    rhp.clone(),
                ));
            }
        }
    }
    out
}

/// Evaluation that treats type errors as "does not separate".
fn atom_matches(atom: &AtomicConstraint, inst: &PipelineInstance) -> Option<bool> {
    atom.eval(inst).ok()
}

fn exactly_separates(atom: &AtomicConstraint, instances: &[PipelineInstance]) -> bool {
    instances
        .iter()
        .all(|p| atom_matches(atom, p) == Some(p.result))
}

/// First atomic constraint, in candidate order, that exactly separates the
/// trace. Degenerate traces yield the corresponding literal.
pub fn solve_atomic(trace: &EvaluationTrace) -> Option<AtomicConstraint> {
    solve_atomic_instances(trace.instances())
}

fn solve_atomic_instances(instances: &[PipelineInstance]) -> Option<AtomicConstraint> {
    if instances.iter().all(|p| p.result) {
        return Some(AtomicConstraint::LitTrue);
    }
    if instances.iter().all(|p| !p.result) {
        return Some(AtomicConstraint::LitFalse);
    }
    candidate_atoms(instances)
        .into_iter()
        .find(|a| exactly_separates(a, instances))
}

/// Finds a constraint `C` with `eval(C, p) == result(p)` for every instance,
/// searching atoms first and then if-then-else stacks of increasing depth.
pub fn solve(trace: &EvaluationTrace, cfg: &LocalizerConfig) -> Result<Constraint, LocalizeError> {
    let instances = trace.instances();
    if instances.iter().all(|p| !p.result) {
        return Err(LocalizeError::AllFailed);
    }
    for depth in 0..=cfg.max_depth {
        if let Some(c) = solve_depth(instances, depth) {
            return Ok(c);
        }
    }
    let (best, misclassified) = best_partial(instances);
    Err(LocalizeError::NoExplanation {
        max_depth: cfg.max_depth,
        best: best.map(Box::new),
        misclassified,
    })
}

fn solve_depth(instances: &[PipelineInstance], depth: usize) -> Option<Constraint> {
    if instances.is_empty() {
        // An empty branch is vacuously satisfied.
        return Some(Constraint::lit_true());
    }
    if let Some(atom) = solve_atomic_instances(instances) {
        return Some(Constraint::Atom(atom));
    }
    if depth == 0 {
        return None;
    }
    for cond in candidate_atoms(instances) {
        let mut then_part = Vec::new();
        let mut else_part = Vec::new();
        let mut broken = false;
        for p in instances {
            match atom_matches(&cond, p) {
                Some(true) => then_part.push(p.clone()),
                Some(false) => else_part.push(p.clone()),
                None => {
                    broken = true;
                    break;
                }
            }
        }
        if broken || then_part.is_empty() || else_part.is_empty() {
            continue;
        }
        // Downstream rewriting treats the else branch as ¬cond, so the
        // condition's negation must be the exact complement on this trace.
        // (Eq and Neq, for example, are both false on an absent binding.)
        let negated = cond.negate();
        let negation_exact = instances
            .iter()
            .all(|p| atom_matches(&negated, p) == atom_matches(&cond, p).map(|b| !b));
        if !negation_exact {
            continue;
        }
        if let Some(then_c) = solve_depth(&then_part, depth - 1) {
            if let Some(else_c) = solve_depth(&else_part, depth - 1) {
                return Some(Constraint::ite(cond, then_c, else_c));
            }
        }
    }
    None
}

/// The atom misclassifying the fewest instances, for error reporting.
fn best_partial(instances: &[PipelineInstance]) -> (Option<AtomicConstraint>, Vec<String>) {
    let mut best: Option<(AtomicConstraint, Vec<String>)> = None;
    for atom in candidate_atoms(instances) {
        let missed: Vec<String> = instances
            .iter()
            .filter(|p| atom_matches(&atom, p) != Some(p.result))
            .map(|p| p.id.clone())
            .collect();
        if best.as_ref().map(|(_, m)| missed.len() < m.len()).unwrap_or(true) {
            best = Some((atom, missed));
        }
    }
    match best {
        Some((atom, missed)) => (Some(atom), missed),
        None => (None, instances.iter().map(|p| p.id.clone()).collect()),
    }
}
