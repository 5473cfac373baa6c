//! Pipeline instances: fully bound configurations with a pass/fail result.

use crate::literal::Literal;
use crate::space::{OperatorSpec, PlannedPipeline};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One evaluated configuration: every choice picked and every hyperparameter
/// bound. Bindings are keyed by `(operator, hyperparameter)`; operators in
/// unchosen choice alternatives have no bindings at all.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineInstance {
    pub id: String,
    /// `true` means the evaluation succeeded.
    pub result: bool,
    bindings: BTreeMap<(String, String), Literal>,
    /// Carried through from the search tool; never consulted by the logic.
    pub loss: Option<f64>,
}

impl PipelineInstance {
    pub fn new(id: impl Into<String>, result: bool) -> Self {
        PipelineInstance { id: id.into(), result, bindings: BTreeMap::new(), loss: None }
    }

    pub fn bind(&mut self, op: impl Into<String>, hp: impl Into<String>, v: impl Into<Literal>) {
        self.bindings.insert((op.into(), hp.into()), v.into());
    }

    pub fn get(&self, op: &str, hp: &str) -> Option<&Literal> {
        self.bindings.get(&(op.to_string(), hp.to_string()))
    }

    /// Lookup that ignores `#n` disambiguation suffixes, for failure oracles
    /// that reason about the underlying operator rather than a specific clone.
    pub fn get_base(&self, base_op: &str, hp: &str) -> Option<&Literal> {
        self.bindings.iter().find_map(|((op, h), v)| {
            if h != hp {
                return None;
            }
            let stem = op.split_once('#').map(|(s, _)| s).unwrap_or(op);
            (stem == base_op).then_some(v)
        })
    }

    /// True when any binding belongs to `base_op` (suffix-insensitive).
    pub fn has_operator(&self, base_op: &str) -> bool {
        self.bindings.keys().any(|(op, _)| {
            let stem = op.split_once('#').map(|(s, _)| s).unwrap_or(op.as_str());
            stem == base_op
        })
    }

    /// Bindings in `(operator, hyperparameter)` lexicographic order.
    pub fn bindings(&self) -> impl Iterator<Item = (&(String, String), &Literal)> {
        self.bindings.iter()
    }

    pub fn binding_count(&self) -> usize {
        self.bindings.len()
    }
}

/// Membership of an instance in a planned pipeline's search space.
///
/// True iff exactly one choice resolution validates the instance: every
/// binding references an operator reachable under the resolution, every
/// declared hyperparameter of a reached operator is bound inside its domain,
/// and every fixed value is bound to exactly itself. Bindings for
/// hyperparameters an operator does not declare are accepted (the operator's
/// stock schema is not part of the pipeline).
pub fn contains(pipeline: &PlannedPipeline, inst: &PipelineInstance) -> bool {
    let valid = pipeline
        .resolutions()
        .into_iter()
        .filter(|ops| resolution_admits(ops, inst))
        .count();
    valid == 1
}

fn resolution_admits(ops: &[&OperatorSpec], inst: &PipelineInstance) -> bool {
    for ((op, _), _) in inst.bindings() {
        if !ops.iter().any(|spec| spec.name == *op) {
            return false;
        }
    }
    for spec in ops {
        for (hp, dom) in &spec.hyperparams {
            match inst.get(&spec.name, hp) {
                Some(v) if dom.contains_value(v) => {}
                _ => return false,
            }
        }
        for (hp, fixed) in &spec.fixed {
            match inst.get(&spec.name, hp) {
                Some(v) if v.same_value(fixed) => {}
                _ => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{HyperparamDomain, Step};

    fn imputer_pipeline() -> PlannedPipeline {
        PlannedPipeline::new(vec![
            Step::op(
                OperatorSpec::new("SimpleImputer").with_hyperparam(
                    "strategy",
                    HyperparamDomain::categorical(vec![
                        Literal::str("mean"),
                        Literal::str("median"),
                        Literal::str("most_frequent"),
                    ])
                    .unwrap(),
                ),
            ),
            Step::op(OperatorSpec::new("OneHotEncoder").with_fixed("handle_unknown", "ignore")),
            Step::op(
                OperatorSpec::new("LogisticRegression")
                    .with_hyperparam(
                        "solver",
                        HyperparamDomain::categorical(vec![
                            Literal::str("liblinear"),
                            Literal::str("lbfgs"),
                        ])
                        .unwrap(),
                    ),
            ),
        ])
        .unwrap()
    }

    fn full_instance() -> PipelineInstance {
        let mut i = PipelineInstance::new("p0", false);
        i.bind("SimpleImputer", "strategy", "median");
        i.bind("OneHotEncoder", "handle_unknown", "ignore");
        i.bind("LogisticRegression", "solver", "liblinear");
        i
    }

    #[test]
    fn complete_instance_is_contained() {
        let p = imputer_pipeline();
        assert!(contains(&p, &full_instance()));
    }

    #[test]
    fn extra_undeclared_hyperparams_are_tolerated() {
        let p = imputer_pipeline();
        let mut i = full_instance();
        i.bind("LogisticRegression", "tol", 0.006373368408152854);
        assert!(contains(&p, &i));
    }

    #[test]
    fn missing_required_binding_is_rejected() {
        let p = PlannedPipeline::new(vec![Step::op(
            OperatorSpec::new("SimpleImputer").with_hyperparam(
                "strategy",
                HyperparamDomain::categorical(vec![Literal::str("mean"), Literal::str("median")])
                    .unwrap(),
            ),
        )])
        .unwrap();
        let empty = PipelineInstance::new("p0", true);
        assert!(!contains(&p, &empty));
    }

    #[test]
    fn out_of_domain_value_is_rejected() {
        let p = imputer_pipeline();
        let mut i = full_instance();
        i.bind("SimpleImputer", "strategy", "mode");
        assert!(!contains(&p, &i));
    }

    #[test]
    fn unknown_operator_binding_is_rejected() {
        let p = imputer_pipeline();
        let mut i = full_instance();
        i.bind("RandomForest", "n_estimators", 100);
        assert!(!contains(&p, &i));
    }

    #[test]
    fn choices_resolve_by_bindings() {
        let p = PlannedPipeline::new(vec![Step::choice_of_ops(vec![
            OperatorSpec::new("OneHotEncoder").with_fixed("handle_unknown", "ignore"),
            OperatorSpec::new("OrdinalEncoder").with_fixed("handle_unknown", "ignore"),
        ])])
        .unwrap();
        let mut chose_ordinal = PipelineInstance::new("p0", true);
        chose_ordinal.bind("OrdinalEncoder", "handle_unknown", "ignore");
        assert!(contains(&p, &chose_ordinal));

        // Bindings for both alternatives: no single resolution admits it.
        let mut both = chose_ordinal.clone();
        both.bind("OneHotEncoder", "handle_unknown", "ignore");
        assert!(!contains(&p, &both));
    }

    #[test]
    fn base_name_lookup_ignores_suffixes() {
        let mut i = PipelineInstance::new("p0", true);
        i.bind("PCA#3", "n_components", 7);
        assert_eq!(i.get_base("PCA", "n_components"), Some(&Literal::Int(7)));
        assert!(i.has_operator("PCA"));
        assert!(!i.has_operator("PC"));
    }
}
