//! Planned pipeline structure: operators, choices, and the rewrites on them.

use crate::literal::Literal;
use crate::space::{HyperparamDomain, SpaceError};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::collections::BTreeSet;

/// One operator in a pipeline: searchable hyperparameter domains plus
/// pre-bound (fixed) values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub name: String,
    /// Searchable hyperparameters, in declaration order.
    pub hyperparams: IndexMap<String, HyperparamDomain>,
    /// Values pinned by the pipeline author; these still appear in instance
    /// bindings (they identify the operator when it sits inside a choice).
    pub fixed: IndexMap<String, Literal>,
    /// Hyperparameters whose domain was overridden relative to the operator's
    /// stock schema. Only these print as `customize_schema(...)` arguments.
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub customized: BTreeSet<String>,
}

impl OperatorSpec {
    pub fn new(name: impl Into<String>) -> Self {
        OperatorSpec {
            name: name.into(),
            hyperparams: IndexMap::new(),
            fixed: IndexMap::new(),
            customized: BTreeSet::new(),
        }
    }

    pub fn with_hyperparam(mut self, hp: impl Into<String>, d: HyperparamDomain) -> Self {
        self.hyperparams.insert(hp.into(), d);
        self
    }

    pub fn with_fixed(mut self, hp: impl Into<String>, v: impl Into<Literal>) -> Self {
        self.fixed.insert(hp.into(), v.into());
        self
    }

    /// Replaces a hyperparameter's domain and marks it customized.
    pub fn customize(&mut self, hp: &str, d: HyperparamDomain) {
        self.hyperparams.insert(hp.to_string(), d);
        self.customized.insert(hp.to_string());
    }

    fn validate(&self) -> Result<(), SpaceError> {
        if self.name.is_empty() {
            return Err(SpaceError::InvalidPipeline("operator with empty name".into()));
        }
        for hp in self.fixed.keys() {
            if self.hyperparams.contains_key(hp) {
                return Err(SpaceError::InvalidPipeline(format!(
                    "{}.{hp} is both fixed and searchable",
                    self.name
                )));
            }
        }
        Ok(())
    }

    /// True when the operator binds at least one value in every instance that
    /// includes it; required for operators inside choices so that bindings
    /// identify the chosen alternative.
    fn is_identifiable(&self) -> bool {
        !self.hyperparams.is_empty() || !self.fixed.is_empty()
    }

    fn to_json(&self) -> Value {
        let mut hps = Map::new();
        for (hp, d) in &self.hyperparams {
            hps.insert(hp.clone(), d.to_json());
        }
        let mut fixed = Map::new();
        for (hp, v) in &self.fixed {
            fixed.insert(hp.clone(), serde_json::to_value(v).unwrap());
        }
        let mut obj = Map::new();
        obj.insert("name".into(), Value::String(self.name.clone()));
        obj.insert("hyperparams".into(), Value::Object(hps));
        obj.insert("fixed".into(), Value::Object(fixed));
        if !self.customized.is_empty() {
            obj.insert(
                "customized".into(),
                json!(self.customized.iter().collect::<Vec<_>>()),
            );
        }
        Value::Object(obj)
    }

    fn from_json(v: &Value, path: &str) -> Result<Self, SpaceError> {
        let obj = v
            .as_object()
            .ok_or_else(|| SpaceError::Parse(format!("{path}: expected an operator object")))?;
        let name = obj
            .get("name")
            .and_then(|n| n.as_str())
            .ok_or_else(|| SpaceError::Parse(format!("{path}.name: missing or not a string")))?
            .to_string();
        let mut spec = OperatorSpec::new(name);
        if let Some(hps) = obj.get("hyperparams") {
            let hps = hps
                .as_object()
                .ok_or_else(|| SpaceError::Parse(format!("{path}.hyperparams: expected an object")))?;
            for (hp, dv) in hps {
                let d = HyperparamDomain::from_json(dv, &format!("{path}.hyperparams.{hp}"))?;
                spec.hyperparams.insert(hp.clone(), d);
            }
        }
        if let Some(fixed) = obj.get("fixed") {
            let fixed = fixed
                .as_object()
                .ok_or_else(|| SpaceError::Parse(format!("{path}.fixed: expected an object")))?;
            for (hp, fv) in fixed {
                let lit: Literal = serde_json::from_value(fv.clone())
                    .map_err(|e| SpaceError::Parse(format!("{path}.fixed.{hp}: {e}")))?;
                spec.fixed.insert(hp.clone(), lit);
            }
        }
        if let Some(cz) = obj.get("customized") {
            let names: Vec<String> = serde_json::from_value(cz.clone())
                .map_err(|e| SpaceError::Parse(format!("{path}.customized: {e}")))?;
            spec.customized = names.into_iter().collect();
        }
        Ok(spec)
    }
}

/// A pipeline step: a single operator, or a choice among alternative
/// sub-pipelines (a plain operator choice is a choice of one-step
/// sub-pipelines).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Step {
    Operator(OperatorSpec),
    Choice(Vec<PlannedPipeline>),
}

impl Step {
    pub fn op(spec: OperatorSpec) -> Step {
        Step::Operator(spec)
    }

    /// Choice among single-operator alternatives.
    pub fn choice_of_ops(ops: Vec<OperatorSpec>) -> Step {
        Step::Choice(ops.into_iter().map(PlannedPipeline::single).collect())
    }
}

/// An ordered dataflow chain of steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannedPipeline {
    steps: Vec<Step>,
}

impl PlannedPipeline {
    /// Builds and validates a pipeline. Duplicate operator names that can
    /// occur together in one instance are disambiguated as `Name#2`, `Name#3`
    /// in declaration order; clones of an operator living in mutually
    /// exclusive choice alternatives keep their shared name.
    pub fn new(steps: Vec<Step>) -> Result<Self, SpaceError> {
        if steps.is_empty() {
            return Err(SpaceError::InvalidPipeline("pipeline needs at least one step".into()));
        }
        let mut p = PlannedPipeline { steps };
        p.validate()?;
        p.disambiguate();
        Ok(p)
    }

    fn single(op: OperatorSpec) -> PlannedPipeline {
        // Single-operator sub-pipelines skip full validation; the enclosing
        // pipeline validates alternatives recursively.
        PlannedPipeline { steps: vec![Step::Operator(op)] }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub(crate) fn from_steps_unchecked(steps: Vec<Step>) -> PlannedPipeline {
        PlannedPipeline { steps }
    }

    fn validate(&self) -> Result<(), SpaceError> {
        fn walk(steps: &[Step]) -> Result<(), SpaceError> {
            for step in steps {
                match step {
                    Step::Operator(spec) => spec.validate()?,
                    Step::Choice(alts) => {
                        if alts.len() < 2 {
                            return Err(SpaceError::InvalidPipeline(
                                "a choice needs at least two alternatives".into(),
                            ));
                        }
                        for (i, alt) in alts.iter().enumerate() {
                            if alt.steps.is_empty() {
                                return Err(SpaceError::InvalidPipeline(format!(
                                    "choice alternative {i} is empty"
                                )));
                            }
                            if alts[..i].contains(alt) {
                                return Err(SpaceError::InvalidPipeline(
                                    "choice alternatives must be distinct".into(),
                                ));
                            }
                            // Instances identify the chosen alternative by the
                            // presence of its bindings, so an alternative must
                            // hold at least one binding-producing operator.
                            if !alt.operators().iter().any(|o| o.is_identifiable()) {
                                return Err(SpaceError::InvalidPipeline(format!(
                                    "choice alternative {i} has no hyperparameters or fixed \
                                     values to identify it in instance bindings"
                                )));
                            }
                            walk(&alt.steps)?;
                        }
                    }
                }
            }
            Ok(())
        }
        walk(&self.steps)
    }

    /// Renames duplicate operator names so that every name is unique within
    /// any single choice resolution. Occurrences in different alternatives of
    /// the same choice can never be bound together, so they may share a name.
    fn disambiguate(&mut self) {
        // trail: the (choice-id, alternative-index) decisions to reach an occurrence
        type Trail = Vec<(usize, usize)>;
        fn co_reachable(a: &Trail, b: &Trail) -> bool {
            !a.iter().any(|(cid, alt)| b.iter().any(|(cid2, alt2)| cid == cid2 && alt != alt2))
        }
        fn collect<'p>(
            steps: &'p mut [Step],
            trail: &Trail,
            next_choice: &mut usize,
            out: &mut Vec<(Trail, &'p mut OperatorSpec)>,
        ) {
            for step in steps {
                match step {
                    Step::Operator(spec) => out.push((trail.clone(), spec)),
                    Step::Choice(alts) => {
                        let cid = *next_choice;
                        *next_choice += 1;
                        for (i, alt) in alts.iter_mut().enumerate() {
                            let mut t = trail.clone();
                            t.push((cid, i));
                            collect(&mut alt.steps, &t, next_choice, out);
                        }
                    }
                }
            }
        }
        // A prior disambiguation pass may already have suffixed names (e.g.
        // when alternatives were built as standalone pipelines); renaming
        // starts from the stem so numbering stays canonical and minimal.
        fn stem_of(name: &str) -> &str {
            match name.split_once('#') {
                Some((stem, suffix))
                    if !stem.is_empty()
                        && suffix.parse::<u64>().map(|k| k >= 2).unwrap_or(false) =>
                {
                    stem
                }
                _ => name,
            }
        }

        let mut occurrences = Vec::new();
        let mut counter = 0;
        collect(&mut self.steps, &Vec::new(), &mut counter, &mut occurrences);

        let mut assigned: Vec<(Trail, String)> = Vec::new();
        for (trail, spec) in occurrences {
            let base = stem_of(&spec.name).to_string();
            let mut k = 1usize;
            loop {
                let candidate = if k == 1 { base.clone() } else { format!("{base}#{k}") };
                let clash = assigned
                    .iter()
                    .any(|(t, n)| *n == candidate && co_reachable(t, &trail));
                if !clash {
                    spec.name = candidate.clone();
                    assigned.push((trail, candidate));
                    break;
                }
                k += 1;
            }
        }
    }

    /// All operator specs in declaration (pre-order) order.
    pub fn operators(&self) -> Vec<&OperatorSpec> {
        fn walk<'p>(steps: &'p [Step], out: &mut Vec<&'p OperatorSpec>) {
            for step in steps {
                match step {
                    Step::Operator(spec) => out.push(spec),
                    Step::Choice(alts) => alts.iter().for_each(|a| walk(&a.steps, out)),
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.steps, &mut out);
        out
    }

    pub fn find_operator(&self, name: &str) -> Option<&OperatorSpec> {
        self.operators().into_iter().find(|o| o.name == name)
    }

    /// True when `name` occurs inside some choice alternative.
    pub fn is_choice_member(&self, name: &str) -> bool {
        fn walk(steps: &[Step], name: &str, inside: bool) -> bool {
            steps.iter().any(|step| match step {
                Step::Operator(spec) => inside && spec.name == name,
                Step::Choice(alts) => alts.iter().any(|a| walk(&a.steps, name, true)),
            })
        }
        walk(&self.steps, name, false)
    }

    /// Every full choice resolution, as the list of operator specs reachable
    /// under it, in step order.
    pub fn resolutions(&self) -> Vec<Vec<&OperatorSpec>> {
        fn walk(steps: &[Step]) -> Vec<Vec<&OperatorSpec>> {
            let mut acc: Vec<Vec<&OperatorSpec>> = vec![Vec::new()];
            for step in steps {
                match step {
                    Step::Operator(spec) => acc.iter_mut().for_each(|r| r.push(spec)),
                    Step::Choice(alts) => {
                        let mut next = Vec::new();
                        for prefix in &acc {
                            for alt in alts {
                                for suffix in walk(&alt.steps) {
                                    let mut r = prefix.clone();
                                    r.extend(suffix);
                                    next.push(r);
                                }
                            }
                        }
                        acc = next;
                    }
                }
            }
            acc
        }
        walk(&self.steps)
    }

    /// Deletes the choice alternative containing `op_name`. A choice reduced
    /// to a single alternative collapses: its steps splice into the parent
    /// sequence.
    pub fn remove_choice_alternative(&self, op_name: &str) -> Result<PlannedPipeline, SpaceError> {
        if self.find_operator(op_name).is_none() {
            return Err(SpaceError::UnknownOperator(op_name.to_string()));
        }
        if !self.is_choice_member(op_name) {
            return Err(SpaceError::NotInChoice(op_name.to_string()));
        }
        fn walk(steps: &[Step], op_name: &str) -> Result<Vec<Step>, SpaceError> {
            let mut out = Vec::new();
            for step in steps {
                match step {
                    Step::Operator(spec) => out.push(Step::Operator(spec.clone())),
                    Step::Choice(alts) => {
                        // Remove at the innermost choice that offers the
                        // operator: an alternative where it sits inside a
                        // deeper choice is rebuilt, not deleted.
                        let removable = alts.iter().any(|a| {
                            a.find_operator(op_name).is_some() && !a.is_choice_member(op_name)
                        });
                        if !removable {
                            let rebuilt: Result<Vec<_>, _> = alts
                                .iter()
                                .map(|a| walk(&a.steps, op_name).map(PlannedPipeline::from_steps_unchecked))
                                .collect();
                            out.push(Step::Choice(rebuilt?));
                            continue;
                        }
                        let kept: Vec<PlannedPipeline> = alts
                            .iter()
                            .filter(|a| a.find_operator(op_name).is_none())
                            .cloned()
                            .collect();
                        match kept.len() {
                            0 => return Err(SpaceError::WouldEmptyChoice(op_name.to_string())),
                            1 => out.extend(kept.into_iter().next().unwrap().steps),
                            _ => out.push(Step::Choice(kept)),
                        }
                    }
                }
            }
            Ok(out)
        }
        let steps = walk(&self.steps, op_name)?;
        PlannedPipeline::new(steps)
    }

    /// Keeps only the choice alternatives containing `op_name`. Returns the
    /// rewritten pipeline and whether anything changed; a mandatory operator
    /// is a no-op.
    pub fn restrict_choice_to(&self, op_name: &str) -> Result<(PlannedPipeline, bool), SpaceError> {
        if self.find_operator(op_name).is_none() {
            return Err(SpaceError::UnknownOperator(op_name.to_string()));
        }
        fn walk(steps: &[Step], op_name: &str, changed: &mut bool) -> Vec<Step> {
            let mut out = Vec::new();
            for step in steps {
                match step {
                    Step::Operator(spec) => out.push(Step::Operator(spec.clone())),
                    Step::Choice(alts) => {
                        let holders: Vec<&PlannedPipeline> =
                            alts.iter().filter(|a| a.find_operator(op_name).is_some()).collect();
                        if holders.is_empty() || holders.len() == alts.len() {
                            let rebuilt: Vec<PlannedPipeline> = alts
                                .iter()
                                .map(|a| {
                                    PlannedPipeline::from_steps_unchecked(walk(&a.steps, op_name, changed))
                                })
                                .collect();
                            out.push(Step::Choice(rebuilt));
                        } else {
                            *changed = true;
                            let kept: Vec<PlannedPipeline> = holders
                                .into_iter()
                                .map(|a| {
                                    PlannedPipeline::from_steps_unchecked(walk(&a.steps, op_name, changed))
                                })
                                .collect();
                            if kept.len() == 1 {
                                out.extend(kept.into_iter().next().unwrap().steps);
                            } else {
                                out.push(Step::Choice(kept));
                            }
                        }
                    }
                }
            }
            out
        }
        let mut changed = false;
        let steps = walk(&self.steps, op_name, &mut changed);
        Ok((PlannedPipeline::new(steps)?, changed))
    }

    /// Canonical file form.
    pub fn to_json(&self) -> Value {
        fn step_json(step: &Step) -> Value {
            match step {
                Step::Operator(spec) => json!({ "op": spec.to_json() }),
                Step::Choice(alts) => {
                    let alt_values: Vec<Value> = alts
                        .iter()
                        .map(|a| {
                            if a.steps.len() == 1 {
                                step_json(&a.steps[0])
                            } else {
                                json!({ "steps": a.steps.iter().map(step_json).collect::<Vec<_>>() })
                            }
                        })
                        .collect();
                    json!({ "choice": alt_values })
                }
            }
        }
        json!({ "steps": self.steps.iter().map(step_json).collect::<Vec<_>>() })
    }

    pub fn from_json(v: &Value) -> Result<Self, SpaceError> {
        fn parse_step(v: &Value, path: &str) -> Result<Step, SpaceError> {
            let obj = v
                .as_object()
                .ok_or_else(|| SpaceError::Parse(format!("{path}: expected a step object")))?;
            if let Some(opv) = obj.get("op") {
                return Ok(Step::Operator(OperatorSpec::from_json(opv, &format!("{path}.op"))?));
            }
            if let Some(alts) = obj.get("choice") {
                let alts = alts
                    .as_array()
                    .ok_or_else(|| SpaceError::Parse(format!("{path}.choice: expected an array")))?;
                let parsed: Result<Vec<PlannedPipeline>, SpaceError> = alts
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        let apath = format!("{path}.choice[{i}]");
                        if a.get("steps").is_some() {
                            parse_pipeline(a, &apath)
                        } else {
                            Ok(PlannedPipeline::from_steps_unchecked(vec![parse_step(a, &apath)?]))
                        }
                    })
                    .collect();
                return Ok(Step::Choice(parsed?));
            }
            Err(SpaceError::Parse(format!("{path}: step must have \"op\" or \"choice\"")))
        }
        fn parse_pipeline(v: &Value, path: &str) -> Result<PlannedPipeline, SpaceError> {
            let steps = v
                .get("steps")
                .and_then(|s| s.as_array())
                .ok_or_else(|| SpaceError::Parse(format!("{path}: expected {{\"steps\": [...]}}")))?;
            let parsed: Result<Vec<Step>, SpaceError> = steps
                .iter()
                .enumerate()
                .map(|(i, s)| parse_step(s, &format!("{path}.steps[{i}]")))
                .collect();
            Ok(PlannedPipeline::from_steps_unchecked(parsed?))
        }
        let p = parse_pipeline(v, "$")?;
        PlannedPipeline::new(p.steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::literal::Literal;

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

    fn encoder_choice_pipeline() -> PlannedPipeline {
        PlannedPipeline::new(vec![
            Step::choice_of_ops(vec![
                OperatorSpec::new("OneHotEncoder").with_fixed("handle_unknown", "ignore"),
                OperatorSpec::new("OrdinalEncoder").with_fixed("handle_unknown", "ignore"),
            ]),
            Step::op(OperatorSpec::new("LogisticRegression")),
        ])
        .unwrap()
    }

    #[test]
    fn remove_choice_alternative_collapses_to_operator() {
        let p = encoder_choice_pipeline();
        let q = p.remove_choice_alternative("OneHotEncoder").unwrap();
        match &q.steps()[0] {
            Step::Operator(spec) => assert_eq!(spec.name, "OrdinalEncoder"),
            s => panic!("expected a bare operator, found {s:?}"),
        }
    }

    #[test]
    fn remove_mandatory_step_is_not_in_choice() {
        let p = imputer_pipeline();
        assert_eq!(
            p.remove_choice_alternative("LogisticRegression"),
            Err(SpaceError::NotInChoice("LogisticRegression".into()))
        );
        assert!(matches!(
            p.remove_choice_alternative("Nope"),
            Err(SpaceError::UnknownOperator(_))
        ));
    }

    #[test]
    fn three_way_choice_keeps_order() {
        let p = PlannedPipeline::new(vec![Step::choice_of_ops(vec![
            OperatorSpec::new("A").with_fixed("id", 1),
            OperatorSpec::new("B").with_fixed("id", 2),
            OperatorSpec::new("C").with_fixed("id", 3),
        ])])
        .unwrap();
        let q = p.remove_choice_alternative("B").unwrap();
        match &q.steps()[0] {
            Step::Choice(alts) => {
                let names: Vec<&str> =
                    alts.iter().map(|a| a.operators()[0].name.as_str()).collect();
                assert_eq!(names, vec!["A", "C"]);
            }
            s => panic!("expected a choice, found {s:?}"),
        }
    }

    #[test]
    fn restrict_choice_keeps_holder() {
        let p = encoder_choice_pipeline();
        let (q, changed) = p.restrict_choice_to("OrdinalEncoder").unwrap();
        assert!(changed);
        match &q.steps()[0] {
            Step::Operator(spec) => assert_eq!(spec.name, "OrdinalEncoder"),
            s => panic!("expected collapse, found {s:?}"),
        }
        let (r, changed) = p.restrict_choice_to("LogisticRegression").unwrap();
        assert!(!changed);
        assert_eq!(r, p);
    }

    #[test]
    fn sequential_duplicates_get_suffixed() {
        let p = PlannedPipeline::new(vec![
            Step::op(OperatorSpec::new("PCA").with_hyperparam(
                "n_components",
                HyperparamDomain::int_range(1, 10).unwrap(),
            )),
            Step::op(OperatorSpec::new("PCA").with_hyperparam(
                "n_components",
                HyperparamDomain::int_range(1, 10).unwrap(),
            )),
        ])
        .unwrap();
        let names: Vec<&str> = p.operators().iter().map(|o| o.name.as_str()).collect();
        assert_eq!(names, vec!["PCA", "PCA#2"]);
    }

    #[test]
    fn parallel_clones_share_a_name() {
        // The same operator in two mutually exclusive alternatives is never
        // bound twice in one instance, so the copies keep one name.
        let alt = |lo, hi| {
            PlannedPipeline::from_steps_unchecked(vec![Step::op(
                OperatorSpec::new("PCA")
                    .with_hyperparam("n_components", HyperparamDomain::int_range(lo, hi).unwrap()),
            )])
        };
        let p = PlannedPipeline::new(vec![Step::Choice(vec![alt(1, 5), alt(6, 10)])]).unwrap();
        let names: Vec<&str> = p.operators().iter().map(|o| o.name.as_str()).collect();
        assert_eq!(names, vec!["PCA", "PCA"]);
        assert_eq!(p.resolutions().len(), 2);
    }

    #[test]
    fn unidentifiable_choice_member_is_rejected() {
        let err = PlannedPipeline::new(vec![Step::choice_of_ops(vec![
            OperatorSpec::new("A"),
            OperatorSpec::new("B").with_fixed("id", 1),
        ])])
        .unwrap_err();
        assert!(matches!(err, SpaceError::InvalidPipeline(_)));
    }

    #[test]
    fn removal_reaches_nested_choices() {
        let inner = Step::choice_of_ops(vec![
            OperatorSpec::new("A").with_fixed("id", 1),
            OperatorSpec::new("B").with_fixed("id", 2),
        ]);
        let p = PlannedPipeline::new(vec![Step::Choice(vec![
            PlannedPipeline::from_steps_unchecked(vec![inner]),
            PlannedPipeline::from_steps_unchecked(vec![Step::op(
                OperatorSpec::new("C").with_fixed("id", 3),
            )]),
        ])])
        .unwrap();
        let q = p.remove_choice_alternative("B").unwrap();
        assert!(q.find_operator("B").is_none());
        assert!(q.find_operator("A").is_some());
        assert!(q.find_operator("C").is_some());
    }

    #[test]
    fn removing_an_alternative_shrinks_the_instance_set() {
        let p = PlannedPipeline::new(vec![
            Step::choice_of_ops(vec![
                OperatorSpec::new("OneHotEncoder").with_fixed("handle_unknown", "ignore"),
                OperatorSpec::new("OrdinalEncoder").with_fixed("handle_unknown", "ignore"),
                OperatorSpec::new("TargetEncoder").with_fixed("handle_unknown", "ignore"),
            ]),
            Step::op(OperatorSpec::new("KNeighborsClassifier").with_hyperparam(
                "n_neighbors",
                HyperparamDomain::int_range(1, 9).unwrap(),
            )),
        ])
        .unwrap();
        let q = p.remove_choice_alternative("TargetEncoder").unwrap();
        for inst in crate::harness::sample(&q, 50, 11) {
            assert!(crate::space::contains(&q, &inst));
            assert!(crate::space::contains(&p, &inst), "shrunk space leaked {:?}", inst.id);
        }
    }

    #[test]
    fn json_round_trip() {
        for p in [imputer_pipeline(), encoder_choice_pipeline()] {
            let j = p.to_json();
            let back = PlannedPipeline::from_json(&j).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn json_shape_matches_canonical_form() {
        let j = imputer_pipeline().to_json();
        let strategy = &j["steps"][0]["op"]["hyperparams"]["strategy"];
        assert_eq!(strategy["cat"][2], "most_frequent");
        assert_eq!(j["steps"][1]["op"]["fixed"]["handle_unknown"], "ignore");
    }
}
