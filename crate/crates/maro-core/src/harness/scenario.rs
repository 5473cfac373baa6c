//! Built-in failure scenarios: a planned pipeline paired with a
//! deterministic oracle predicate standing in for real training.
//!
//! Each oracle encodes a known failure cause as a pure function of the
//! instance's bindings. Hyperparameter domains not dictated by the failure
//! cause are invented here; comments mark them.

use crate::literal::Literal;
use crate::space::{HyperparamDomain, OperatorSpec, PipelineInstance, PlannedPipeline, Step};

/// A named pipeline plus its failure oracle (`true` = the run succeeds).
#[derive(Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub description: &'static str,
    pub pipeline: PlannedPipeline,
    pub oracle: fn(&PipelineInstance) -> bool,
}

impl std::fmt::Debug for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scenario").field("name", &self.name).finish()
    }
}

fn cat_str(values: &[&str]) -> HyperparamDomain {
    HyperparamDomain::categorical(values.iter().map(|v| Literal::str(*v)).collect()).unwrap()
}

fn cat_bool() -> HyperparamDomain {
    HyperparamDomain::categorical(vec![Literal::Bool(false), Literal::Bool(true)]).unwrap()
}

/// Imputing non-numeric columns: only the most-frequent strategy works on
/// categorical data.
fn imputer_categorical() -> Scenario {
    let pipeline = PlannedPipeline::new(vec![
        Step::op(OperatorSpec::new("SimpleImputer")
            .with_hyperparam("strategy", cat_str(&["mean", "median", "most_frequent"]))),
        Step::op(OperatorSpec::new("OneHotEncoder").with_fixed("handle_unknown", "ignore")),
        // Classifier domains invented; irrelevant to the failure cause.
        Step::op(
            OperatorSpec::new("LogisticRegression")
                .with_hyperparam("solver", cat_str(&["liblinear", "lbfgs"]))
                .with_hyperparam("max_iter", HyperparamDomain::int_range(50, 500).unwrap())
                .with_hyperparam("tol", HyperparamDomain::float_range(0.0001, 0.01, false).unwrap()),
        ),
    ])
    .unwrap();
    fn oracle(inst: &PipelineInstance) -> bool {
        inst.get_base("SimpleImputer", "strategy")
            .map(|v| v.same_value(&Literal::str("most_frequent")))
            .unwrap_or(false)
    }
    Scenario {
        name: "imputer-categorical",
        description: "mean/median imputation breaks on categorical columns; \
                      only the most_frequent strategy trains",
        pipeline,
        oracle,
    }
}

/// Nearest-neighbor classification on a tiny dataset: the neighbor count
/// cannot exceed the 16 rows of a cross-validation fold.
fn knn_small_data() -> Scenario {
    let pipeline = PlannedPipeline::new(vec![
        Step::op(OperatorSpec::new("MinMaxScaler")),
        // Range invented; the cap at 16 comes from the oracle.
        Step::op(
            OperatorSpec::new("KNeighborsClassifier")
                .with_hyperparam("n_neighbors", HyperparamDomain::int_range(1, 40).unwrap())
                .with_hyperparam("weights", cat_str(&["uniform", "distance"])),
        ),
    ])
    .unwrap();
    fn oracle(inst: &PipelineInstance) -> bool {
        inst.get_base("KNeighborsClassifier", "n_neighbors")
            .and_then(|v| v.as_number())
            .map(|n| n <= 16.0)
            .unwrap_or(false)
    }
    Scenario {
        name: "knn-small-data",
        description: "n_neighbors larger than the 16-row training fold fails",
        pipeline,
        oracle,
    }
}

/// Whitening combined with the arpack solver breaks; either alone is fine.
fn pca_whiten_arpack() -> Scenario {
    let pipeline = PlannedPipeline::new(vec![
        Step::op(
            OperatorSpec::new("PCA")
                .with_hyperparam("svd_solver", cat_str(&["auto", "full", "arpack"]))
                .with_hyperparam("whiten", cat_bool()),
        ),
        Step::op(OperatorSpec::new("LogisticRegression")),
    ])
    .unwrap();
    fn oracle(inst: &PipelineInstance) -> bool {
        let whiten = inst
            .get_base("PCA", "whiten")
            .map(|v| v.same_value(&Literal::Bool(true)))
            .unwrap_or(false);
        let arpack = inst
            .get_base("PCA", "svd_solver")
            .map(|v| v.same_value(&Literal::str("arpack")))
            .unwrap_or(false);
        !(whiten && arpack)
    }
    Scenario {
        name: "pca-whiten-arpack",
        description: "whiten=True together with svd_solver=\"arpack\" fails; \
                      either setting alone is fine",
        pipeline,
        oracle,
    }
}

/// Feature selection needs enough features: the selector's k cannot exceed
/// the number of components the reducer keeps.
fn pca_selectkbest() -> Scenario {
    let mut pca = OperatorSpec::new("PCA")
        .with_hyperparam("n_components", HyperparamDomain::int_range(1, 40).unwrap());
    pca.customized.insert("n_components".into());
    let mut skb = OperatorSpec::new("SelectKBest")
        .with_hyperparam("k", HyperparamDomain::int_range(5, 55).unwrap());
    skb.customized.insert("k".into());
    let pipeline = PlannedPipeline::new(vec![
        Step::op(pca),
        Step::op(skb),
        Step::op(OperatorSpec::new("LogisticRegression")),
    ])
    .unwrap();
    fn oracle(inst: &PipelineInstance) -> bool {
        let n = inst.get_base("PCA", "n_components").and_then(|v| v.as_number());
        let k = inst.get_base("SelectKBest", "k").and_then(|v| v.as_number());
        match (n, k) {
            (Some(n), Some(k)) => n <= k,
            _ => false,
        }
    }
    Scenario {
        name: "pca-selectkbest",
        description: "selecting k best features requires the upstream \
                      reducer to keep at least k components",
        pipeline,
        oracle,
    }
}

/// Centered scaling after a one-hot encoder breaks (sparse output); the
/// ordinal encoder tolerates it.
fn scaler_encoder() -> Scenario {
    let pipeline = PlannedPipeline::new(vec![
        Step::op(OperatorSpec::new("ProjectCategoricals")),
        Step::choice_of_ops(vec![
            OperatorSpec::new("OneHotEncoder").with_fixed("handle_unknown", "ignore"),
            OperatorSpec::new("OrdinalEncoder").with_fixed("handle_unknown", "ignore"),
        ]),
        Step::op(OperatorSpec::new("StandardScaler").with_hyperparam("with_mean", cat_bool())),
        Step::op(OperatorSpec::new("LogisticRegression")),
    ])
    .unwrap();
    fn oracle(inst: &PipelineInstance) -> bool {
        let with_mean = inst
            .get_base("StandardScaler", "with_mean")
            .map(|v| v.same_value(&Literal::Bool(true)))
            .unwrap_or(false);
        !(with_mean && inst.has_operator("OneHotEncoder"))
    }
    Scenario {
        name: "scaler-encoder",
        description: "with_mean=True only works when the ordinal encoder is \
                      chosen; one-hot output cannot be mean-centered",
        pipeline,
        oracle,
    }
}

/// The scenario registry, in fixed order.
pub fn builtin_scenarios() -> Vec<Scenario> {
    vec![
        imputer_categorical(),
        knn_small_data(),
        pca_whiten_arpack(),
        pca_selectkbest(),
        scaler_encoder(),
    ]
}

pub fn find_scenario(name: &str) -> Option<Scenario> {
    builtin_scenarios().into_iter().find(|s| s.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::sample::sample;
    use crate::space::contains;

    #[test]
    fn registry_has_five_scenarios() {
        let names: Vec<&str> = builtin_scenarios().iter().map(|s| s.name).collect();
        assert_eq!(
            names,
            vec![
                "imputer-categorical",
                "knn-small-data",
                "pca-whiten-arpack",
                "pca-selectkbest",
                "scaler-encoder"
            ]
        );
        assert!(find_scenario("knn-small-data").is_some());
        assert!(find_scenario("nope").is_none());
    }

    #[test]
    fn oracles_are_deterministic_and_samples_contained() {
        for sc in builtin_scenarios() {
            for inst in sample(&sc.pipeline, 50, 3) {
                assert!(contains(&sc.pipeline, &inst), "{}: {:?}", sc.name, inst.id);
                assert_eq!((sc.oracle)(&inst), (sc.oracle)(&inst));
            }
        }
    }
}
