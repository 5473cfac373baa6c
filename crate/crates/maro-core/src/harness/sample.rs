//! Seeded uniform sampling of pipeline instances from a planned pipeline.

use crate::harness::rng::SplitMix64;
use crate::literal::Literal;
use crate::space::{HyperparamDomain, PipelineInstance, PlannedPipeline, Step};

/// Largest f64 strictly less than `x` (finite positive-width inputs).
fn next_down(x: f64) -> f64 {
    let bits = x.to_bits();
    let prev = if x == 0.0 {
        0x8000_0000_0000_0001 // smallest negative subnormal
    } else if x.is_sign_positive() {
        bits - 1
    } else {
        bits + 1
    };
    f64::from_bits(prev)
}

/// Draws `n` instances from the pipeline's search space: one uniform pick per
/// choice, one uniform draw per hyperparameter domain, plus the fixed values.
/// Instances are generated stream-wise from a single generator state, so
/// `sample(p, 50, s)` begins with exactly `sample(p, 20, s)`.
pub fn sample(pipeline: &PlannedPipeline, n: usize, seed: u64) -> Vec<PipelineInstance> {
    let mut rng = SplitMix64::new(seed);
    (0..n).map(|i| sample_one(pipeline, &mut rng, &format!("p{i}"))).collect()
}

fn sample_one(pipeline: &PlannedPipeline, rng: &mut SplitMix64, id: &str) -> PipelineInstance {
    let mut inst = PipelineInstance::new(id, true);
    sample_steps(pipeline.steps(), rng, &mut inst);
    inst
}

fn sample_steps(steps: &[Step], rng: &mut SplitMix64, inst: &mut PipelineInstance) {
    for step in steps {
        match step {
            Step::Operator(spec) => {
                for (hp, v) in &spec.fixed {
                    inst.bind(spec.name.clone(), hp.clone(), v.clone());
                }
                for (hp, dom) in &spec.hyperparams {
                    inst.bind(spec.name.clone(), hp.clone(), sample_domain(dom, rng));
                }
            }
            Step::Choice(alts) => {
                let pick = rng.below(alts.len() as u64) as usize;
                sample_steps(alts[pick].steps(), rng, inst);
            }
        }
    }
}

fn sample_domain(dom: &HyperparamDomain, rng: &mut SplitMix64) -> Literal {
    match dom {
        HyperparamDomain::Categorical(vs) => vs[rng.below(vs.len() as u64) as usize].clone(),
        HyperparamDomain::IntRange(lo, hi) => Literal::Int(rng.int_in(*lo, *hi)),
        HyperparamDomain::FloatRange { lo, hi, open_hi } => {
            let mut v = rng.float_in(*lo, *hi);
            // float_in targets [lo, hi) but rounding can land on hi.
            if *open_hi && v >= *hi {
                v = next_down(*hi).max(*lo);
            }
            Literal::Float(v)
        }
        HyperparamDomain::Constant(c) => c.clone(),
        // Unconstrained domains have no distribution of their own; a small
        // integer range stands in, and membership accepts anything anyway.
        HyperparamDomain::Anything => Literal::Int(rng.int_in(0, 100)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{contains, OperatorSpec};

    fn choice_pipeline() -> PlannedPipeline {
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
            Step::choice_of_ops(vec![
                OperatorSpec::new("OneHotEncoder").with_fixed("handle_unknown", "ignore"),
                OperatorSpec::new("OrdinalEncoder").with_fixed("handle_unknown", "ignore"),
            ]),
            Step::op(OperatorSpec::new("KNeighborsClassifier").with_hyperparam(
                "n_neighbors",
                HyperparamDomain::int_range(1, 40).unwrap(),
            )),
        ])
        .unwrap()
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = choice_pipeline();
        assert_eq!(sample(&p, 20, 42), sample(&p, 20, 42));
    }

    #[test]
    fn samples_satisfy_containment() {
        let p = choice_pipeline();
        for seed in 0..20 {
            for inst in sample(&p, 10, seed) {
                assert!(contains(&p, &inst), "seed {seed}: {inst:?}");
            }
        }
    }

    #[test]
    fn longer_runs_extend_shorter_ones() {
        let p = choice_pipeline();
        let short = sample(&p, 20, 7);
        let long = sample(&p, 50, 7);
        assert_eq!(&long[..20], &short[..]);
    }

    #[test]
    fn open_upper_float_bound_is_respected() {
        let p = PlannedPipeline::new(vec![Step::op(OperatorSpec::new("Op").with_hyperparam(
            "x",
            HyperparamDomain::float_range(0.0, 0.001, true).unwrap(),
        ))])
        .unwrap();
        for inst in sample(&p, 200, 5) {
            let v = inst.get("Op", "x").unwrap().as_number().unwrap();
            assert!(v < 0.001);
        }
    }
}
