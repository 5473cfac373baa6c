//! Constraint-based fault localization and automated repair for planned ML
//! pipeline search spaces.
//!
//! Given a planned pipeline (operators, operator choices, hyperparameter
//! domains) and a trace of evaluated pipeline instances labeled pass/fail,
//! this crate finds a root-cause constraint that exactly separates passing
//! from failing instances, rewrites the pipeline to exclude the generalized
//! failure region, and explains the fix in natural language and as a textual
//! diff.

pub mod constraint;
pub mod explainer;
pub mod harness;
pub mod literal;
pub mod localizer;
pub mod printkit;
pub mod remediator;
pub mod space;
pub mod trace;

pub use constraint::{AtomicConstraint, CmpOp, Constraint, ConstraintError, ParamOp};
pub use literal::Literal;
pub use space::{
    contains, HyperparamDomain, OperatorSpec, PipelineInstance, PlannedPipeline, SpaceError, Step,
};
