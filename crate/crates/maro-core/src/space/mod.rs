//! Planned pipelines, hyperparameter domains, and pipeline instances.
//!
//! A planned pipeline is a search space: a dataflow chain of steps where each
//! step is an operator or a choice among sub-pipelines, and operators carry
//! hyperparameter domains that are left open for automated search.

mod domain;
mod instance;
mod pipeline;

pub use domain::HyperparamDomain;
pub use instance::{contains, PipelineInstance};
pub use pipeline::{OperatorSpec, PlannedPipeline, Step};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("restriction produced an empty domain")]
    EmptyDomain,
    #[error("operation requires a numeric range domain")]
    NotNumeric,
    #[error("operator {0} is a mandatory step, not a choice alternative")]
    NotInChoice(String),
    #[error("removing operator {0} would leave its choice empty")]
    WouldEmptyChoice(String),
    #[error("operator {0} does not occur in the pipeline")]
    UnknownOperator(String),
    #[error("restriction is not representable: {0}")]
    NotRepresentable(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid pipeline: {0}")]
    InvalidPipeline(String),
    #[error("parse error: {0}")]
    Parse(String),
}
