//! Textual surface of pipelines: a canonical pretty-printer, a parser for
//! the same DSL (so print-parse-print is testable as a fixpoint), and a
//! line-based differ with markdown rendering.

mod diff;
mod parse;
mod print;

pub use diff::{hunk_count, pipeline_diff};
pub use parse::{parse_dsl, DslError};
pub use print::{pretty_print, snake_case, PipelineSource};
