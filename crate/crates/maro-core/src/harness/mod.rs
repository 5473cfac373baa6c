//! Synthetic search loop: seeded sampling, built-in failure scenarios, and
//! the sample → localize → remediate → resample round trip.

mod report;
mod rng;
mod sample;
mod scenario;

pub use report::{
    format_csv, format_markdown, run_scenario, run_suite, summarize, RoundTripReport, Verdict,
};
pub use rng::SplitMix64;
pub use sample::sample;
pub use scenario::{builtin_scenarios, find_scenario, Scenario};
