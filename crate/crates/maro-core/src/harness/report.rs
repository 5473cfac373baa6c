//! The full round-trip driver: sample, label, localize, remediate, resample,
//! and measure whether the failure region is gone.

use crate::constraint::Constraint;
use crate::harness::sample::sample;
use crate::harness::scenario::Scenario;
use crate::localizer::{solve, EvaluationTrace, LocalizerConfig};
use crate::remediator::{remediate, DEFAULT_SPLITS};
use crate::space::contains;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Post-remediation samples draw from a stream tagged away from the
/// pre-remediation one, so the two never share state.
const POST_SAMPLE_TAG: u64 = 0x504f_5354; // "POST"

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// No failures after remediation and every observed success kept.
    Successful,
    /// No failures after remediation, but some observed successes were cut.
    Restrictive,
    /// Failures remain, or localization/remediation failed outright.
    Unsuccessful,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Successful => write!(f, "successful"),
            Verdict::Restrictive => write!(f, "restrictive"),
            Verdict::Unsuccessful => write!(f, "unsuccessful"),
        }
    }
}

/// Outcome of one scenario × seed round trip.
#[derive(Debug, Clone)]
pub struct RoundTripReport {
    pub scenario: String,
    pub seed: u64,
    pub n_evals: usize,
    pub pre_failures: usize,
    pub constraint: Option<Constraint>,
    pub post_failures: usize,
    pub verdict: Verdict,
    pub reason: Option<String>,
}

/// Runs the full loop on one scenario: draw `n_evals` labeled samples,
/// localize, remediate, draw `n_evals` fresh samples from the remediated
/// pipeline, and grade the outcome.
pub fn run_scenario(sc: &Scenario, n_evals: usize, seed: u64) -> RoundTripReport {
    let mut report = RoundTripReport {
        scenario: sc.name.to_string(),
        seed,
        n_evals,
        pre_failures: 0,
        constraint: None,
        post_failures: 0,
        verdict: Verdict::Unsuccessful,
        reason: None,
    };

    let mut instances = sample(&sc.pipeline, n_evals, seed);
    for inst in &mut instances {
        inst.result = (sc.oracle)(inst);
    }
    report.pre_failures = instances.iter().filter(|i| !i.result).count();

    let trace = match EvaluationTrace::new(sc.pipeline.clone(), instances.clone()) {
        Ok(t) => t,
        Err(e) => {
            report.reason = Some(e.to_string());
            return report;
        }
    };
    let constraint = match solve(&trace, &LocalizerConfig::default()) {
        Ok(c) => c,
        Err(e) => {
            report.reason = Some(e.to_string());
            return report;
        }
    };
    report.constraint = Some(constraint.clone());

    let remediation = match remediate(&sc.pipeline, &constraint, DEFAULT_SPLITS) {
        Ok(r) => r,
        Err(e) => {
            report.reason = Some(e.to_string());
            return report;
        }
    };

    let mut fresh = sample(&remediation.remediated, n_evals, seed ^ POST_SAMPLE_TAG);
    for inst in &mut fresh {
        inst.result = (sc.oracle)(inst);
    }
    report.post_failures = fresh.iter().filter(|i| !i.result).count();

    if report.post_failures > 0 {
        report.reason = Some(format!("{} fresh evaluations still fail", report.post_failures));
        return report;
    }
    let all_successes_kept = instances
        .iter()
        .filter(|i| i.result)
        .all(|i| contains(&remediation.remediated, i));
    report.verdict = if all_successes_kept {
        Verdict::Successful
    } else {
        Verdict::Restrictive
    };
    report
}

/// Runs every scenario × seed combination, in registry and seed order.
pub fn run_suite(scenarios: &[Scenario], seeds: &[u64], n_evals: usize) -> Vec<RoundTripReport> {
    let mut reports = Vec::with_capacity(scenarios.len() * seeds.len());
    for sc in scenarios {
        for &seed in seeds {
            reports.push(run_scenario(sc, n_evals, seed));
        }
    }
    reports
}

/// Verdict counts in (successful, restrictive, unsuccessful) order.
pub fn summarize(reports: &[RoundTripReport]) -> (usize, usize, usize) {
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    (count(Verdict::Successful), count(Verdict::Restrictive), count(Verdict::Unsuccessful))
}

fn constraint_cell(r: &RoundTripReport) -> String {
    r.constraint.as_ref().map(|c| c.to_string()).unwrap_or_else(|| "-".into())
}

/// Markdown rendering: one row per report, then the three-column summary.
pub fn format_markdown(reports: &[RoundTripReport]) -> String {
    let mut out = String::new();
    out.push_str("| scenario | seed | evals | preFailures | postFailures | verdict | constraint |\n");
    out.push_str("|---|---:|---:|---:|---:|---|---|\n");
    for r in reports {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            r.scenario,
            r.seed,
            r.n_evals,
            r.pre_failures,
            r.post_failures,
            r.verdict,
            constraint_cell(r),
        ));
    }
    let (s, re, u) = summarize(reports);
    out.push('\n');
    out.push_str("| localization | successful | restrictive | unsuccessful |\n");
    out.push_str("|---|---:|---:|---:|\n");
    out.push_str(&format!("| maro | {s} | {re} | {u} |\n"));
    out
}

/// CSV rendering with the same columns plus the failure reason.
pub fn format_csv(reports: &[RoundTripReport]) -> String {
    let mut out =
        String::from("scenario,seed,evals,preFailures,postFailures,verdict,constraint,reason\n");
    for r in reports {
        let quote = |s: &str| format!("\"{}\"", s.replace('"', "\"\""));
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.scenario,
            r.seed,
            r.n_evals,
            r.pre_failures,
            r.post_failures,
            r.verdict,
            quote(&constraint_cell(r)),
            quote(r.reason.as_deref().unwrap_or("")),
        ));
    }
    out
}
