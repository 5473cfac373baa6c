//! Command-line interface for pipeline fault localization and remediation.
//!
//! Exit codes: 0 on success, 1 on I/O or validation errors, 2 on domain
//! errors (no explanation found, unsatisfiable constraint, emptied domain,
//! or a failed round-trip check).

use clap::{Parser, Subcommand};
use maro_core::constraint::Constraint;
use maro_core::explainer::explain;
use maro_core::harness::{
    builtin_scenarios, find_scenario, format_csv, format_markdown, run_scenario, run_suite,
};
use maro_core::localizer::{solve, EvaluationTrace, LocalizeError, LocalizerConfig};
use maro_core::printkit::{parse_dsl, pipeline_diff, pretty_print};
use maro_core::remediator::{
    auto_remediate, remediate, AutoRemediateError, RemediateError, Remediation, DEFAULT_SPLITS,
};
use maro_core::trace::read_trace_jsonl;
use maro_core::PlannedPipeline;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "maro",
    version,
    about = "Localize, remediate, and explain failures in planned ML pipeline search spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Find a root-cause constraint that separates passing from failing runs
    Localize {
        /// Planned pipeline JSON file
        #[arg(long)]
        pipeline: PathBuf,
        /// Evaluation trace (JSONL, one instance per line)
        #[arg(long)]
        evals: PathBuf,
        /// Maximum if-then-else stacking depth
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
        /// Write the constraint JSON here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rewrite the pipeline to exclude the failure region
    Remediate {
        /// Planned pipeline JSON file
        #[arg(long)]
        pipeline: PathBuf,
        /// Root-cause constraint JSON file
        #[arg(long, conflicts_with = "evals")]
        constraint: Option<PathBuf>,
        /// Evaluation trace (JSONL); localizes internally
        #[arg(long)]
        evals: Option<PathBuf>,
        /// Number of ranges for two-hyperparameter comparisons
        /// (falls back to MARO_SPLITS, then 5)
        #[arg(long)]
        splits: Option<usize>,
        /// Write the remediated pipeline JSON here
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the natural-language explanation
        #[arg(long)]
        explain: bool,
        /// Print the markdown diff against the original
        #[arg(long)]
        diff: bool,
    },
    /// Pretty-print a pipeline in the textual form
    Print {
        #[arg(long)]
        pipeline: PathBuf,
    },
    /// Diff two pipeline files as markdown
    Diff { a: PathBuf, b: PathBuf },
    /// Check the print → parse → print fixpoint for a pipeline
    Roundtrip {
        #[arg(long)]
        pipeline: PathBuf,
    },
    /// Run built-in failure scenarios through the full loop
    Simulate {
        /// Scenario name (see the README for the registry)
        #[arg(long, required_unless_present = "suite")]
        scenario: Option<String>,
        /// Sampling seed
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Evaluations per sampling round
        #[arg(long, default_value_t = 20)]
        evals: usize,
        /// Run every scenario against every seed in --seeds
        #[arg(long)]
        suite: bool,
        /// Seeds for --suite, comma separated
        #[arg(long, default_value = "1,2,3,4,5")]
        seeds: String,
        /// Output format: md or csv
        #[arg(long, default_value = "md")]
        format: String,
    },
}

/// Errors carrying their process exit code.
enum CliError {
    /// I/O, file format, or input validation trouble: exit 1.
    Usage(String),
    /// The inputs are well-formed but the domain logic says no: exit 2.
    Domain(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn load_pipeline(path: &Path) -> Result<PlannedPipeline, CliError> {
    let text = read_file(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    PlannedPipeline::from_json(&value)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_trace(pipeline: &PlannedPipeline, path: &Path) -> Result<EvaluationTrace, CliError> {
    let text = read_file(path)?;
    let instances =
        read_trace_jsonl(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    EvaluationTrace::new(pipeline.clone(), instances)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn localize_error(e: LocalizeError) -> CliError {
    match e {
        LocalizeError::InvalidTrace(_) => CliError::Usage(e.to_string()),
        LocalizeError::AllFailed | LocalizeError::NoExplanation { .. } => {
            CliError::Domain(e.to_string())
        }
    }
}

fn remediate_error(e: RemediateError) -> CliError {
    match e {
        RemediateError::UnknownTarget(_) | RemediateError::Space(_) => CliError::Usage(e.to_string()),
        other => CliError::Domain(other.to_string()),
    }
}

/// Split count: the flag wins over the MARO_SPLITS environment variable.
fn effective_splits(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var("MARO_SPLITS") {
        Ok(s) => s.trim().parse::<usize>().map_err(|_| {
            CliError::Usage(format!("MARO_SPLITS must be a positive integer, found {s:?}"))
        }),
        Err(_) => Ok(DEFAULT_SPLITS),
    }
}

fn pipeline_json_text(p: &PlannedPipeline) -> String {
    let mut s = serde_json::to_string_pretty(&p.to_json()).expect("pipeline JSON renders");
    s.push('\n');
    s
}

fn constraint_json_text(c: &Constraint) -> String {
    let mut s = c.to_json().to_string();
    s.push('\n');
    s
}

fn cmd_localize(
    pipeline: &Path,
    evals: &Path,
    max_depth: usize,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let p = load_pipeline(pipeline)?;
    let trace = load_trace(&p, evals)?;
    let cfg = LocalizerConfig::default().with_max_depth(max_depth);
    let constraint = solve(&trace, &cfg).map_err(localize_error)?;
    let text = constraint_json_text(&constraint);
    match output {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_remediate(
    pipeline: &Path,
    constraint: Option<&Path>,
    evals: Option<&Path>,
    splits: Option<usize>,
    output: Option<&Path>,
    want_explain: bool,
    want_diff: bool,
) -> Result<(), CliError> {
    let p = load_pipeline(pipeline)?;
    let n_splits = effective_splits(splits)?;
    let remediation: Remediation = match (constraint, evals) {
        (Some(path), None) => {
            let text = read_file(path)?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let c = Constraint::from_json(&value, "$")
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            remediate(&p, &c, n_splits).map_err(remediate_error)?
        }
        (None, Some(path)) => {
            let trace = load_trace(&p, path)?;
            let cfg = LocalizerConfig { n_splits_hint: n_splits, ..Default::default() };
            auto_remediate(&trace, &cfg).map_err(|e| match e {
                AutoRemediateError::Localize(e) => localize_error(e),
                AutoRemediateError::Remediate(e) => remediate_error(e),
            })?
        }
        _ => {
            return Err(CliError::Usage(
                "remediate needs exactly one of --constraint or --evals".into(),
            ))
        }
    };

    if let Some(path) = output {
        write_file(path, &pipeline_json_text(&remediation.remediated))?;
    }
    if want_explain {
        println!("{}", explain(&remediation.constraint).text);
    }
    if want_diff {
        print!("{}", pipeline_diff(&remediation.original, &remediation.remediated));
    }
    if output.is_none() && !want_explain && !want_diff {
        print!("{}", pipeline_json_text(&remediation.remediated));
    }
    Ok(())
}

fn cmd_print(pipeline: &Path) -> Result<(), CliError> {
    let p = load_pipeline(pipeline)?;
    print!("{}", pretty_print(&p).text);
    Ok(())
}

fn cmd_diff(a: &Path, b: &Path) -> Result<(), CliError> {
    let pa = load_pipeline(a)?;
    let pb = load_pipeline(b)?;
    print!("{}", pipeline_diff(&pa, &pb));
    Ok(())
}

fn cmd_roundtrip(pipeline: &Path) -> Result<(), CliError> {
    let p = load_pipeline(pipeline)?;
    let first = pretty_print(&p).text;
    let reparsed = parse_dsl(&first)
        .map_err(|e| CliError::Domain(format!("printed form fails to parse: {e}")))?;
    let second = pretty_print(&reparsed).text;
    if first == second {
        eprintln!("round-trip fixpoint holds ({} lines)", first.lines().count());
        Ok(())
    } else {
        Err(CliError::Domain(format!(
            "print+parse+print differs from print:\nfirst:\n{first}\nsecond:\n{second}"
        )))
    }
}

fn cmd_simulate(
    scenario: Option<&str>,
    seed: u64,
    evals: usize,
    suite: bool,
    seeds: &str,
    format: &str,
) -> Result<(), CliError> {
    let reports = if suite {
        let seeds: Vec<u64> = seeds
            .split(',')
            .map(|s| s.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Usage(format!("bad --seeds list {seeds:?}")))?;
        run_suite(&builtin_scenarios(), &seeds, evals)
    } else {
        let name = scenario.expect("clap enforces --scenario without --suite");
        let sc = find_scenario(name).ok_or_else(|| {
            let known: Vec<&str> = builtin_scenarios().iter().map(|s| s.name).collect();
            CliError::Usage(format!("unknown scenario {name:?}; known: {}", known.join(", ")))
        })?;
        vec![run_scenario(&sc, evals, seed)]
    };
    match format {
        "md" => print!("{}", format_markdown(&reports)),
        "csv" => print!("{}", format_csv(&reports)),
        other => {
            return Err(CliError::Usage(format!("unknown format {other:?} (expected md or csv)")))
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Commands::Localize { pipeline, evals, max_depth, output } => {
            cmd_localize(&pipeline, &evals, max_depth, output.as_deref())
        }
        Commands::Remediate { pipeline, constraint, evals, splits, output, explain, diff } => {
            cmd_remediate(
                &pipeline,
                constraint.as_deref(),
                evals.as_deref(),
                splits,
                output.as_deref(),
                explain,
                diff,
            )
        }
        Commands::Print { pipeline } => cmd_print(&pipeline),
        Commands::Diff { a, b } => cmd_diff(&a, &b),
        Commands::Roundtrip { pipeline } => cmd_roundtrip(&pipeline),
        Commands::Simulate { scenario, seed, evals, suite, seeds, format } => {
            cmd_simulate(scenario.as_deref(), seed, evals, suite, &seeds, &format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
