//! Canonical pretty-printer for planned pipelines.
//!
//! Every operator gets one assignment line with a snake_case variable name;
//! name collisions are suffixed `_0`, `_1` in step order so that repeated
//! prints of the same pipeline never differ spuriously. Fixed values print as
//! keyword arguments, overridden domains as `customize_schema(...)`
//! arguments, unconfigured operators as the bare name. Choices print as
//! `x = a | b`, multi-step alternatives as named branch chains, and the final
//! line is always `pipeline = ...`.

use crate::space::{OperatorSpec, PlannedPipeline, Step};

/// Pretty-printed pipeline text plus the variable name chosen for each
/// operator occurrence (in declaration order).
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineSource {
    /// Canonical text, LF line endings, exactly one trailing LF.
    pub text: String,
    /// `(variable, operator name)` pairs in declaration order.
    pub binding_names: Vec<(String, String)>,
}

enum Rhs {
    Operator(OperatorSpec),
    Choice(Vec<usize>),
    Chain(Vec<usize>),
}

struct Printer {
    lines: Vec<(String, Rhs)>,
}

impl Printer {
    fn emit_steps(&mut self, steps: &[Step]) -> Vec<usize> {
        let mut refs = Vec::new();
        for step in steps {
            refs.push(self.emit_step(step));
        }
        refs
    }

    fn emit_step(&mut self, step: &Step) -> usize {
        match step {
            Step::Operator(spec) => {
                let base = snake_case(spec.name.split('#').next().unwrap_or(&spec.name));
                self.lines.push((base, Rhs::Operator(spec.clone())));
                self.lines.len() - 1
            }
            Step::Choice(alts) => {
                let mut alt_refs = Vec::new();
                for alt in alts {
                    let refs = self.emit_steps(alt.steps());
                    if refs.len() == 1 {
                        alt_refs.push(refs[0]);
                    } else {
                        self.lines.push(("branch".to_string(), Rhs::Chain(refs)));
                        alt_refs.push(self.lines.len() - 1);
                    }
                }
                self.lines.push(("choice".to_string(), Rhs::Choice(alt_refs)));
                self.lines.len() - 1
            }
        }
    }
}

/// Renders a pipeline in the canonical textual form.
pub fn pretty_print(p: &PlannedPipeline) -> PipelineSource {
    let mut printer = Printer { lines: Vec::new() };
    let chain = printer.emit_steps(p.steps());

    // Variable naming: bases used once keep their name; repeated bases (and
    // anything clashing with the reserved final name) get _0, _1 suffixes in
    // assignment order.
    let mut counts: std::collections::HashMap<&str, usize> = std::collections::HashMap::new();
    for (base, _) in &printer.lines {
        *counts.entry(base.as_str()).or_insert(0) += 1;
    }
    let mut seen: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
    let mut names: Vec<String> = Vec::new();
    for (base, _) in &printer.lines {
        if counts[base.as_str()] > 1 || base == "pipeline" {
            let n = seen.entry(base.clone()).or_insert(0);
            names.push(format!("{base}_{n}"));
            *n += 1;
        } else {
            names.push(base.clone());
        }
    }

    let mut text = String::new();
    let mut binding_names = Vec::new();
    for (i, (_, rhs)) in printer.lines.iter().enumerate() {
        let line = match rhs {
            Rhs::Operator(spec) => {
                binding_names.push((names[i].clone(), spec.name.clone()));
                format!("{} = {}", names[i], operator_rhs(spec))
            }
            Rhs::Choice(refs) => {
                let parts: Vec<&str> = refs.iter().map(|r| names[*r].as_str()).collect();
                format!("{} = {}", names[i], parts.join(" | "))
            }
            Rhs::Chain(refs) => {
                let parts: Vec<&str> = refs.iter().map(|r| names[*r].as_str()).collect();
                format!("{} = {}", names[i], parts.join(" >> "))
            }
        };
        text.push_str(&line);
        text.push('\n');
    }
    let chain_parts: Vec<&str> = chain.iter().map(|r| names[*r].as_str()).collect();
    text.push_str(&format!("pipeline = {}\n", chain_parts.join(" >> ")));

    PipelineSource { text, binding_names }
}

fn operator_rhs(spec: &OperatorSpec) -> String {
    let ctor = spec.name.split('#').next().unwrap_or(&spec.name);
    let mut out = ctor.to_string();
    if !spec.fixed.is_empty() {
        let args: Vec<String> = spec.fixed.iter().map(|(hp, v)| format!("{hp}={v}")).collect();
        out.push_str(&format!("({})", args.join(", ")));
    }
    // customize_schema arguments follow hyperparameter declaration order.
    let customized: Vec<String> = spec
        .hyperparams
        .iter()
        .filter(|(hp, _)| spec.customized.contains(*hp))
        .map(|(hp, d)| format!("{hp}={d}"))
        .collect();
    if !customized.is_empty() {
        out.push_str(&format!(".customize_schema({})", customized.join(", ")));
    }
    out
}

/// `CamelCase` (with acronym runs) to `snake_case`.
pub fn snake_case(name: &str) -> String {
    let chars: Vec<char> = name.chars().collect();
    let mut out = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_uppercase() {
            let prev_lower = i > 0 && (chars[i - 1].is_lowercase() || chars[i - 1].is_numeric());
            let acronym_end =
                i > 0 && chars[i - 1].is_uppercase() && chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            if prev_lower || acronym_end {
                out.push('_');
            }
            out.extend(c.to_lowercase());
        } else {
            out.push(c);
        }
    }
    out
}
