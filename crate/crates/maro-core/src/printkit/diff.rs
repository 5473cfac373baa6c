//! Line diff between two pretty-printed pipelines, rendered as a fenced
//! markdown diff block with unified three-line context.

use crate::printkit::pretty_print;
use crate::space::PlannedPipeline;

#[derive(Debug, Clone, Copy, PartialEq)]
enum DiffOp {
    Equal(usize, usize),
    Delete(usize),
    Insert(usize),
}

/// Longest-common-subsequence line diff.
fn diff_ops(a: &[&str], b: &[&str]) -> Vec<DiffOp> {
    let n = a.len();
    let m = b.len();
    let mut dp = vec![vec![0u32; m + 1]; n + 1];
    for i in 1..=n {
        for j in 1..=m {
            dp[i][j] = if a[i - 1] == b[j - 1] {
                dp[i - 1][j - 1] + 1
            } else {
                dp[i - 1][j].max(dp[i][j - 1])
            };
        }
    }
    let mut ops = Vec::new();
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 && a[i - 1] == b[j - 1] {
            ops.push(DiffOp::Equal(i - 1, j - 1));
            i -= 1;
            j -= 1;
        } else if j > 0 && (i == 0 || dp[i][j - 1] >= dp[i - 1][j]) {
            ops.push(DiffOp::Insert(j - 1));
            j -= 1;
        } else {
            ops.push(DiffOp::Delete(i - 1));
            i -= 1;
        }
    }
    ops.reverse();
    ops
}

const CONTEXT: usize = 3;

/// Unified-diff hunks (no file header lines). Empty when the inputs match.
fn unified(a: &[&str], b: &[&str]) -> String {
    let ops = diff_ops(a, b);
    if ops.iter().all(|op| matches!(op, DiffOp::Equal(..))) {
        return String::new();
    }

    // Indices of changed ops, grouped into hunks when within 2*CONTEXT.
    let changed: Vec<usize> = ops
        .iter()
        .enumerate()
        .filter(|(_, op)| !matches!(op, DiffOp::Equal(..)))
        .map(|(i, _)| i)
        .collect();
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for &c in &changed {
        match groups.last_mut() {
            Some((_, end)) if c <= *end + 2 * CONTEXT => *end = c,
            _ => groups.push((c, c)),
        }
    }

    let mut out = String::new();
    for (start, end) in groups {
        let lo = start.saturating_sub(CONTEXT);
        let hi = (end + CONTEXT + 1).min(ops.len());
        let hunk = &ops[lo..hi];
        let a_start = hunk
            .iter()
            .find_map(|op| match op {
                DiffOp::Equal(i, _) | DiffOp::Delete(i) => Some(i + 1),
                DiffOp::Insert(_) => None,
            })
            .unwrap_or(if a.is_empty() { 0 } else { 1 });
        let b_start = hunk
            .iter()
            .find_map(|op| match op {
                DiffOp::Equal(_, j) | DiffOp::Insert(j) => Some(j + 1),
                DiffOp::Delete(_) => None,
            })
            .unwrap_or(if b.is_empty() { 0 } else { 1 });
        let a_len = hunk.iter().filter(|op| !matches!(op, DiffOp::Insert(_))).count();
        let b_len = hunk.iter().filter(|op| !matches!(op, DiffOp::Delete(_))).count();
        out.push_str(&format!("@@ -{a_start},{a_len} +{b_start},{b_len} @@\n"));
        for op in hunk {
            match op {
                DiffOp::Equal(i, _) => {
                    out.push(' ');
                    out.push_str(a[*i]);
                }
                DiffOp::Delete(i) => {
                    out.push('-');
                    out.push_str(a[*i]);
                }
                DiffOp::Insert(j) => {
                    out.push('+');
                    out.push_str(b[*j]);
                }
            }
            out.push('\n');
        }
    }
    out
}

/// Pretty-prints both pipelines, diffs the text line-wise, and wraps the
/// result in a markdown ```diff fence. Identical pipelines produce a fence
/// with an empty body.
pub fn pipeline_diff(a: &PlannedPipeline, b: &PlannedPipeline) -> String {
    let a_text = pretty_print(a).text;
    let b_text = pretty_print(b).text;
    let a_lines: Vec<&str> = a_text.lines().collect();
    let b_lines: Vec<&str> = b_text.lines().collect();
    format!("```diff\n{}```\n", unified(&a_lines, &b_lines))
}

/// Number of `@@` hunk headers in a rendered diff.
pub fn hunk_count(diff: &str) -> usize {
    diff.lines().filter(|l| l.starts_with("@@")).count()
}
