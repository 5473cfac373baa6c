//! JSONL evaluation traces: one object per line, e.g.
//!
//! ```text
//! {"id":"p0","status":"fail","params":{"SimpleImputer.strategy":"median"},"loss":0.41}
//! ```
//!
//! `status` is `"ok"` or `"fail"`; parameter keys are
//! `Operator.hyperparameter` (with `#n` name disambiguation when an operator
//! repeats); values are JSON scalars; `loss` is optional and carried through.

use crate::literal::Literal;
use crate::space::PipelineInstance;
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TraceError {
    #[error("trace line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn parse_err(line: usize, msg: impl Into<String>) -> TraceError {
    TraceError::Parse { line, msg: msg.into() }
}

/// Parses JSONL text into instances, preserving line order. Blank lines are
/// skipped.
pub fn read_trace_jsonl(text: &str) -> Result<Vec<PipelineInstance>, TraceError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(raw).map_err(|e| parse_err(line_no, e.to_string()))?;
        let obj = v
            .as_object()
            .ok_or_else(|| parse_err(line_no, "expected a JSON object"))?;
        let id = obj
            .get("id")
            .and_then(|x| x.as_str())
            .ok_or_else(|| parse_err(line_no, "missing string field \"id\""))?;
        let status = obj
            .get("status")
            .and_then(|x| x.as_str())
            .ok_or_else(|| parse_err(line_no, "missing string field \"status\""))?;
        let result = match status {
            "ok" => true,
            "fail" => false,
            other => return Err(parse_err(line_no, format!("status must be \"ok\" or \"fail\", found {other:?}"))),
        };
        let mut inst = PipelineInstance::new(id, result);
        if let Some(loss) = obj.get("loss") {
            if !loss.is_null() {
                inst.loss = Some(
                    loss.as_f64()
                        .ok_or_else(|| parse_err(line_no, "\"loss\" must be a number"))?,
                );
            }
        }
        let params = obj
            .get("params")
            .and_then(|x| x.as_object())
            .ok_or_else(|| parse_err(line_no, "missing object field \"params\""))?;
        for (key, value) in params {
            let (op, hp) = key.split_once('.').ok_or_else(|| {
                parse_err(line_no, format!("param key {key:?} is not of the form Operator.hyperparameter"))
            })?;
            if op.is_empty() || hp.is_empty() {
                return Err(parse_err(line_no, format!("param key {key:?} has an empty component")));
            }
            let lit: Literal = serde_json::from_value(value.clone())
                .map_err(|_| parse_err(line_no, format!("param {key:?} must be a JSON scalar")))?;
            inst.bind(op, hp, lit);
        }
        out.push(inst);
    }
    Ok(out)
}

/// Writes instances as JSONL, parameters in lexicographic key order.
pub fn write_trace_jsonl(instances: &[PipelineInstance]) -> String {
    let mut out = String::new();
    for inst in instances {
        let mut params = Map::new();
        for ((op, hp), v) in inst.bindings() {
            params.insert(format!("{op}.{hp}"), serde_json::to_value(v).unwrap());
        }
        let mut obj = Map::new();
        obj.insert("id".into(), json!(inst.id));
        obj.insert("status".into(), json!(if inst.result { "ok" } else { "fail" }));
        obj.insert("params".into(), Value::Object(params));
        if let Some(loss) = inst.loss {
            obj.insert("loss".into(), json!(loss));
        }
        out.push_str(&serde_json::to_string(&Value::Object(obj)).unwrap());
        out.push('\n');
    }
    out
}
