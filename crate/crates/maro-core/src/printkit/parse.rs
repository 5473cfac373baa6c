//! Parser for the canonical pipeline DSL, the inverse of the pretty-printer.
//!
//! Grammar (line oriented):
//!
//! ```text
//! file     := stmt* pipelineStmt
//! stmt     := name '=' expr
//! pipelineStmt := 'pipeline' '=' chain
//! expr     := opExpr | choice | chain
//! opExpr   := OpName [ '(' kwargs ')' ] [ '.customize_schema(' kwdomains ')' ]
//! choice   := ref ('|' ref)+
//! chain    := ref ('>>' ref)+  (a single ref is allowed on the pipeline line)
//! domain   := cat(lit, ...) | int(lo, hi) | float(lo, hi [, open]) | const(lit) | any()
//! lit      := "string" | True | False | integer | float
//! ```
//!
//! Parsing recovers fixed values and customized domains; an operator's stock
//! searchable schema is not part of the textual form.

use crate::literal::Literal;
use crate::space::{HyperparamDomain, OperatorSpec, PlannedPipeline, SpaceError, Step};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DslError {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown domain literal '{name}' at line {line}, column {col}")]
    UnknownDomainLiteral { line: usize, col: usize, name: String },
    #[error("invalid pipeline: {0}")]
    Invalid(String),
}

impl From<SpaceError> for DslError {
    fn from(e: SpaceError) -> Self {
        DslError::Invalid(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Int(i64),
    Float(f64),
    Eq,
    Pipe,
    Chain,
    LParen,
    RParen,
    Comma,
    Dot,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize_line(text: &str, line_no: usize) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '=' => {
                out.push(Spanned { tok: Tok::Eq, line: line_no, col });
                i += 1;
            }
            '|' => {
                out.push(Spanned { tok: Tok::Pipe, line: line_no, col });
                i += 1;
            }
            '(' => {
                out.push(Spanned { tok: Tok::LParen, line: line_no, col });
                i += 1;
            }
            ')' => {
                out.push(Spanned { tok: Tok::RParen, line: line_no, col });
                i += 1;
            }
            ',' => {
                out.push(Spanned { tok: Tok::Comma, line: line_no, col });
                i += 1;
            }
            '.' => {
                out.push(Spanned { tok: Tok::Dot, line: line_no, col });
                i += 1;
            }
            '>' => {
                if chars.get(i + 1) == Some(&'>') {
                    out.push(Spanned { tok: Tok::Chain, line: line_no, col });
                    i += 2;
                } else {
                    return Err(DslError::Parse {
                        line: line_no,
                        col,
                        msg: "expected '>>'".into(),
                    });
                }
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => {
                            return Err(DslError::Parse {
                                line: line_no,
                                col,
                                msg: "unterminated string".into(),
                            })
                        }
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            match chars.get(i + 1) {
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                Some('n') => s.push('\n'),
                                other => {
                                    return Err(DslError::Parse {
                                        line: line_no,
                                        col: i + 2,
                                        msg: format!("unknown escape {other:?}"),
                                    })
                                }
                            }
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                out.push(Spanned { tok: Tok::Str(s), line: line_no, col });
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' => {
                let start = i;
                i += 1;
                while i < chars.len()
                    && (chars[i].is_ascii_digit()
                        || chars[i] == '.'
                        || chars[i] == 'e'
                        || chars[i] == 'E'
                        || ((chars[i] == '-' || chars[i] == '+')
                            && (chars[i - 1] == 'e' || chars[i - 1] == 'E')))
                {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let tok = if s.contains('.') || s.contains('e') || s.contains('E') {
                    Tok::Float(s.parse().map_err(|_| DslError::Parse {
                        line: line_no,
                        col,
                        msg: format!("bad number {s:?}"),
                    })?)
                } else {
                    Tok::Int(s.parse().map_err(|_| DslError::Parse {
                        line: line_no,
                        col,
                        msg: format!("bad number {s:?}"),
                    })?)
                };
                out.push(Spanned { tok, line: line_no, col });
            }
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Spanned { tok: Tok::Ident(s), line: line_no, col });
            }
            other => {
                return Err(DslError::Parse {
                    line: line_no,
                    col,
                    msg: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Binding {
    Op(OperatorSpec),
    Choice(Vec<String>),
    Chain(Vec<String>),
}

struct LineParser {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
}

impl LineParser {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DslError> {
        let col = self.toks.get(self.pos).map(|t| t.col).unwrap_or_else(|| {
            self.toks.last().map(|t| t.col + 1).unwrap_or(1)
        });
        Err(DslError::Parse { line: self.line, col, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<(), DslError> {
        match self.peek() {
            Some(t) if t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, DslError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn literal(&mut self) -> Result<Literal, DslError> {
        match self.next() {
            Some(Tok::Str(s)) => Ok(Literal::Str(s)),
            Some(Tok::Int(i)) => Ok(Literal::Int(i)),
            Some(Tok::Float(f)) => Ok(Literal::Float(f)),
            Some(Tok::Ident(w)) if w == "True" => Ok(Literal::Bool(true)),
            Some(Tok::Ident(w)) if w == "False" => Ok(Literal::Bool(false)),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.err("expected a literal (string, number, True, or False)")
            }
        }
    }

    fn domain(&mut self) -> Result<HyperparamDomain, DslError> {
        let (name, line, col) = match self.toks.get(self.pos) {
            Some(Spanned { tok: Tok::Ident(s), line, col }) => (s.clone(), *line, *col),
            _ => return self.err("expected a domain literal"),
        };
        self.pos += 1;
        self.expect(&Tok::LParen, "'(' after domain literal")?;
        let d = match name.as_str() {
            "cat" => {
                let mut vals = vec![self.literal()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    vals.push(self.literal()?);
                }
                HyperparamDomain::categorical(vals)?
            }
            "int" => {
                let lo = match self.next() {
                    Some(Tok::Int(i)) => i,
                    _ => return self.err("expected an integer bound"),
                };
                self.expect(&Tok::Comma, "','")?;
                let hi = match self.next() {
                    Some(Tok::Int(i)) => i,
                    _ => return self.err("expected an integer bound"),
                };
                HyperparamDomain::int_range(lo, hi)?
            }
            "float" => {
                let num = |p: &mut Self| -> Result<f64, DslError> {
                    match p.next() {
                        Some(Tok::Float(f)) => Ok(f),
                        Some(Tok::Int(i)) => Ok(i as f64),
                        _ => p.err("expected a numeric bound"),
                    }
                };
                let lo = num(self)?;
                self.expect(&Tok::Comma, "','")?;
                let hi = num(self)?;
                let mut open = false;
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    let flag = self.ident("'open'")?;
                    if flag != "open" {
                        return self.err(format!("expected 'open', found {flag:?}"));
                    }
                    open = true;
                }
                HyperparamDomain::float_range(lo, hi, open)?
            }
            "const" => HyperparamDomain::Constant(self.literal()?),
            "any" => HyperparamDomain::Anything,
            other => {
                return Err(DslError::UnknownDomainLiteral {
                    line,
                    col,
                    name: other.to_string(),
                })
            }
        };
        self.expect(&Tok::RParen, "')'")?;
        Ok(d)
    }
}

/// Parses canonical DSL text into a planned pipeline.
pub fn parse_dsl(src: &str) -> Result<PlannedPipeline, DslError> {
    let mut bindings: HashMap<String, Binding> = HashMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut pipeline_refs: Option<Vec<String>> = None;

    for (idx, raw_line) in src.lines().enumerate() {
        let line_no = idx + 1;
        if raw_line.trim().is_empty() {
            continue;
        }
        if pipeline_refs.is_some() {
            return Err(DslError::Parse {
                line: line_no,
                col: 1,
                msg: "the 'pipeline = ...' line must be last".into(),
            });
        }
        let toks = tokenize_line(raw_line, line_no)?;
        let mut p = LineParser { toks, pos: 0, line: line_no };
        let name = p.ident("a variable name")?;
        p.expect(&Tok::Eq, "'='")?;

        if name == "pipeline" {
            let mut refs = vec![p.ident("a step name")?];
            while p.peek() == Some(&Tok::Chain) {
                p.pos += 1;
                refs.push(p.ident("a step name after '>>'")?);
            }
            if p.peek().is_some() {
                return p.err("unexpected trailing tokens");
            }
            pipeline_refs = Some(refs);
            continue;
        }
        if bindings.contains_key(&name) {
            return p.err(format!("variable {name:?} is defined twice"));
        }

        let first = p.ident("an operator or variable name")?;
        let binding = match p.peek() {
            // ref ('|' ref)+  — a choice of previously defined names
            Some(Tok::Pipe) => {
                let mut refs = vec![first];
                while p.peek() == Some(&Tok::Pipe) {
                    p.pos += 1;
                    refs.push(p.ident("a name after '|'")?);
                }
                if p.peek().is_some() {
                    return p.err("unexpected trailing tokens");
                }
                Binding::Choice(refs)
            }
            // ref ('>>' ref)+ — a named sub-chain
            Some(Tok::Chain) => {
                let mut refs = vec![first];
                while p.peek() == Some(&Tok::Chain) {
                    p.pos += 1;
                    refs.push(p.ident("a name after '>>'")?);
                }
                if p.peek().is_some() {
                    return p.err("unexpected trailing tokens");
                }
                Binding::Chain(refs)
            }
            // operator constructor, optionally configured
            _ => {
                let mut spec = OperatorSpec::new(first);
                if p.peek() == Some(&Tok::LParen) {
                    p.pos += 1;
                    loop {
                        let hp = p.ident("a keyword argument name")?;
                        p.expect(&Tok::Eq, "'='")?;
                        let v = p.literal()?;
                        spec.fixed.insert(hp, v);
                        match p.next() {
                            Some(Tok::Comma) => continue,
                            Some(Tok::RParen) => break,
                            _ => {
                                p.pos = p.pos.saturating_sub(1);
                                return p.err("expected ',' or ')'");
                            }
                        }
                    }
                }
                if p.peek() == Some(&Tok::Dot) {
                    p.pos += 1;
                    let method = p.ident("a method name")?;
                    if method != "customize_schema" {
                        return p.err(format!("unknown method {method:?}"));
                    }
                    p.expect(&Tok::LParen, "'('")?;
                    loop {
                        let hp = p.ident("a keyword argument name")?;
                        p.expect(&Tok::Eq, "'='")?;
                        let d = p.domain()?;
                        spec.customize(&hp, d);
                        match p.next() {
                            Some(Tok::Comma) => continue,
                            Some(Tok::RParen) => break,
                            _ => {
                                p.pos = p.pos.saturating_sub(1);
                                return p.err("expected ',' or ')'");
                            }
                        }
                    }
                }
                if p.peek().is_some() {
                    return p.err("unexpected trailing tokens");
                }
                Binding::Op(spec)
            }
        };
        bindings.insert(name.clone(), binding);
        order.push(name);
    }

    let refs = pipeline_refs.ok_or(DslError::Parse {
        line: src.lines().count() + 1,
        col: 1,
        msg: "missing final 'pipeline = ...' line".into(),
    })?;

    let steps = resolve_chain(&refs, &bindings)?;
    Ok(PlannedPipeline::new(steps)?)
}

fn resolve_chain(
    refs: &[String],
    bindings: &HashMap<String, Binding>,
) -> Result<Vec<Step>, DslError> {
    let mut steps = Vec::new();
    for r in refs {
        match bindings.get(r) {
            None => {
                return Err(DslError::Invalid(format!("undefined name {r:?} in a chain")));
            }
            Some(Binding::Op(spec)) => steps.push(Step::Operator(spec.clone())),
            Some(Binding::Chain(inner)) => steps.extend(resolve_chain(inner, bindings)?),
            Some(Binding::Choice(alt_refs)) => {
                let mut alts = Vec::new();
                for a in alt_refs {
                    let alt_steps = resolve_chain(std::slice::from_ref(a), bindings)?;
                    alts.push(PlannedPipeline::from_steps_unchecked(alt_steps));
                }
                steps.push(Step::Choice(alts));
            }
        }
    }
    Ok(steps)
}
