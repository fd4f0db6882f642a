use std::fmt::Write as _;

use thiserror::Error;

use super::{Justification, Proof};
use crate::syntax::{parse_formula, render, SyntaxError};

#[derive(Debug, Error)]
pub enum ProofFileError {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: SyntaxError },
}

/// Parse the text proof format. Blank lines and `//` comments are ignored.
pub fn parse_proof(text: &str) -> Result<Proof, ProofFileError> {
    let mut proof = Proof::default();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let fmt_err = |msg: String| ProofFileError::Format { line: ln, msg };
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("hyp:") {
            if !proof.lines.is_empty() {
                return Err(fmt_err("hypotheses must precede proof lines".into()));
            }
            let f = parse_formula(rest.trim())
                .map_err(|source| ProofFileError::Formula { line: ln, source })?;
            proof.hypotheses.push(f);
            continue;
        }
        let (num, rest) = line
            .split_once('.')
            .ok_or_else(|| fmt_err("expected `<n>. <formula> ; <justification>`".into()))?;
        let n: usize = num
            .trim()
            .parse()
            .map_err(|_| fmt_err(format!("bad line number `{}`", num.trim())))?;
        if n != proof.lines.len() + 1 {
            return Err(fmt_err(format!(
                "expected line number {}, found {n}",
                proof.lines.len() + 1
            )));
        }
        let (formula, just) = rest
            .rsplit_once(';')
            .ok_or_else(|| fmt_err("missing `; <justification>`".into()))?;
        let f = parse_formula(formula.trim())
            .map_err(|source| ProofFileError::Formula { line: ln, source })?;
        let just = parse_justification(just.trim()).map_err(fmt_err)?;
        proof.push(f, just);
    }
    Ok(proof)
}

fn parse_justification(s: &str) -> Result<Justification, String> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    let index = |p: &str| -> Result<usize, String> {
        match p.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(format!("bad index `{p}`")),
        }
    };
    match parts.as_slice() {
        ["hyp", i] => Ok(Justification::Hyp(index(i)?)),
        ["MP", i, j] => Ok(Justification::Mp(index(i)?, index(j)?)),
        ["Ind", i, j] => Ok(Justification::Ind(index(i)?, index(j)?)),
        ["Gen", i, v] => Ok(Justification::Gen(index(i)?, v.to_string())),
        [id] => Ok(Justification::Axiom(id.parse()?)),
        _ => Err(format!("unknown justification `{s}`")),
    }
}

pub fn format_justification(j: &Justification) -> String {
    match j {
        Justification::Axiom(id) => id.to_string(),
        Justification::Hyp(i) => format!("hyp {}", i + 1),
        Justification::Mp(i, k) => format!("MP {} {}", i + 1, k + 1),
        Justification::Gen(i, v) => format!("Gen {} {v}", i + 1),
        Justification::Ind(i, k) => format!("Ind {} {}", i + 1, k + 1),
    }
}

pub fn format_proof(p: &Proof) -> String {
    let mut out = String::new();
    for h in &p.hypotheses {
        let _ = writeln!(out, "hyp: {}", render(h));
    }
    for (n, l) in p.lines.iter().enumerate() {
        let _ = writeln!(
            out,
            "{}. {} ; {}",
            n + 1,
            render(&l.formula),
            format_justification(&l.just)
        );
    }
    out
}
