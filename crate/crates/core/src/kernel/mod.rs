//! Hilbert-style proof checking for Peano Arithmetic.
//!
//! A [`Proof`] is a list of hypotheses and a list of lines, each line a formula
//! with a [`Justification`]. Line references are 0-based in memory and 1-based
//! in the text format handled by [`parse_proof`] and [`format_proof`].

mod arith;
mod axioms;
mod builder;
mod deduction;
mod file;


use std::fmt;

pub use arith::prove_closed_equation;
pub use axioms::{
    classify_axiom, free_for, instantiates, is_instance, pa_axiom, AxiomId, EQUALITY_SCHEMAS,
    LOGICAL_SCHEMAS, PA_AXIOMS,
};
pub use builder::ProofBuilder;
pub use deduction::{deduction_transform, DeductionError};
pub use file::{format_justification, format_proof, parse_proof, ProofFileError};

use crate::syntax::{Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Justification {
    Axiom(AxiomId),
    Hyp(usize),
    /// `Mp(i, j)`: line `i` is `F`, line `j` is `F => G`.
    Mp(usize, usize),
    Gen(usize, String),
    /// `Ind(i, j)`: line `i` is `F[0/x]`, line `j` is `(Ax)(F => F[(x+1)/x])`.
    Ind(usize, usize),
}

impl Justification {
    /// Earlier lines this justification cites.
    pub fn premises(&self) -> Vec<usize> {
        match self {
            Justification::Axiom(_) | Justification::Hyp(_) => vec![],
            Justification::Mp(i, j) | Justification::Ind(i, j) => vec![*i, *j],
            Justification::Gen(i, _) => vec![*i],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub formula: Formula,
    pub just: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Proof {
    pub hypotheses: Vec<Formula>,
    pub lines: Vec<Line>,
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn push(&mut self, formula: Formula, just: Justification) -> usize {
        self.lines.push(Line { formula, just });
        self.lines.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    Empty,
    IllFormed,
    NotAnAxiom(AxiomId),
    HypIndex(usize),
    ForwardRef(usize),
    MpMismatch,
    GenMismatch,
    IndMismatch,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Empty => write!(f, "empty proof"),
            Reason::IllFormed => write!(f, "ill-formed: constants or meta-variables present"),
            Reason::NotAnAxiom(id) => write!(f, "not an instance of {id}"),
            Reason::HypIndex(i) => write!(f, "no hypothesis {}", i + 1),
            Reason::ForwardRef(i) => write!(f, "reference to line {} is not earlier", i + 1),
            Reason::MpMismatch => write!(f, "modus ponens premises do not match"),
            Reason::GenMismatch => write!(f, "generalisation does not match its premise"),
            Reason::IndMismatch => write!(f, "induction premises do not match"),
        }
    }
}

impl Reason {
    pub fn code(&self) -> &'static str {
        match self {
            Reason::Empty => "empty",
            Reason::IllFormed => "ill-formed",
            Reason::NotAnAxiom(_) => "not-an-axiom",
            Reason::HypIndex(_) => "bad-hypothesis",
            Reason::ForwardRef(_) => "forward-reference",
            Reason::MpMismatch => "mp-mismatch",
            Reason::GenMismatch => "gen-mismatch",
            Reason::IndMismatch => "ind-mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub valid: bool,
    /// 0-based index of the first failing line; `None` for an empty or valid proof.
    pub first_bad_line: Option<usize>,
    pub reason: Option<Reason>,
    /// Generalisations on a variable free in some hypothesis: `(line, variable)`.
    pub flagged_generalisations: Vec<(usize, String)>,
}

/// Check every line of `proof` in order, stopping at the first failure.
pub fn check_proof(proof: &Proof) -> Verdict {
    let fail = |line: Option<usize>, r: Reason, flagged: Vec<(usize, String)>| Verdict {
        valid: false,
        first_bad_line: line,
        reason: Some(r),
        flagged_generalisations: flagged,
    };
    if proof.lines.is_empty() {
        return fail(None, Reason::Empty, vec![]);
    }
    if proof.hypotheses.iter().any(|h| !h.is_pure()) {
        return fail(Some(0), Reason::IllFormed, vec![]);
    }
    let mut flagged = Vec::new();
    for (n, line) in proof.lines.iter().enumerate() {
        if let Err(r) = check_line(proof, n, line, &mut flagged) {
            return fail(Some(n), r, flagged);
        }
    }
    Verdict {
        valid: true,
        first_bad_line: None,
        reason: None,
        flagged_generalisations: flagged,
    }
}

fn check_line(
    proof: &Proof,
    n: usize,
    line: &Line,
    flagged: &mut Vec<(usize, String)>,
) -> Result<(), Reason> {
    let f = &line.formula;
    if !f.is_pure() {
        return Err(Reason::IllFormed);
    }
    let earlier = |i: usize| -> Result<&Formula, Reason> {
        if i < n {
            Ok(&proof.lines[i].formula)
        } else {
            Err(Reason::ForwardRef(i))
        }
    };
    match &line.just {
        Justification::Axiom(id) => {
            if !is_instance(f, *id) {
                return Err(Reason::NotAnAxiom(*id));
            }
        }
        Justification::Hyp(i) => match proof.hypotheses.get(*i) {
            Some(h) if h == f => {}
            _ => return Err(Reason::HypIndex(*i)),
        },
        Justification::Mp(i, j) => {
            let (a, ab) = (earlier(*i)?, earlier(*j)?);
            match ab {
                Formula::Imp(a2, b) if **a2 == *a && **b == *f => {}
                _ => return Err(Reason::MpMismatch),
            }
        }
        Justification::Gen(i, v) => {
            let p = earlier(*i)?;
            if *f != Formula::forall(v, p.clone()) {
                return Err(Reason::GenMismatch);
            }
            if proof.hypotheses.iter().any(|h| h.is_free(v)) {
                flagged.push((n, v.clone()));
            }
        }
        Justification::Ind(i, j) => {
            let (base, step) = (earlier(*i)?, earlier(*j)?);
            if !induction_matches(f, base, step) {
                return Err(Reason::IndMismatch);
            }
        }
    }
    Ok(())
}

fn induction_matches(concl: &Formula, base: &Formula, step: &Formula) -> bool {
    let Formula::Forall(x, body) = concl else {
        return false;
    };
    let zero = Term::Num(0u32.into());
    let succ = Term::add(Term::Var(x.clone()), Term::Num(1u32.into()));
    let expected_step =
        Formula::forall(x, Formula::imp((**body).clone(), body.substitute(x, &succ)));
    *base == body.substitute(x, &zero) && *step == expected_step
}
