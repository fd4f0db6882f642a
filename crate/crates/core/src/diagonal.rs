//! Self-referential sentences built by substituting a formula's own code
//! for its single free variable.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::codec::encode_formula;
use crate::syntax::{parse_formula, Formula, Term};

/// The unprovability template: no `y` codes a proof of `H(x)`.
pub const GUS_TEMPLATE: &str = "(Ay)(~Q(x, y))";
/// The Rosser template: every proof of `H(x)` is preceded by a proof of its negation.
pub const RUS_TEMPLATE: &str = "(Ay)(Q(x, y) => (Ez)((z =< y) & S(x, z)))";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalResult {
    pub template: Formula,
    /// Code of the template.
    pub code: BigUint,
    /// The template with its free variable replaced by the numeral for `code`.
    pub sentence: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagonalError {
    #[error("template must have exactly one free variable, found {0}")]
    FreeVariables(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Gus,
    Rus,
}

impl Builtin {
    pub fn template(self) -> &'static str {
        match self {
            Builtin::Gus => GUS_TEMPLATE,
            Builtin::Rus => RUS_TEMPLATE,
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Builtin::Gus => "gus",
            Builtin::Rus => "rus",
        })
    }
}

impl FromStr for Builtin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gus" => Ok(Builtin::Gus),
            "rus" => Ok(Builtin::Rus),
            _ => Err(format!("unknown builtin `{s}` (expected gus or rus)")),
        }
    }
}

pub fn diagonalize(template: &Formula) -> Result<DiagonalResult, DiagonalError> {
    let free = template.free_variables();
    if free.len() != 1 {
        return Err(DiagonalError::FreeVariables(free.len()));
    }
    let v = free.into_iter().next().expect("one free variable");
    let code = encode_formula(template).value;
    let sentence = template.substitute(&v, &Term::Num(code.clone()));
    Ok(DiagonalResult {
        template: template.clone(),
        code,
        sentence,
    })
}

pub fn construct_builtin(kind: Builtin) -> DiagonalResult {
    let template = parse_formula(kind.template()).expect("builtin template parses");
    diagonalize(&template).expect("builtin template has one free variable")
}
