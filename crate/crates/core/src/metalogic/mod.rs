//! Auditing meta-level arguments about provability.
//!
//! A [`Chain`] is a numbered list of [`Meta`] statements, each citing a rule
//! from [`list_rules`] and earlier steps. [`audit`] checks every step against
//! its rule and reports which goals rest only on justified steps.

mod audit;
pub mod logic;
mod parse;
mod rules;
mod statement;

#[cfg(test)]
mod tests;

use std::fmt;
use std::str::FromStr;

pub use audit::{audit, AuditReport, GoalReport, Reason, StepRecord, StepReport, Verdict};
pub use parse::{
    parse_chain, parse_chain_with, parse_formula_with, parse_statement, Assumption, Chain,
    ChainError, ChainStep, Macros,
};
pub use rules::{list_rules, Rule};
pub use statement::Meta;

/// The bundled chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinChain {
    GodelA,
    GodelB,
    Anand,
    RosserA,
    RosserB,
    Footnote13,
}

/// `Literal` keeps each step and rule citation as originally argued;
/// `Refined` is the smallest re-encoding the catalogue can check step by step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Literal,
    Refined,
}

impl BuiltinChain {
    pub const ALL: [BuiltinChain; 6] = [
        BuiltinChain::GodelA,
        BuiltinChain::GodelB,
        BuiltinChain::Anand,
        BuiltinChain::RosserA,
        BuiltinChain::RosserB,
        BuiltinChain::Footnote13,
    ];

    pub fn id(self) -> &'static str {
        match self {
            BuiltinChain::GodelA => "godel_a",
            BuiltinChain::GodelB => "godel_b",
            BuiltinChain::Anand => "anand",
            BuiltinChain::RosserA => "rosser_a",
            BuiltinChain::RosserB => "rosser_b",
            BuiltinChain::Footnote13 => "footnote13",
        }
    }

    pub fn source(self, variant: Variant) -> &'static str {
        use BuiltinChain::*;
        use Variant::*;
        match (self, variant) {
            (GodelA, Literal) => include_str!("../../fixtures/chains/godel_a.literal.chain"),
            (GodelA, Refined) => include_str!("../../fixtures/chains/godel_a.refined.chain"),
            (GodelB, Literal) => include_str!("../../fixtures/chains/godel_b.literal.chain"),
            (GodelB, Refined) => include_str!("../../fixtures/chains/godel_b.refined.chain"),
            (Anand, Literal) => include_str!("../../fixtures/chains/anand.literal.chain"),
            (Anand, Refined) => include_str!("../../fixtures/chains/anand.refined.chain"),
            (RosserA, Literal) => include_str!("../../fixtures/chains/rosser_a.literal.chain"),
            (RosserA, Refined) => include_str!("../../fixtures/chains/rosser_a.refined.chain"),
            (RosserB, Literal) => include_str!("../../fixtures/chains/rosser_b.literal.chain"),
            (RosserB, Refined) => include_str!("../../fixtures/chains/rosser_b.refined.chain"),
            (Footnote13, _) => include_str!("../../fixtures/chains/footnote13.chain"),
        }
    }
}

impl fmt::Display for BuiltinChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for BuiltinChain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BuiltinChain::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| format!("unknown chain `{s}`"))
    }
}

pub fn builtin_chain(id: BuiltinChain, variant: Variant) -> Chain {
    parse_chain(id.source(variant)).expect("bundled chains parse")
}
