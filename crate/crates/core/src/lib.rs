//! A small Peano Arithmetic workbench.
//!
//! The crate is layered bottom-up:
//!
//! * [`syntax`]: terms, formulas, the canonical surface grammar and substitution.
//! * [`kernel`]: axiom recognition, proof-sequence checking and the deduction transformer.
//! * [`codec`]: positional Goedel numbering of formulas and proofs.
//! * [`recursion`]: the beta function, primitive recursive definitions compiled to
//!   formulas, a budgeted existential evaluator and the decidable proof relations.
//! * [`diagonal`]: self-referential sentences built by diagonal substitution.
//! * [`metalogic`]: a checker for chains of provability meta-statements.

pub mod codec;
pub mod diagonal;
pub mod kernel;
pub mod metalogic;
pub mod recursion;
pub mod syntax;
