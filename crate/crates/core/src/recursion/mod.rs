//! Decidable relations, the beta function, primitive recursive definitions
//! compiled to formulas, and a budgeted evaluator for existential formulas.

mod beta;
mod pr;
mod relations;
mod sigma1;

#[cfg(test)]
mod tests;

use num_bigint::BigUint;
use num_traits::One;

pub use beta::{beta, beta_find, BetaPair};
pub use pr::{
    addition, arg_var, beta_formula, catalogue, compile_pr, factorial, lookup, multiplication,
    predecessor, successor, PRDef, PRError, RESULT_VAR,
};
pub use relations::{diag_rel_eval, diagonal_instance, prf_eval};
pub use sigma1::{eval_sigma1, EvalError, TriBool, DEFAULT_BUDGET};

use crate::syntax::{SyntaxError, Term};

/// `n!` unfolded as `n*((n-1)*(..*(1*1)))`, with `0!` as `1`.
pub fn reduce_factorial(n: u64, threshold: u64) -> Result<Term, SyntaxError> {
    if n > threshold {
        return Err(SyntaxError::ThresholdExceeded {
            value: BigUint::from(n),
            threshold,
        });
    }
    let mut t = Term::Num(BigUint::one());
    for k in 1..=n {
        t = Term::mul(Term::Num(BigUint::from(k)), t);
    }
    Ok(t)
}
