use num_bigint::BigUint;

use crate::codec::{decode_formula, decode_proof, encode_formula};
use crate::kernel::check_proof;
use crate::syntax::{Formula, RelConst, Term};

/// Whether `m` codes a valid hypothesis-free proof whose conclusion has code `k`.
pub fn prf_eval(k: &BigUint, m: &BigUint) -> bool {
    let Ok(proof) = decode_proof(m) else {
        return false;
    };
    if !proof.hypotheses.is_empty() || !check_proof(&proof).valid {
        return false;
    }
    proof
        .conclusion()
        .is_some_and(|c| encode_formula(c).value == *k)
}

/// `H(h)` for the formula `H` coded by `h`, when `H` has exactly one free variable.
pub fn diagonal_instance(h: &BigUint) -> Option<Formula> {
    let f = decode_formula(h).ok()?;
    let free = f.free_variables();
    let mut it = free.iter();
    match (it.next(), it.next()) {
        (Some(v), None) => Some(f.substitute(v, &Term::Num(h.clone()))),
        _ => None,
    }
}

/// `q(h, j)`: `j` codes a proof of `H(h)`. `s(h, j)`: `j` codes a proof of `~H(h)`.
/// The upper-case constants are read the same way.
pub fn diag_rel_eval(kind: RelConst, h: &BigUint, j: &BigUint) -> bool {
    let Some(inst) = diagonal_instance(h) else {
        return false;
    };
    let target = match kind {
        RelConst::LowerQ | RelConst::UpperQ => inst,
        RelConst::LowerS | RelConst::UpperS => Formula::not(inst),
    };
    prf_eval(&encode_formula(&target).value, j)
}
