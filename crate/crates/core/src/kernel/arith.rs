use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{AxiomId, Proof, ProofBuilder};
use crate::syntax::{Formula, Term};

/// A proof of `t1 = t2` for closed terms of equal value, or `None` when
/// the terms are open or their values differ.
pub fn prove_closed_equation(t1: &Term, t2: &Term) -> Option<Proof> {
    let (v1, v2) = (t1.eval()?, t2.eval()?);
    if v1 != v2 || !t1.is_ground() || !t2.is_ground() {
        return None;
    }
    let mut b = ProofBuilder::new(vec![]);
    let n1 = normalise(&mut b, t1);
    let n2 = normalise(&mut b, t2);
    let goal = match (n1, n2) {
        (None, None) => b.refl(t1),
        (Some(l1), None) => l1,
        (None, Some(l2)) => b.sym(l2),
        (Some(l1), Some(l2)) => {
            let back = b.sym(l2);
            b.trans(l1, back)
        }
    };
    debug_assert_eq!(*b.formula(goal), Formula::Eq(t1.clone(), t2.clone()));
    Some(b.finish(goal))
}

fn num(n: &BigUint) -> Term {
    Term::Num(n.clone())
}

fn one() -> Term {
    Term::Num(BigUint::one())
}

/// A line proving `t = n` for the value `n` of `t`; `None` if `t` is already `n`.
fn normalise(b: &mut ProofBuilder, t: &Term) -> Option<usize> {
    let (l, r, is_add) = match t {
        Term::Num(_) => return None,
        Term::Add(l, r) => (l, r, true),
        Term::Mul(l, r) => (l, r, false),
        _ => unreachable!("closed terms only"),
    };
    let (lv, rv) = (l.eval().expect("closed"), r.eval().expect("closed"));
    let rebuild = |a: Term, c: Term| {
        if is_add {
            Term::add(a, c)
        } else {
            Term::mul(a, c)
        }
    };

    // t = (L op R) with L, R numerals
    let mut chain: Option<usize> = None;
    if let Some(ll) = normalise(b, l) {
        chain = Some(b.rewrite(ll, t, &rebuild(num(&lv), (**r).clone())));
    }
    if let Some(rl) = normalise(b, r) {
        let from = rebuild(num(&lv), (**r).clone());
        let step = b.rewrite(rl, &from, &rebuild(num(&lv), num(&rv)));
        chain = Some(match chain {
            Some(c) => b.trans(c, step),
            None => step,
        });
    }
    let last = if is_add {
        add_numerals(b, &lv, &rv)
    } else {
        mul_numerals(b, &lv, &rv)
    };
    Some(match chain {
        Some(c) => b.trans(c, last),
        None => last,
    })
}

fn unfold(b: &mut ProofBuilder, n: &BigUint) -> usize {
    let prev = n - BigUint::one();
    b.axiom(
        Formula::Eq(num(n), Term::add(num(&prev), one())),
        AxiomId::Equality(4),
    )
}

/// `(m+k) = n` with `n = m + k`.
fn add_numerals(b: &mut ProofBuilder, m: &BigUint, k: &BigUint) -> usize {
    let mut line = b.pa_instance(3, &num(m), None);
    let mut j = BigUint::zero();
    while &j < k {
        let prev = j.clone();
        j += 1u32;
        let succ_prev = Term::add(num(&prev), one());
        let unf = unfold(b, &j);
        let l2 = b.rewrite(
            unf,
            &Term::add(num(m), num(&j)),
            &Term::add(num(m), succ_prev.clone()),
        );
        let l3 = b.pa_instance(4, &num(m), Some(&num(&prev)));
        let sum_prev = m + &prev;
        let l5 = b.rewrite(
            line,
            &Term::add(Term::add(num(m), num(&prev)), one()),
            &Term::add(num(&sum_prev), one()),
        );
        let unf_sum = unfold(b, &(m + &j));
        let l6 = b.sym(unf_sum);
        let a = b.trans(l2, l3);
        let a = b.trans(a, l5);
        line = b.trans(a, l6);
    }
    line
}

/// `(m*k) = n` with `n = m * k`.
fn mul_numerals(b: &mut ProofBuilder, m: &BigUint, k: &BigUint) -> usize {
    let mut line = b.pa_instance(5, &num(m), None);
    let mut j = BigUint::zero();
    while &j < k {
        let prev = j.clone();
        j += 1u32;
        let unf = unfold(b, &j);
        let l2 = b.rewrite(
            unf,
            &Term::mul(num(m), num(&j)),
            &Term::mul(num(m), Term::add(num(&prev), one())),
        );
        let l3 = b.pa_instance(6, &num(m), Some(&num(&prev)));
        let prod_prev = m * &prev;
        let l4 = b.rewrite(
            line,
            &Term::add(Term::mul(num(m), num(&prev)), num(m)),
            &Term::add(num(&prod_prev), num(m)),
        );
        let l5 = add_numerals(b, &prod_prev, m);
        let a = b.trans(l2, l3);
        let a = b.trans(a, l4);
        line = b.trans(a, l5);
    }
    line
}
