use num_bigint::BigUint;
use proptest::prelude::*;

use super::*;
use crate::codec::{encode_formula, encode_proof};
use crate::kernel::{parse_proof, prove_closed_equation, Proof};
use crate::syntax::{numeral, parse_formula, parse_term, render_term, Formula, RelConst, Term};

fn n(x: u64) -> BigUint {
    BigUint::from(x)
}

fn fact(k: u64) -> u64 {
    (1..=k).product()
}

fn instantiate(f: &Formula, args: &[u64], y: u64) -> Formula {
    let mut g = f.clone();
    for (i, a) in args.iter().enumerate() {
        g = g.substitute(&arg_var(i + 1), &numeral(*a));
    }
    g.substitute(RESULT_VAR, &numeral(y))
}

#[test]
fn factorial_reduction_shape() {
    let t = reduce_factorial(3, 100).unwrap();
    assert_eq!(t, parse_term("3*(2*(1*(1)))").unwrap());
    assert_eq!(render_term(&reduce_factorial(0, 100).unwrap()), "1");
    assert_eq!(reduce_factorial(5, 100).unwrap().eval(), Some(n(fact(5))));
    assert!(reduce_factorial(101, 100).is_err());
}

#[test]
fn beta_examples() {
    assert_eq!(beta(&n(5), &n(2), &n(0)), n(2));
    for (a, i) in [(0, 0), (17, 3), (1000, 9)] {
        assert_eq!(beta(&n(a), &n(0), &n(i)), n(0));
    }
}

// Independent oracle: smallest b >= 1, then smallest a, by brute force.
fn brute_force_pair(seq: &[u64]) -> (u64, u64) {
    for b in 1u64.. {
        let moduli: Vec<u64> = (0..seq.len() as u64).map(|i| 1 + (i + 1) * b).collect();
        let limit: u64 = moduli.iter().product();
        for a in 0..limit {
            if seq.iter().zip(&moduli).all(|(s, m)| a % m == *s) {
                return (a, b);
            }
        }
    }
    unreachable!()
}

#[test]
fn beta_find_matches_brute_force_minimum() {
    let p = beta_find(&[n(2)]);
    assert_eq!((p.a.clone(), p.b.clone()), (n(2), n(2)));
    assert_eq!(brute_force_pair(&[2]), (2, 2));
    let p = beta_find(&[n(0), n(0), n(0)]);
    assert_eq!((p.a, p.b), (n(0), n(1)));
    let facts = [1, 1, 2, 6];
    let p = beta_find(&facts.map(n));
    for (i, v) in facts.iter().enumerate() {
        assert_eq!(beta(&p.a, &p.b, &n(i as u64)), n(*v));
    }
    let (a, b) = brute_force_pair(&facts);
    assert_eq!((p.a, p.b), (n(a), n(b)));
}

#[test]
fn beta_find_reproduces_every_short_sequence() {
    fn all(len: usize, max: u64) -> Vec<Vec<u64>> {
        if len == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for prefix in all(len - 1, max) {
            for v in 0..=max {
                let mut s = prefix.clone();
                s.push(v);
                out.push(s);
            }
        }
        out
    }
    for len in 1..=3 {
        for seq in all(len, 10) {
            let big: Vec<BigUint> = seq.iter().map(|v| n(*v)).collect();
            let p = beta_find(&big);
            for (i, v) in seq.iter().enumerate() {
                assert_eq!(beta(&p.a, &p.b, &n(i as u64)), n(*v), "{seq:?}");
            }
        }
    }
}

#[test]
fn pr_arities_are_checked() {
    for (_, d) in catalogue() {
        d.arity().unwrap();
    }
    assert!(PRDef::Proj(2, 3).arity().is_err());
    assert!(
        PRDef::comp(PRDef::Succ, vec![PRDef::Zero(1), PRDef::Zero(1)])
            .arity()
            .is_err()
    );
    assert!(PRDef::prim_rec(PRDef::Zero(1), PRDef::Succ)
        .arity()
        .is_err());
}

#[test]
fn compiled_formulas_are_pure_with_expected_free_variables() {
    for (name, d) in catalogue() {
        let f = compile_pr(&d).unwrap();
        assert!(f.is_pure(), "{name}");
        let mut expect: std::collections::BTreeSet<String> =
            (1..=d.arity().unwrap()).map(arg_var).collect();
        expect.insert(RESULT_VAR.into());
        assert_eq!(f.free_variables(), expect, "{name}");
        let mut rel = false;
        f.visit_terms(&mut |_| {});
        if format!("{f}").contains('Q') || format!("{f}").contains('S') {
            rel = true;
        }
        assert!(!rel);
    }
}

#[test]
fn successor_and_factorial_examples() {
    let succ = compile_pr(&successor()).unwrap();
    assert_eq!(
        eval_sigma1(&instantiate(&succ, &[3], 4), 10).unwrap(),
        TriBool::True
    );
    let f = compile_pr(&factorial()).unwrap();
    assert_eq!(
        eval_sigma1(&instantiate(&f, &[3], 6), DEFAULT_BUDGET).unwrap(),
        TriBool::True
    );
    assert_eq!(
        eval_sigma1(&instantiate(&f, &[3], 5), DEFAULT_BUDGET).unwrap(),
        TriBool::False
    );
}

#[test]
fn addition_agrees_with_plus_up_to_ten() {
    let f = compile_pr(&addition()).unwrap();
    for a in 0..=10 {
        for b in 0..=10 {
            assert_eq!(
                eval_sigma1(&instantiate(&f, &[a, b], a + b), DEFAULT_BUDGET).unwrap(),
                TriBool::True
            );
        }
    }
    assert_eq!(
        eval_sigma1(&instantiate(&f, &[2, 2], 5), DEFAULT_BUDGET).unwrap(),
        TriBool::False
    );
}

#[test]
fn sigma1_basic_cases() {
    let f = parse_formula("(Ey)(y = 2)").unwrap();
    assert_eq!(eval_sigma1(&f, 10).unwrap(), TriBool::True);
    let f = parse_formula("(Ey)(y = (y+1))").unwrap();
    assert_eq!(eval_sigma1(&f, 100).unwrap(), TriBool::Unknown);
    let f = parse_formula("(Ey)((y =< 5) & ((y*y) = 16))").unwrap();
    assert_eq!(eval_sigma1(&f, 100).unwrap(), TriBool::True);
    let f = parse_formula("(Ey)((y =< 5) & ((y*y) = 17))").unwrap();
    assert_eq!(eval_sigma1(&f, 100).unwrap(), TriBool::False);
    let f = parse_formula("(Ax)((x =< 4) => ~((x+x) = 7))").unwrap();
    assert_eq!(eval_sigma1(&f, 100).unwrap(), TriBool::True);
    let f = parse_formula("(E!y)((y+y) = 4)").unwrap();
    assert_eq!(eval_sigma1(&f, 100).unwrap(), TriBool::Unknown);
    assert!(eval_sigma1(&parse_formula("(x = 0)").unwrap(), 10).is_err());
}

fn four_line() -> Proof {
    prove_closed_equation(&parse_term("(0+0)").unwrap(), &parse_term("0").unwrap()).unwrap()
}

#[test]
fn prf_matches_the_kernel() {
    let proof = four_line();
    let k = encode_formula(proof.conclusion().unwrap()).value;
    let m = encode_proof(&proof).unwrap().value;
    assert!(prf_eval(&k, &m));

    let mut bad = proof.clone();
    bad.lines[3].formula = parse_formula("(0+0) = 1").unwrap();
    let m_bad = encode_proof(&bad).unwrap().value;
    assert!(!prf_eval(&k, &m_bad));
    assert!(!prf_eval(
        &encode_formula(&bad.lines[3].formula).value,
        &m_bad
    ));
    assert!(!prf_eval(&n(0), &n(0)));
}

#[test]
fn diagonal_relations() {
    let h_formula = parse_formula("(z = z)").unwrap();
    let h = encode_formula(&h_formula).value;
    let t = Term::Num(h.clone());
    let proof = prove_closed_equation(&t, &t).unwrap();
    let j = encode_proof(&proof).unwrap().value;
    assert!(diag_rel_eval(RelConst::LowerQ, &h, &j));
    assert!(!diag_rel_eval(RelConst::LowerS, &h, &j));
    assert!(!diag_rel_eval(RelConst::LowerQ, &h, &n(0)));

    let closed = encode_formula(&parse_formula("(0 = 0)").unwrap()).value;
    let refl = encode_proof(&parse_proof("1. (0 = 0) ; EqAx1").unwrap())
        .unwrap()
        .value;
    assert!(!diag_rel_eval(RelConst::LowerQ, &closed, &refl));
    assert!(!diag_rel_eval(RelConst::LowerS, &closed, &refl));
}

fn catalogue_bound(name: &str) -> (usize, u64) {
    match name {
        "factorial" => (1, fact(5)),
        "addition" => (2, 10),
        "multiplication" => (2, 25),
        "successor" => (1, 6),
        _ => (1, 5),
    }
}

#[test]
fn compiled_catalogue_is_correct_and_functional() {
    for (name, d) in catalogue() {
        let f = compile_pr(&d).unwrap();
        let (arity, bound) = catalogue_bound(name);
        let arg_sets: Vec<Vec<u64>> = if arity == 1 {
            (0..=5).map(|k| vec![k]).collect()
        } else {
            (0..=5)
                .flat_map(|a| (0..=5).map(move |b| vec![a, b]))
                .collect()
        };
        for args in arg_sets {
            let expected = d.eval(&args.iter().map(|a| n(*a)).collect::<Vec<_>>());
            let oracle = match name {
                "successor" => args[0] + 1,
                "addition" => args[0] + args[1],
                "multiplication" => args[0] * args[1],
                "factorial" => fact(args[0]),
                _ => args[0].saturating_sub(1),
            };
            assert_eq!(expected, n(oracle), "{name} {args:?}");
            let mut trues = 0;
            for m in 0..=bound {
                let r = eval_sigma1(&instantiate(&f, &args, m), DEFAULT_BUDGET).unwrap();
                assert_ne!(r, TriBool::Unknown, "{name} {args:?} {m}");
                if r == TriBool::True {
                    assert_eq!(m, oracle, "{name} {args:?}");
                    trues += 1;
                }
            }
            assert_eq!(trues, 1, "{name} {args:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn beta_find_round_trips(seq in prop::collection::vec(0u64..1000, 1..7)) {
        let big: Vec<BigUint> = seq.iter().map(|v| n(*v)).collect();
        let p = beta_find(&big);
        for (i, v) in seq.iter().enumerate() {
            prop_assert_eq!(beta(&p.a, &p.b, &n(i as u64)), n(*v));
        }
    }

    #[test]
    fn random_codes_are_not_proofs(m in prop::collection::vec(0u8..64, 1..40)) {
        let m = BigUint::from_radix_be(&m, 64).unwrap();
        let k = encode_formula(four_line().conclusion().unwrap()).value;
        prop_assert_eq!(prf_eval(&k, &m), m == encode_proof(&four_line()).unwrap().value);
    }
}
