use std::collections::BTreeSet;
use std::sync::LazyLock;

use serde::Serialize;

use super::logic::entails;
use super::parse::Assumption;
use super::statement::Meta;
use crate::diagonal::{construct_builtin, Builtin};
use crate::syntax::{Formula, RelConst, Term};

#[derive(Debug, Clone, Serialize)]
pub struct Rule {
    pub name: &'static str,
    pub premises: Vec<&'static str>,
    pub conclusion: &'static str,
    pub basis: &'static str,
}

fn rule(
    name: &'static str,
    premises: &[&'static str],
    conclusion: &'static str,
    basis: &'static str,
) -> Rule {
    Rule {
        name,
        premises: premises.to_vec(),
        conclusion,
        basis,
    }
}

/// The rule catalogue. Object-level rules, the representation and
/// self-reference schemas, REC-COMPLETE-NEG and the consistency rules apply
/// pointwise under leading `forall`/`exists` binders and under a shared
/// meta-antecedent.
pub fn list_rules() -> Vec<Rule> {
    vec![
        rule("REP-SCHEMA-Q", &[], "forall k: forall m: Prov{| (q(#k, #m) <=> Q(#k, #m))}", "Q represents the proof relation q"),
        rule("REP-SCHEMA-S", &[], "forall k: forall m: Prov{| (s(#k, #m) <=> S(#k, #m))}", "S represents the refutation relation s"),
        rule("SELFREF-1", &[], "forall j: Prov{| (q(@p, #j) => @GUS)}", "a proof coded by j proves GUS"),
        rule("SELFREF-2", &[], "Prov{| @GUS} => exists j: Prov{| q(@p, #j)}", "a proof of GUS has a code"),
        rule("ROSSER-SELFREF-1", &[], "forall j: Prov{| (q(@u, #j) => @RUS)}", "a proof coded by j proves RUS"),
        rule("ROSSER-SELFREF-2", &[], "Prov{| @RUS} => exists j: Prov{| q(@u, #j)}", "a proof of RUS has a code"),
        rule("ROSSER-SELFREF-3", &[], "forall j: Prov{| (s(@u, #j) => ~@RUS)}", "a proof coded by j proves ~RUS"),
        rule("ROSSER-SELFREF-4", &[], "Prov{| ~@RUS} => exists j: Prov{| s(@u, #j)}", "a proof of ~RUS has a code"),
        rule("OBJ-MP", &["Prov{G| F}", "Prov{G| (F => H)}"], "Prov{G| H}", "modus ponens inside PA; `<=>` also accepted as the major premise"),
        rule("OBJ-LOGIC", &["Prov{G| F1} .. Prov{G| Fn}"], "Prov{G| H}", "H follows from F1..Fn and G in first-order logic with equality"),
        rule("OBJ-HYP", &[], "Prov{A| A}", "hypothesis introduction"),
        rule("OBJ-DEDUCTION", &["Prov{G; A| B}"], "Prov{G| (A => B)}", "the deduction theorem for object hypotheses"),
        rule("OBJ-BOUNDED", &["forall n: Prov{G| F(#n)}"], "Prov{G| (Az)((z =< t) => F(z))}", "every z =< t is one of finitely many numerals"),
        rule("META-HYP", &[], "A", "opens a meta-level hypothesis"),
        rule("META-DISCHARGE", &["B"], "A => B", "discharges the open hypothesis A"),
        rule("META-MP", &["A", "A => B"], "B", "modus ponens in the meta-theory"),
        rule("META-REDUCTIO", &["FALSE"], "NotProv{F}", "discharges the hypothesis Prov{| F}; the premises may instead be a pair that CONS, META-CONTRA or OMEGA refutes"),
        rule("META-CONTRA", &["Prov{| F}", "NotProv{F}"], "FALSE", "a statement and its denial"),
        rule("ALL-INTRO", &["A(#n)"], "forall n: A(#n)", "n must not occur in an open hypothesis"),
        rule("ALL-ELIM", &["forall n: A(#n)"], "A(t)", "instantiation"),
        rule("SOME-INTRO", &["A(t)"], "exists n: A(#n)", "witness introduction"),
        rule("SOME-ELIM", &["exists n: A(#n)"], "B", "the witness is fresh and must not occur in B"),
        rule("CONS", &["Prov{| F}", "Prov{| ~F}", "Consistent"], "FALSE", "consistency of PA"),
        rule("CONS-NOTPROV", &["Prov{| F}", "Consistent"], "NotProv{~F}", "consistency of PA"),
        rule("OMEGA", &["forall n: Prov{| F(#n)}", "Prov{| ~(Ax)F(x)}", "OmegaConsistent"], "FALSE", "omega-consistency of PA"),
        rule("REC-COMPLETE-NEG", &["NotProv{F}"], "Prov{| ~F}", "closed q, s, = and =< instances are decided by PA"),
    ]
}

pub fn is_known(name: &str) -> bool {
    RULE_NAMES.contains(name)
}

static RULE_NAMES: LazyLock<BTreeSet<&'static str>> =
    LazyLock::new(|| list_rules().into_iter().map(|r| r.name).collect());

struct Diagonal {
    gus: Formula,
    rus: Formula,
    p: Term,
    u: Term,
}

static DIAGONAL: LazyLock<Diagonal> = LazyLock::new(|| {
    let g = construct_builtin(Builtin::Gus);
    let r = construct_builtin(Builtin::Rus);
    Diagonal {
        gus: g.sentence,
        rus: r.sentence,
        p: Term::Num(g.code),
        u: Term::Num(r.code),
    }
});

/// Statement of a rule that is a single fixed meta-implication, if it is one.
pub fn fixed_axiom(name: &str) -> Option<Meta> {
    let d = &*DIAGONAL;
    let j = || Term::Meta("j".into());
    let code = |rel, sentence: Formula, n: &Term| {
        Meta::imp(
            Meta::prov([], sentence),
            Meta::some("j", Meta::prov([], Formula::Rel(rel, n.clone(), j()))),
        )
    };
    match name {
        "SELFREF-2" => Some(code(RelConst::LowerQ, d.gus.clone(), &d.p)),
        "ROSSER-SELFREF-2" => Some(code(RelConst::LowerQ, d.rus.clone(), &d.u)),
        "ROSSER-SELFREF-4" => Some(code(RelConst::LowerS, Formula::not(d.rus.clone()), &d.u)),
        _ => None,
    }
}

/// Whether `name` is checked pointwise under binders and meta-antecedents.
pub fn is_lifted(name: &str) -> bool {
    matches!(
        name,
        "REP-SCHEMA-Q"
            | "REP-SCHEMA-S"
            | "SELFREF-1"
            | "ROSSER-SELFREF-1"
            | "ROSSER-SELFREF-3"
            | "OBJ-MP"
            | "OBJ-LOGIC"
            | "OBJ-HYP"
            | "OBJ-DEDUCTION"
            | "ALL-INTRO"
            | "ALL-ELIM"
            | "SOME-INTRO"
            | "SOME-ELIM"
            | "CONS"
            | "CONS-NOTPROV"
            | "META-CONTRA"
            | "REC-COMPLETE-NEG"
    )
}

/// Premise count a lifted rule needs; `None` for any number.
pub fn arity(name: &str) -> Option<usize> {
    Some(match name {
        "OBJ-MP" | "CONS" | "META-CONTRA" | "OMEGA" | "META-MP" => 2,
        "OBJ-DEDUCTION" | "CONS-NOTPROV" | "REC-COMPLETE-NEG" | "ALL-INTRO" | "ALL-ELIM"
        | "SOME-INTRO" | "SOME-ELIM" | "OBJ-BOUNDED" | "META-DISCHARGE" => 1,
        "OBJ-LOGIC" | "META-REDUCTIO" => return None,
        _ => 0,
    })
}

/// The assumption a rule relies on, if any.
pub fn requires(name: &str) -> Option<Assumption> {
    match name {
        "CONS" | "CONS-NOTPROV" => Some(Assumption::Consistent),
        "OMEGA" => Some(Assumption::OmegaConsistent),
        _ => None,
    }
}

fn closed(t: &Term) -> bool {
    t.vars().is_empty()
}

fn superset(big: &[Formula], parts: &[&[Formula]]) -> bool {
    parts.iter().all(|p| p.iter().all(|f| big.contains(f)))
}

/// Check a lifted rule on bare premises and conclusion.
pub fn check_core(name: &str, ps: &[Meta], c: &Meta) -> bool {
    let d = &*DIAGONAL;
    match (name, ps, c) {
        ("REP-SCHEMA-Q" | "REP-SCHEMA-S", [], Meta::Prov(ctx, f)) if ctx.is_empty() => {
            let (lo, hi) = if name == "REP-SCHEMA-Q" {
                (RelConst::LowerQ, RelConst::UpperQ)
            } else {
                (RelConst::LowerS, RelConst::UpperS)
            };
            let Formula::Iff(l, r) = f else { return false };
            let pair = match (&**l, &**r) {
                (Formula::Not(l), Formula::Not(r)) => (&**l, &**r),
                (l, r) => (l, r),
            };
            matches!(pair, (Formula::Rel(a, x1, y1), Formula::Rel(b, x2, y2))
                if *a == lo && *b == hi && x1 == x2 && y1 == y2 && closed(x1) && closed(y1))
        }
        ("SELFREF-1" | "ROSSER-SELFREF-1" | "ROSSER-SELFREF-3", [], Meta::Prov(ctx, f))
            if ctx.is_empty() =>
        {
            let (rel, code, target) = match name {
                "SELFREF-1" => (RelConst::LowerQ, &d.p, d.gus.clone()),
                "ROSSER-SELFREF-1" => (RelConst::LowerQ, &d.u, d.rus.clone()),
                _ => (RelConst::LowerS, &d.u, Formula::not(d.rus.clone())),
            };
            matches!(f, Formula::Imp(a, b)
                if **b == target
                    && matches!(&**a, Formula::Rel(r, x, j) if *r == rel && x == code && closed(j)))
        }
        ("OBJ-MP", [a, b], Meta::Prov(ctx, g)) => {
            let mp = |a: &Meta, b: &Meta| {
                let (Meta::Prov(c1, f), Meta::Prov(c2, maj)) = (a, b) else {
                    return false;
                };
                let follows = match maj {
                    Formula::Imp(x, y) => **x == *f && **y == *g,
                    Formula::Iff(x, y) => (**x == *f && **y == *g) || (**y == *f && **x == *g),
                    _ => false,
                };
                follows && superset(ctx, &[c1, c2])
            };
            mp(a, b) || mp(b, a)
        }
        ("OBJ-LOGIC", _, Meta::Prov(ctx, g)) => {
            let mut prems: Vec<Formula> = ctx.clone();
            for p in ps {
                let Meta::Prov(c, f) = p else { return false };
                if !superset(ctx, &[c]) {
                    return false;
                }
                prems.push(f.clone());
            }
            let fixed = ctx.iter().flat_map(|f| f.free_variables()).collect();
            entails(&prems, g, &fixed)
        }
        ("OBJ-HYP", [], Meta::Prov(ctx, f)) => ctx.contains(f),
        ("OBJ-DEDUCTION", [Meta::Prov(c1, b)], Meta::Prov(ctx, g)) => {
            let Formula::Imp(a, b2) = g else { return false };
            let rest: Vec<Formula> = c1.iter().filter(|f| *f != &**a).cloned().collect();
            c1.contains(a) && **b2 == *b && rest == *ctx
        }
        ("ALL-INTRO" | "ALL-ELIM" | "SOME-INTRO" | "SOME-ELIM", [p], c) => p == c,
        ("CONS", [a, b], Meta::False) => {
            let contra = |a: &Meta, b: &Meta| {
                matches!((a, b), (Meta::Prov(c1, f), Meta::Prov(c2, nf))
                    if c1.is_empty() && c2.is_empty() && *nf == Formula::not(f.clone()))
            };
            contra(a, b) || contra(b, a)
        }
        ("CONS-NOTPROV", [Meta::Prov(c1, f)], Meta::NotProv(nf)) => {
            c1.is_empty() && *nf == Formula::not(f.clone())
        }
        ("META-CONTRA", [a, b], Meta::False) => {
            let contra = |a: &Meta, b: &Meta| matches!((a, b), (Meta::Prov(c1, f), Meta::NotProv(g)) if c1.is_empty() && f == g);
            contra(a, b) || contra(b, a)
        }
        ("REC-COMPLETE-NEG", [Meta::NotProv(f)], Meta::Prov(ctx, nf)) => {
            let decidable = match f {
                Formula::Rel(RelConst::LowerQ | RelConst::LowerS, a, b)
                | Formula::Eq(a, b)
                | Formula::Leq(a, b) => closed(a) && closed(b),
                _ => false,
            };
            decidable && ctx.is_empty() && *nf == Formula::not(f.clone())
        }
        _ => false,
    }
}

/// OMEGA on premises as written: `forall n: Prov{| F(#n)}` and `Prov{| ~(Ax)F(x)}`.
pub fn check_omega(ps: &[Meta]) -> bool {
    let omega = |a: &Meta, b: &Meta| {
        let Meta::AllNum(n, body) = a else {
            return false;
        };
        let (Meta::Prov(c1, f), Meta::Prov(c2, g)) = (&**body, b) else {
            return false;
        };
        let Formula::Not(all) = g else { return false };
        let Formula::Forall(x, inner) = &**all else {
            return false;
        };
        c1.is_empty() && c2.is_empty() && inner.substitute(x, &Term::Meta(n.clone())) == *f
    };
    matches!(ps, [a, b] if omega(a, b) || omega(b, a))
}

/// OBJ-BOUNDED on a premise as written and a bare conclusion.
pub fn check_bounded(p: &Meta, c: &Meta) -> bool {
    let Meta::AllNum(n, body) = p else {
        return false;
    };
    let (Meta::Prov(c1, f), Meta::Prov(c2, g)) = (&**body, c) else {
        return false;
    };
    let Formula::Forall(z, inner) = g else {
        return false;
    };
    let Formula::Imp(guard, h) = &**inner else {
        return false;
    };
    let Formula::Leq(zv, t) = &**guard else {
        return false;
    };
    c1 == c2
        && *zv == Term::Var(z.clone())
        && closed(t)
        && h.substitute(z, &Term::Meta(n.clone())) == *f
}
