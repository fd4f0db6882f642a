//! Recognition of axiom instances.
//!
//! Three families are recognised:
//!
//! * `PA1`..`PA6`, the arithmetical axioms, read as schemas over variables.
//! * `LAx1`..`LAx12`, the logical schemas: the three propositional Hilbert
//!   schemas, universal instantiation, distribution of `A` over `=>`, and the
//!   definitional schemas tying `<=>`, `&`, `v`, `E` and `E!` to the core
//!   connectives.
//! * `EqAx1`..`EqAx4`: reflexivity, substitutivity into atomic formulas,
//!   the definition of `=<`, and the unfolding `n+1 = (n + 1)` of numerals.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::syntax::{expand_exists_unique, parse_formula, Formula, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    Pa(u8),
    Logical(u8),
    Equality(u8),
}

pub const LOGICAL_SCHEMAS: u8 = 12;
pub const EQUALITY_SCHEMAS: u8 = 4;

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomId::Pa(k) => write!(f, "PA{k}"),
            AxiomId::Logical(k) => write!(f, "LAx{k}"),
            AxiomId::Equality(k) => write!(f, "EqAx{k}"),
        }
    }
}

impl FromStr for AxiomId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |rest: &str, max: u8| -> Result<u8, String> {
            match rest.parse::<u8>() {
                Ok(k) if (1..=max).contains(&k) => Ok(k),
                _ => Err(format!("unknown axiom `{s}`")),
            }
        };
        if let Some(rest) = s.strip_prefix("PA") {
            Ok(AxiomId::Pa(num(rest, 6)?))
        } else if let Some(rest) = s.strip_prefix("LAx") {
            Ok(AxiomId::Logical(num(rest, LOGICAL_SCHEMAS)?))
        } else if let Some(rest) = s.strip_prefix("EqAx") {
            Ok(AxiomId::Equality(num(rest, EQUALITY_SCHEMAS)?))
        } else {
            Err(format!("unknown axiom `{s}`"))
        }
    }
}

/// The six arithmetical axioms, written over the variables `x` and `y`.
pub static PA_AXIOMS: LazyLock<[Formula; 6]> = LazyLock::new(|| {
    [
        "~(0 = (x+1))",
        "~(x = y) => ~((x+1) = (y+1))",
        "(x+0) = x",
        "(x+(y+1)) = ((x+y)+1)",
        "(x*0) = 0",
        "(x*(y+1)) = ((x*y)+x)",
    ]
    .map(|s| parse_formula(s).expect("axiom text parses"))
});

pub fn pa_axiom(k: u8) -> &'static Formula {
    &PA_AXIOMS[usize::from(k) - 1]
}

/// First matching axiom id, trying arithmetical, then equality, then logical.
pub fn classify_axiom(f: &Formula) -> Option<AxiomId> {
    (1..=6)
        .map(AxiomId::Pa)
        .chain((1..=EQUALITY_SCHEMAS).map(AxiomId::Equality))
        .chain((1..=LOGICAL_SCHEMAS).map(AxiomId::Logical))
        .find(|id| is_instance(f, *id))
}

pub fn is_instance(f: &Formula, id: AxiomId) -> bool {
    match id {
        AxiomId::Pa(k) if (1..=6).contains(&k) => {
            let mut binding = HashMap::new();
            match_pa(pa_axiom(k), f, &mut binding)
        }
        AxiomId::Logical(k) => logical(f, k),
        AxiomId::Equality(k) => equality(f, k),
        AxiomId::Pa(_) => false,
    }
}

// Pattern variables of a PA axiom may only be instantiated by variables.
fn match_pa(pat: &Formula, f: &Formula, b: &mut HashMap<String, String>) -> bool {
    match (pat, f) {
        (Formula::Eq(a1, b1), Formula::Eq(a2, b2)) => {
            match_pa_term(a1, a2, b) && match_pa_term(b1, b2, b)
        }
        (Formula::Not(p), Formula::Not(g)) => match_pa(p, g, b),
        (Formula::Imp(p1, p2), Formula::Imp(g1, g2)) => match_pa(p1, g1, b) && match_pa(p2, g2, b),
        _ => false,
    }
}

fn match_pa_term(pat: &Term, t: &Term, b: &mut HashMap<String, String>) -> bool {
    match (pat, t) {
        (Term::Var(pv), Term::Var(v)) => match b.get(pv) {
            Some(bound) => bound == v,
            None => {
                b.insert(pv.clone(), v.clone());
                true
            }
        },
        (Term::Num(m), Term::Num(n)) => m == n,
        (Term::Add(p1, p2), Term::Add(t1, t2)) | (Term::Mul(p1, p2), Term::Mul(t1, t2)) => {
            match_pa_term(p1, t1, b) && match_pa_term(p2, t2, b)
        }
        _ => false,
    }
}

fn imp(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Imp(a, b) => Some((a, b)),
        _ => None,
    }
}

fn iff(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Iff(a, b) => Some((a, b)),
        _ => None,
    }
}

fn not(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Not(a) => Some(a),
        _ => None,
    }
}

fn logical(f: &Formula, k: u8) -> bool {
    let check = || -> Option<bool> {
        Some(match k {
            // A => (B => A)
            1 => {
                let (a, rest) = imp(f)?;
                let (_, a2) = imp(rest)?;
                a == a2
            }
            // (A => (B => C)) => ((A => B) => (A => C))
            2 => {
                let (l, r) = imp(f)?;
                let (a, bc) = imp(l)?;
                let (b, c) = imp(bc)?;
                let (ab, ac) = imp(r)?;
                let (a2, b2) = imp(ab)?;
                let (a3, c2) = imp(ac)?;
                a == a2 && a == a3 && b == b2 && c == c2
            }
            // (~B => ~A) => ((~B => A) => B)
            3 => {
                let (l, r) = imp(f)?;
                let (nb, na) = imp(l)?;
                let (nb_a, b3) = imp(r)?;
                let (nb2, a2) = imp(nb_a)?;
                let b = not(nb)?;
                let a = not(na)?;
                nb == nb2 && a == a2 && b == b3
            }
            // (Ax)B => B[t/x], t free for x in B
            4 => {
                let (l, r) = imp(f)?;
                match l {
                    Formula::Forall(x, body) => instantiates(body, x, r),
                    _ => false,
                }
            }
            // (Ax)(A => B) => (A => (Ax)B), x not free in A
            5 => {
                let (l, r) = imp(f)?;
                let Formula::Forall(x, inner) = l else {
                    return Some(false);
                };
                let (a, b) = imp(inner)?;
                let (a2, all_b) = imp(r)?;
                let Formula::Forall(x2, b2) = all_b else {
                    return Some(false);
                };
                a == a2 && x == x2 && **b2 == *b && !a.is_free(x)
            }
            // (A <=> B) => (A => B)
            6 => {
                let (l, r) = imp(f)?;
                let (a, b) = iff(l)?;
                let (a2, b2) = imp(r)?;
                a == a2 && b == b2
            }
            // (A <=> B) => (B => A)
            7 => {
                let (l, r) = imp(f)?;
                let (a, b) = iff(l)?;
                let (b2, a2) = imp(r)?;
                a == a2 && b == b2
            }
            // (A => B) => ((B => A) => (A <=> B))
            8 => {
                let (l, r) = imp(f)?;
                let (a, b) = imp(l)?;
                let (ba, a_iff_b) = imp(r)?;
                let (b2, a2) = imp(ba)?;
                let (a3, b3) = iff(a_iff_b)?;
                a == a2 && a == a3 && b == b2 && b == b3
            }
            // (A & B) <=> ~(A => ~B)
            9 => {
                let (l, r) = iff(f)?;
                let Formula::And(a, b) = l else {
                    return Some(false);
                };
                let (a2, nb) = imp(not(r)?)?;
                **a == *a2 && **b == *not(nb)?
            }
            // (A v B) <=> (~A => B)
            10 => {
                let (l, r) = iff(f)?;
                let Formula::Or(a, b) = l else {
                    return Some(false);
                };
                let (na, b2) = imp(r)?;
                **a == *not(na)? && **b == *b2
            }
            // (Ex)A <=> ~(Ax)~A
            11 => {
                let (l, r) = iff(f)?;
                let Formula::Exists(x, a) = l else {
                    return Some(false);
                };
                let Formula::Forall(x2, na) = not(r)? else {
                    return Some(false);
                };
                x == x2 && **a == *not(na)?
            }
            // (E!x)A <=> (Ex)(A & (Ay)(A[y/x] => (y = x)))
            12 => {
                let (l, r) = iff(f)?;
                let Formula::ExistsUnique(x, a) = l else {
                    return Some(false);
                };
                *r == expand_exists_unique(x, a)
            }
            _ => false,
        })
    };
    check().unwrap_or(false)
}

/// Whether `target` is `body[t/x]` for some term `t` free for `x` in `body`.
pub fn instantiates(body: &Formula, x: &str, target: &Formula) -> bool {
    let mut found: Option<Term> = None;
    if !walk_instance(body, target, x, &mut Vec::new(), &mut found) {
        return false;
    }
    match found {
        None => body == target,
        Some(t) => free_for(body, x, &t) && body.substitute(x, &t) == *target,
    }
}

fn walk_instance(
    b: &Formula,
    c: &Formula,
    x: &str,
    bound: &mut Vec<String>,
    found: &mut Option<Term>,
) -> bool {
    let terms = |t1: &Term, t2: &Term, bound: &Vec<String>, found: &mut Option<Term>| {
        walk_term(t1, t2, x, bound, found)
    };
    match (b, c) {
        (Formula::Eq(a1, b1), Formula::Eq(a2, b2))
        | (Formula::Leq(a1, b1), Formula::Leq(a2, b2)) => {
            terms(a1, a2, bound, found) && terms(b1, b2, bound, found)
        }
        (Formula::Rel(r1, a1, b1), Formula::Rel(r2, a2, b2)) => {
            r1 == r2 && terms(a1, a2, bound, found) && terms(b1, b2, bound, found)
        }
        (Formula::Not(f1), Formula::Not(f2)) => walk_instance(f1, f2, x, bound, found),
        (Formula::Imp(a1, b1), Formula::Imp(a2, b2))
        | (Formula::And(a1, b1), Formula::And(a2, b2))
        | (Formula::Or(a1, b1), Formula::Or(a2, b2))
        | (Formula::Iff(a1, b1), Formula::Iff(a2, b2)) => {
            walk_instance(a1, a2, x, bound, found) && walk_instance(b1, b2, x, bound, found)
        }
        (Formula::Forall(v1, f1), Formula::Forall(v2, f2))
        | (Formula::Exists(v1, f1), Formula::Exists(v2, f2))
        | (Formula::ExistsUnique(v1, f1), Formula::ExistsUnique(v2, f2)) => {
            if std::mem::discriminant(b) != std::mem::discriminant(c) || v1 != v2 {
                return false;
            }
            bound.push(v1.clone());
            let ok = walk_instance(f1, f2, x, bound, found);
            bound.pop();
            ok
        }
        _ => false,
    }
}

fn walk_term(t1: &Term, t2: &Term, x: &str, bound: &[String], found: &mut Option<Term>) -> bool {
    match t1 {
        Term::Var(v) if v == x && !bound.iter().any(|b| b == x) => match found {
            Some(t) => t == t2,
            None => {
                *found = Some(t2.clone());
                true
            }
        },
        Term::Add(a1, b1) => match t2 {
            Term::Add(a2, b2) => {
                walk_term(a1, a2, x, bound, found) && walk_term(b1, b2, x, bound, found)
            }
            _ => false,
        },
        Term::Mul(a1, b1) => match t2 {
            Term::Mul(a2, b2) => {
                walk_term(a1, a2, x, bound, found) && walk_term(b1, b2, x, bound, found)
            }
            _ => false,
        },
        _ => t1 == t2,
    }
}

/// No free occurrence of `x` in `f` lies within the scope of a quantifier
/// binding a variable of `t`.
pub fn free_for(f: &Formula, x: &str, t: &Term) -> bool {
    let tv = t.vars();
    fn go(f: &Formula, x: &str, tv: &std::collections::BTreeSet<String>, under: bool) -> bool {
        match f {
            Formula::Eq(..) | Formula::Leq(..) | Formula::Rel(..) => !under || !f.is_free(x),
            Formula::Not(g) => go(g, x, tv, under),
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                go(a, x, tv, under) && go(b, x, tv, under)
            }
            Formula::Forall(v, g) | Formula::Exists(v, g) | Formula::ExistsUnique(v, g) => {
                if v == x {
                    true
                } else {
                    go(g, x, tv, under || tv.contains(v))
                }
            }
        }
    }
    go(f, x, &tv, false)
}

fn equality(f: &Formula, k: u8) -> bool {
    match k {
        // t = t
        1 => matches!(f, Formula::Eq(a, b) if a == b),
        // (s = t) => (A => A'), A atomic, A' replaces some occurrences of s by t
        2 => {
            let Some((l, r)) = imp(f) else { return false };
            let Formula::Eq(s, t) = l else { return false };
            let Some((a, a2)) = imp(r) else { return false };
            leibniz_atomic(a, a2, s, t)
        }
        // (s =< t) <=> (Ew)((w + s) = t), w not in s or t
        3 => {
            let Some((l, r)) = iff(f) else { return false };
            let Formula::Leq(s, t) = l else { return false };
            let Formula::Exists(w, body) = r else {
                return false;
            };
            if s.contains_var(w) || t.contains_var(w) {
                return false;
            }
            **body == Formula::Eq(Term::add(Term::Var(w.clone()), s.clone()), t.clone())
        }
        // n = (m + 1) where n = m + 1
        4 => {
            let Formula::Eq(Term::Num(n), Term::Add(m, one)) = f else {
                return false;
            };
            let Term::Num(m) = &**m else { return false };
            matches!(&**one, Term::Num(o) if o.is_one()) && !n.is_zero() && *n == m + BigUint::one()
        }
        _ => false,
    }
}

fn leibniz_atomic(a: &Formula, a2: &Formula, s: &Term, t: &Term) -> bool {
    let ok = |x: &Term, y: &Term| replaces_some(x, y, s, t);
    match (a, a2) {
        (Formula::Eq(x1, y1), Formula::Eq(x2, y2))
        | (Formula::Leq(x1, y1), Formula::Leq(x2, y2)) => {
            std::mem::discriminant(a) == std::mem::discriminant(a2) && ok(x1, x2) && ok(y1, y2)
        }
        (Formula::Rel(r1, x1, y1), Formula::Rel(r2, x2, y2)) => {
            r1 == r2 && ok(x1, x2) && ok(y1, y2)
        }
        _ => false,
    }
}

fn replaces_some(u: &Term, u2: &Term, s: &Term, t: &Term) -> bool {
    if u == u2 {
        return true;
    }
    if u == s && u2 == t {
        return true;
    }
    match (u, u2) {
        (Term::Add(a1, b1), Term::Add(a2, b2)) | (Term::Mul(a1, b1), Term::Mul(a2, b2)) => {
            std::mem::discriminant(u) == std::mem::discriminant(u2)
                && replaces_some(a1, a2, s, t)
                && replaces_some(b1, b2, s, t)
        }
        _ => false,
    }
}
