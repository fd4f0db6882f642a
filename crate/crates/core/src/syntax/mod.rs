//! Terms and formulas of first-order arithmetic over `0`, `1`, `+`, `*`,
//! extended with `=<` and the binary relation constants `q`, `s`, `Q`, `S`.

mod parse;
mod render;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

pub use parse::{lex, parse_formula, parse_term, parse_tokens, Token};
pub use render::{render, render_term, tokens, tokens_term};

/// Numerals above this value are never expanded into `(..(0+1)..+1)` trees.
pub const DEFAULT_EXPANSION_THRESHOLD: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound symbol `{sym}` at {pos}")]
    Unbound { pos: usize, sym: String },
    #[error("numeral {value} exceeds the expansion threshold {threshold}")]
    ThresholdExceeded { value: BigUint, threshold: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// Atomic numeral node; `Num(3)` stands for `(((0+1)+1)+1)`.
    Num(BigUint),
    /// Individual constants `a`, `b`, `c`. Parsed, but never legal in a proof.
    Const(String),
    /// A meta-variable ranging over numerals; only meaningful inside meta-statements.
    Meta(String),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelConst {
    /// `q(x, y)`: x codes a one-variable formula H, y codes a proof of H(x).
    LowerQ,
    /// `s(x, y)`: as `q`, for proofs of ~H(x).
    LowerS,
    /// `Q`: the arithmetical representation of `q`.
    UpperQ,
    /// `S`: the arithmetical representation of `s`.
    UpperS,
}

impl RelConst {
    pub fn symbol(self) -> &'static str {
        match self {
            RelConst::LowerQ => "q",
            RelConst::LowerS => "s",
            RelConst::UpperQ => "Q",
            RelConst::UpperS => "S",
        }
    }

    pub fn from_symbol(sym: &str) -> Option<Self> {
        Some(match sym {
            "q" => RelConst::LowerQ,
            "s" => RelConst::LowerS,
            "Q" => RelConst::UpperQ,
            "S" => RelConst::UpperS,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(Term, Term),
    Leq(Term, Term),
    Rel(RelConst, Term, Term),
    Not(Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    ExistsUnique(String, Box<Formula>),
}

pub fn numeral(n: impl Into<BigUint>) -> Term {
    Term::Num(n.into())
}

pub fn var(name: &str) -> Term {
    Term::Var(name.to_string())
}

impl Term {
    pub fn add(l: Term, r: Term) -> Term {
        Term::Add(Box::new(l), Box::new(r))
    }

    pub fn mul(l: Term, r: Term) -> Term {
        Term::Mul(Box::new(l), Box::new(r))
    }

    /// Value under ordinary arithmetic; `None` if the term mentions a variable,
    /// constant or meta-variable.
    pub fn eval(&self) -> Option<BigUint> {
        match self {
            Term::Num(n) => Some(n.clone()),
            Term::Add(l, r) => Some(l.eval()? + r.eval()?),
            Term::Mul(l, r) => Some(l.eval()? * r.eval()?),
            Term::Var(_) | Term::Const(_) | Term::Meta(_) => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Num(_) => true,
            Term::Add(l, r) | Term::Mul(l, r) => l.is_ground() && r.is_ground(),
            _ => false,
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Add(l, r) | Term::Mul(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            _ => {}
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn contains_var(&self, v: &str) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::Add(l, r) | Term::Mul(l, r) => l.contains_var(v) || r.contains_var(v),
            _ => false,
        }
    }

    pub fn collect_metas(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Meta(m) => {
                out.insert(m.clone());
            }
            Term::Add(l, r) | Term::Mul(l, r) => {
                l.collect_metas(out);
                r.collect_metas(out);
            }
            _ => {}
        }
    }

    pub fn has_const_or_meta(&self) -> bool {
        match self {
            Term::Const(_) | Term::Meta(_) => true,
            Term::Add(l, r) | Term::Mul(l, r) => l.has_const_or_meta() || r.has_const_or_meta(),
            _ => false,
        }
    }

    pub fn subst_var(&self, v: &str, t: &Term) -> Term {
        match self {
            Term::Var(w) if w == v => t.clone(),
            Term::Add(l, r) => Term::add(l.subst_var(v, t), r.subst_var(v, t)),
            Term::Mul(l, r) => Term::mul(l.subst_var(v, t), r.subst_var(v, t)),
            other => other.clone(),
        }
    }

    pub fn subst_meta(&self, m: &str, t: &Term) -> Term {
        match self {
            Term::Meta(w) if w == m => t.clone(),
            Term::Add(l, r) => Term::add(l.subst_meta(m, t), r.subst_meta(m, t)),
            Term::Mul(l, r) => Term::mul(l.subst_meta(m, t), r.subst_meta(m, t)),
            other => other.clone(),
        }
    }

    /// Replace every numeral node by its `(..((0+1)+1)..)` tree.
    pub fn expand_numerals(&self, threshold: u64) -> Result<Term, SyntaxError> {
        match self {
            Term::Num(n) => expand_numeral(n, threshold),
            Term::Add(l, r) => Ok(Term::add(
                l.expand_numerals(threshold)?,
                r.expand_numerals(threshold)?,
            )),
            Term::Mul(l, r) => Ok(Term::mul(
                l.expand_numerals(threshold)?,
                r.expand_numerals(threshold)?,
            )),
            other => Ok(other.clone()),
        }
    }
}

/// `0`, `(0+1)`, `((0+1)+1)`, ... built from the primitive `0` and `1`.
pub fn expand_numeral(n: &BigUint, threshold: u64) -> Result<Term, SyntaxError> {
    if *n > BigUint::from(threshold) {
        return Err(SyntaxError::ThresholdExceeded {
            value: n.clone(),
            threshold,
        });
    }
    let steps: u64 = n.try_into().expect("bounded by threshold");
    let mut t = numeral(0u32);
    for _ in 0..steps {
        t = Term::add(t, numeral(1u32));
    }
    Ok(t)
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }
    pub fn forall(v: &str, f: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(f))
    }
    pub fn exists(v: &str, f: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(f))
    }
    pub fn exists_unique(v: &str, f: Formula) -> Formula {
        Formula::ExistsUnique(v.to_string(), Box::new(f))
    }
    pub fn rel(r: RelConst, a: Term, b: Term) -> Formula {
        Formula::Rel(r, a, b)
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut add_term = |t: &Term, bound: &Vec<String>| {
            for v in t.vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Eq(a, b) | Formula::Leq(a, b) | Formula::Rel(_, a, b) => {
                add_term(a, bound);
                add_term(b, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) | Formula::ExistsUnique(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_free(&self, v: &str) -> bool {
        self.free_variables().contains(v)
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| t.collect_vars(&mut out));
        self.visit_binders(&mut |v| {
            out.insert(v.to_string());
        });
        out
    }

    pub fn meta_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| t.collect_metas(&mut out));
        out
    }

    pub fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::Eq(a, b) | Formula::Leq(a, b) | Formula::Rel(_, a, b) => {
                f(a);
                f(b);
            }
            Formula::Not(g) => g.visit_terms(f),
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
            Formula::Forall(_, g) | Formula::Exists(_, g) | Formula::ExistsUnique(_, g) => {
                g.visit_terms(f)
            }
        }
    }

    fn visit_binders(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::Eq(..) | Formula::Leq(..) | Formula::Rel(..) => {}
            Formula::Not(g) => g.visit_binders(f),
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                a.visit_binders(f);
                b.visit_binders(f);
            }
            Formula::Forall(v, g) | Formula::Exists(v, g) | Formula::ExistsUnique(v, g) => {
                f(v);
                g.visit_binders(f);
            }
        }
    }

    /// True if no constant `a`, `b`, `c` and no meta-variable occurs.
    pub fn is_pure(&self) -> bool {
        let mut ok = true;
        self.visit_terms(&mut |t| ok &= !t.has_const_or_meta());
        ok
    }

    /// Capture-avoiding substitution of `t` for the free occurrences of `v`.
    pub fn substitute(&self, v: &str, t: &Term) -> Formula {
        let t_vars = t.vars();
        self.subst_inner(v, t, &t_vars)
    }

    fn subst_inner(&self, v: &str, t: &Term, t_vars: &BTreeSet<String>) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(a.subst_var(v, t), b.subst_var(v, t)),
            Formula::Leq(a, b) => Formula::Leq(a.subst_var(v, t), b.subst_var(v, t)),
            Formula::Rel(r, a, b) => Formula::Rel(*r, a.subst_var(v, t), b.subst_var(v, t)),
            Formula::Not(f) => Formula::not(f.subst_inner(v, t, t_vars)),
            Formula::Imp(a, b) => {
                Formula::imp(a.subst_inner(v, t, t_vars), b.subst_inner(v, t, t_vars))
            }
            Formula::And(a, b) => {
                Formula::and(a.subst_inner(v, t, t_vars), b.subst_inner(v, t, t_vars))
            }
            Formula::Or(a, b) => {
                Formula::or(a.subst_inner(v, t, t_vars), b.subst_inner(v, t, t_vars))
            }
            Formula::Iff(a, b) => {
                Formula::iff(a.subst_inner(v, t, t_vars), b.subst_inner(v, t, t_vars))
            }
            Formula::Forall(w, body)
            | Formula::Exists(w, body)
            | Formula::ExistsUnique(w, body) => {
                if w == v || !body.is_free(v) {
                    return self.clone();
                }
                let (w2, body2) = if t_vars.contains(w) {
                    let mut avoid = body.all_variables();
                    avoid.extend(t_vars.iter().cloned());
                    avoid.insert(v.to_string());
                    let fresh = fresh_var(w, &avoid);
                    (fresh.clone(), body.substitute(w, &Term::Var(fresh)))
                } else {
                    (w.clone(), (**body).clone())
                };
                let inner = Box::new(body2.subst_inner(v, t, t_vars));
                match self {
                    Formula::Forall(..) => Formula::Forall(w2, inner),
                    Formula::Exists(..) => Formula::Exists(w2, inner),
                    _ => Formula::ExistsUnique(w2, inner),
                }
            }
        }
    }

    /// Replace a meta-variable everywhere. Meta-variables are never bound by
    /// object quantifiers, so no renaming is needed unless `t` has variables.
    pub fn subst_meta(&self, m: &str, t: &Term) -> Formula {
        self.map_terms(&|x| x.subst_meta(m, t))
    }

    pub fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(f(a), f(b)),
            Formula::Leq(a, b) => Formula::Leq(f(a), f(b)),
            Formula::Rel(r, a, b) => Formula::Rel(*r, f(a), f(b)),
            Formula::Not(g) => Formula::not(g.map_terms(f)),
            Formula::Imp(a, b) => Formula::imp(a.map_terms(f), b.map_terms(f)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_terms(f), b.map_terms(f)),
            Formula::Forall(v, g) => Formula::Forall(v.clone(), Box::new(g.map_terms(f))),
            Formula::Exists(v, g) => Formula::Exists(v.clone(), Box::new(g.map_terms(f))),
            Formula::ExistsUnique(v, g) => {
                Formula::ExistsUnique(v.clone(), Box::new(g.map_terms(f)))
            }
        }
    }

    pub fn expand_numerals(&self, threshold: u64) -> Result<Formula, SyntaxError> {
        let mut first_err = None;
        self.visit_terms(&mut |t| {
            if first_err.is_none() {
                first_err = t.expand_numerals(threshold).err();
            }
        });
        if let Some(e) = first_err {
            return Err(e);
        }
        Ok(self.map_terms(&|t| t.expand_numerals(threshold).expect("checked above")))
    }
}

/// `(E!x)F` unfolds to `(Ex)(F & (Ay)(F[y/x] => (y = x)))` with `y` fresh.
pub fn expand_exists_unique(x: &str, body: &Formula) -> Formula {
    let mut avoid = body.all_variables();
    avoid.insert(x.to_string());
    let y = fresh_var(x, &avoid);
    let other = body.substitute(x, &Term::Var(y.clone()));
    Formula::exists(
        x,
        Formula::and(
            body.clone(),
            Formula::forall(
                &y,
                Formula::imp(other, Formula::Eq(Term::Var(y.clone()), var(x))),
            ),
        ),
    )
}

/// A variable name derived from `base` that is not in `avoid`.
pub fn fresh_var(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    let mut i = 1u64;
    loop {
        let cand = format!("{stem}{i}");
        if !avoid.contains(&cand) {
            return cand;
        }
        i += 1;
    }
}

pub fn is_zero(t: &Term) -> bool {
    matches!(t, Term::Num(n) if n.is_zero())
}

pub fn is_one(t: &Term) -> bool {
    matches!(t, Term::Num(n) if n.is_one())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_term(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}
