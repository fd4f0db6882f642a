//! Budgeted evaluation of closed formulas in the standard model.
//!
//! The evaluator is a small constraint solver. Existential variables become
//! unknowns which are fixed by solving equations where possible and by
//! enumeration otherwise. Bounded universal quantifiers `(Aw)((w+k) =< t => F)`
//! are unfolded once `t` is known. A pair of existentials `(Ea)(Eb)` whose
//! variables occur only as the `a` and `b` of beta-function atoms is read as a
//! finite sequence: since every finite sequence has a beta code, the pair
//! exists exactly when the sequence constraints are consistent, so entries are
//! filled in and checked instead of searching for `a` and `b`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use super::relations::diag_rel_eval;
use crate::syntax::{expand_exists_unique, Formula, RelConst, Term};

pub const DEFAULT_BUDGET: u64 = 10_000;

/// Hard cap on solver steps per top-level call.
const STEP_LIMIT: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TriBool {
    True,
    False,
    Unknown,
}

impl TriBool {
    pub fn as_str(self) -> &'static str {
        match self {
            TriBool::True => "true",
            TriBool::False => "false",
            TriBool::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("formula is not closed; free variables: {}", .0.join(", "))]
    NotClosed(Vec<String>),
}

#[derive(Debug, Clone)]
enum Node {
    Eq(Term, Term),
    Leq(Term, Term),
    Rel(RelConst, Term, Term),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Imp(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    Forall(String, Box<Node>),
    Exists(String, Box<Node>),
    /// A pair of existentials read as one finite sequence.
    ExistsSeq(String, Box<Node>),
    /// `beta(a, b, idx) = val`. When `seq` names an enclosing sequence the
    /// atom reads entry `idx` of it; otherwise `plain` is evaluated.
    Beta {
        a: String,
        b: String,
        seq: Option<String>,
        idx: Term,
        val: Term,
        plain: Box<Node>,
    },
}

impl Node {
    fn free_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Node::Eq(s, t) | Node::Leq(s, t) | Node::Rel(_, s, t) => {
                s.collect_vars(out);
                t.collect_vars(out);
            }
            Node::Not(x) => x.free_vars(out),
            Node::And(x, y) | Node::Or(x, y) | Node::Imp(x, y) | Node::Iff(x, y) => {
                x.free_vars(out);
                y.free_vars(out);
            }
            Node::Forall(w, x) | Node::Exists(w, x) => {
                let mut inner = BTreeSet::new();
                x.free_vars(&mut inner);
                inner.remove(w);
                out.extend(inner);
            }
            Node::ExistsSeq(_, x) => x.free_vars(out),
            Node::Beta {
                seq,
                idx,
                val,
                plain,
                ..
            } => {
                if seq.is_some() {
                    idx.collect_vars(out);
                    val.collect_vars(out);
                } else {
                    plain.free_vars(out);
                }
            }
        }
    }

    fn has_seq_atom(&self) -> bool {
        match self {
            Node::Beta { seq, .. } => seq.is_some(),
            Node::Not(x) | Node::Forall(_, x) | Node::Exists(_, x) | Node::ExistsSeq(_, x) => {
                x.has_seq_atom()
            }
            Node::And(x, y) | Node::Or(x, y) | Node::Imp(x, y) | Node::Iff(x, y) => {
                x.has_seq_atom() || y.has_seq_atom()
            }
            _ => false,
        }
    }
}

fn rename_term(t: &Term, map: &HashMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Add(x, y) => Term::add(rename_term(x, map), rename_term(y, map)),
        Term::Mul(x, y) => Term::mul(rename_term(x, map), rename_term(y, map)),
        _ => t.clone(),
    }
}

fn rename_var(v: &str, map: &HashMap<String, Term>) -> String {
    match map.get(v) {
        Some(Term::Var(w)) => w.clone(),
        _ => v.to_string(),
    }
}

/// Copies of nodes with binders renamed apart, in a single traversal.
struct Renamer {
    next: usize,
}

impl Renamer {
    fn fresh(&mut self, base: &str) -> String {
        self.next += 1;
        let stem = base.split('#').next().unwrap_or(base);
        format!("{stem}#{}", self.next)
    }

    fn bind<T>(
        &mut self,
        v: &str,
        map: &mut HashMap<String, Term>,
        body: impl FnOnce(&mut Self, &mut HashMap<String, Term>) -> T,
    ) -> (String, T) {
        let w = self.fresh(v);
        let saved = map.insert(v.to_string(), Term::Var(w.clone()));
        let out = body(self, map);
        match saved {
            Some(old) => map.insert(v.to_string(), old),
            None => map.remove(v),
        };
        (w, out)
    }

    fn copy(&mut self, n: &Node, map: &mut HashMap<String, Term>) -> Node {
        let rt = |t: &Term, map: &HashMap<String, Term>| rename_term(t, map);
        match n {
            Node::Eq(s, t) => Node::Eq(rt(s, map), rt(t, map)),
            Node::Leq(s, t) => Node::Leq(rt(s, map), rt(t, map)),
            Node::Rel(k, s, t) => Node::Rel(*k, rt(s, map), rt(t, map)),
            Node::Not(x) => Node::Not(Box::new(self.copy(x, map))),
            Node::And(x, y) => Node::And(Box::new(self.copy(x, map)), Box::new(self.copy(y, map))),
            Node::Or(x, y) => Node::Or(Box::new(self.copy(x, map)), Box::new(self.copy(y, map))),
            Node::Imp(x, y) => Node::Imp(Box::new(self.copy(x, map)), Box::new(self.copy(y, map))),
            Node::Iff(x, y) => Node::Iff(Box::new(self.copy(x, map)), Box::new(self.copy(y, map))),
            Node::Forall(w, x) => {
                let (w2, b) = self.bind(w, map, |s, m| s.copy(x, m));
                Node::Forall(w2, Box::new(b))
            }
            Node::Exists(w, x) => {
                let (w2, b) = self.bind(w, map, |s, m| s.copy(x, m));
                Node::Exists(w2, Box::new(b))
            }
            Node::ExistsSeq(w, x) => {
                let (w2, b) = self.bind(w, map, |s, m| s.copy(x, m));
                Node::ExistsSeq(w2, Box::new(b))
            }
            Node::Beta {
                a,
                b,
                seq,
                idx,
                val,
                plain,
            } => Node::Beta {
                a: rename_var(a, map),
                b: rename_var(b, map),
                seq: seq.as_ref().map(|s| rename_var(s, map)),
                idx: rt(idx, map),
                val: rt(val, map),
                plain: Box::new(self.copy(plain, map)),
            },
        }
    }
}

struct Converter {
    names: Renamer,
}

impl Converter {
    /// Convert with every binder renamed apart; `map` renames bound variables.
    fn convert(&mut self, f: &Formula, map: &mut HashMap<String, Term>) -> Node {
        let rt = |t: &Term, map: &HashMap<String, Term>| rename_term(t, map);
        match f {
            Formula::Eq(s, t) => Node::Eq(rt(s, map), rt(t, map)),
            Formula::Leq(s, t) => Node::Leq(rt(s, map), rt(t, map)),
            Formula::Rel(k, s, t) => Node::Rel(*k, rt(s, map), rt(t, map)),
            Formula::Not(g) => Node::Not(Box::new(self.convert(g, map))),
            Formula::Imp(x, y) => Node::Imp(
                Box::new(self.convert(x, map)),
                Box::new(self.convert(y, map)),
            ),
            Formula::And(x, y) => Node::And(
                Box::new(self.convert(x, map)),
                Box::new(self.convert(y, map)),
            ),
            Formula::Or(x, y) => Node::Or(
                Box::new(self.convert(x, map)),
                Box::new(self.convert(y, map)),
            ),
            Formula::Iff(x, y) => Node::Iff(
                Box::new(self.convert(x, map)),
                Box::new(self.convert(y, map)),
            ),
            Formula::ExistsUnique(v, g) => self.convert(&expand_exists_unique(v, g), map),
            Formula::Forall(v, g) => {
                let (w, body) = self.bind(v, map, |c, m| c.convert(g, m));
                Node::Forall(w, Box::new(body))
            }
            Formula::Exists(v, g) => {
                if let Some(beta) = self.beta_atom(f, map) {
                    return beta;
                }
                let (w, body) = self.bind(v, map, |c, m| c.convert(g, m));
                if let Node::Exists(bv, inner) = &body {
                    if let Some(seq) = sequence_pair(&w, bv, inner) {
                        return seq;
                    }
                }
                Node::Exists(w, Box::new(body))
            }
        }
    }

    fn bind(
        &mut self,
        v: &str,
        map: &mut HashMap<String, Term>,
        body: impl FnOnce(&mut Self, &mut HashMap<String, Term>) -> Node,
    ) -> (String, Node) {
        let w = self.names.fresh(v);
        let saved = map.insert(v.to_string(), Term::Var(w.clone()));
        let out = body(self, map);
        match saved {
            Some(old) => map.insert(v.to_string(), old),
            None => map.remove(v),
        };
        (w, out)
    }

    /// Recognise `(Eq)((a = ((q*M)+r)) & ((r+1) =< M))`, `M = (1+((i+1)*b))`.
    fn beta_atom(&mut self, f: &Formula, map: &mut HashMap<String, Term>) -> Option<Node> {
        let Formula::Exists(q, body) = f else {
            return None;
        };
        let Formula::And(l, r) = &**body else {
            return None;
        };
        let Formula::Eq(Term::Var(a), rhs) = &**l else {
            return None;
        };
        let Term::Add(qm, val) = rhs else { return None };
        let Term::Mul(qv, m) = &**qm else { return None };
        if !matches!(&**qv, Term::Var(x) if x == q) {
            return None;
        }
        let Formula::Leq(Term::Add(val2, one), m2) = &**r else {
            return None;
        };
        if val2 != val || *m2 != **m || !is_one(one) {
            return None;
        }
        let Term::Add(one1, ib) = &**m else {
            return None;
        };
        let Term::Mul(i1, bv) = &**ib else {
            return None;
        };
        let Term::Add(idx, one2) = &**i1 else {
            return None;
        };
        let Term::Var(b) = &**bv else { return None };
        if !is_one(one1) || !is_one(one2) || a == q || b == q || a == b {
            return None;
        }
        if val.contains_var(q) || idx.contains_var(q) {
            return None;
        }
        let (w, inner) = self.bind(q, map, |c, m| c.convert(body, m));
        Some(Node::Beta {
            a: rename_var(a, map),
            b: rename_var(b, map),
            seq: None,
            idx: rename_term(idx, map),
            val: rename_term(val, map),
            plain: Box::new(Node::Exists(w, Box::new(inner))),
        })
    }
}

fn is_one(t: &Term) -> bool {
    matches!(t, Term::Num(n) if n.is_one())
}

/// If `a` and `b` occur in `body` only as the code pair of positive beta
/// atoms, the pair as a single sequence binder.
fn sequence_pair(a: &str, b: &str, body: &Node) -> Option<Node> {
    fn ok(n: &Node, a: &str, b: &str, positive: bool) -> bool {
        let clean = |t: &Term| !t.contains_var(a) && !t.contains_var(b);
        match n {
            Node::Eq(s, t) | Node::Leq(s, t) | Node::Rel(_, s, t) => clean(s) && clean(t),
            Node::Beta {
                a: a2,
                b: b2,
                idx,
                val,
                plain,
                ..
            } => {
                if a2 == a && b2 == b {
                    positive && clean(idx) && clean(val)
                } else {
                    ok(plain, a, b, positive)
                }
            }
            Node::Not(x) => ok(x, a, b, false),
            Node::Imp(x, y) => ok(x, a, b, false) && ok(y, a, b, positive),
            Node::Iff(x, y) => ok(x, a, b, false) && ok(y, a, b, false),
            Node::And(x, y) | Node::Or(x, y) => ok(x, a, b, positive) && ok(y, a, b, positive),
            Node::Forall(_, x) | Node::Exists(_, x) | Node::ExistsSeq(_, x) => {
                ok(x, a, b, positive)
            }
        }
    }
    fn mark(n: &Node, a: &str, b: &str) -> Node {
        let m = |x: &Node| Box::new(mark(x, a, b));
        match n {
            Node::Beta {
                a: a2,
                b: b2,
                idx,
                val,
                plain,
                seq,
            } => Node::Beta {
                a: a2.clone(),
                b: b2.clone(),
                seq: if a2 == a && b2 == b {
                    Some(a.to_string())
                } else {
                    seq.clone()
                },
                idx: idx.clone(),
                val: val.clone(),
                plain: m(plain),
            },
            Node::Not(x) => Node::Not(m(x)),
            Node::And(x, y) => Node::And(m(x), m(y)),
            Node::Or(x, y) => Node::Or(m(x), m(y)),
            Node::Imp(x, y) => Node::Imp(m(x), m(y)),
            Node::Iff(x, y) => Node::Iff(m(x), m(y)),
            Node::Forall(w, x) => Node::Forall(w.clone(), m(x)),
            Node::Exists(w, x) => Node::Exists(w.clone(), m(x)),
            Node::ExistsSeq(w, x) => Node::ExistsSeq(w.clone(), m(x)),
            other => other.clone(),
        }
    }
    ok(body, a, b, true).then(|| Node::ExistsSeq(a.to_string(), Box::new(mark(body, a, b))))
}

#[derive(Clone, Default)]
struct State {
    env: HashMap<String, BigUint>,
    seqs: HashMap<String, HashMap<BigUint, BigUint>>,
}

fn value(t: &Term, env: &HashMap<String, BigUint>) -> Option<BigUint> {
    match t {
        Term::Num(n) => Some(n.clone()),
        Term::Var(v) => env.get(v).cloned(),
        Term::Add(a, b) => Some(value(a, env)? + value(b, env)?),
        Term::Mul(a, b) => {
            let x = value(a, env)?;
            if x.is_zero() {
                return Some(x);
            }
            Some(x * value(b, env)?)
        }
        Term::Const(_) | Term::Meta(_) => None,
    }
}

/// `t` as `c0 + c1*u`, when `u` is the only unknown and occurs linearly.
fn linear(t: &Term, u: &str, env: &HashMap<String, BigUint>) -> Option<(BigUint, BigUint)> {
    match t {
        Term::Var(v) if v == u => Some((BigUint::zero(), BigUint::one())),
        Term::Add(a, b) => {
            let (a0, a1) = linear(a, u, env)?;
            let (b0, b1) = linear(b, u, env)?;
            Some((a0 + b0, a1 + b1))
        }
        Term::Mul(a, b) => {
            let (a0, a1) = linear(a, u, env)?;
            let (b0, b1) = linear(b, u, env)?;
            if !a1.is_zero() && !b1.is_zero() {
                return None;
            }
            Some((&a0 * &b0, a1 * &b0 + b1 * &a0))
        }
        _ => value(t, env).map(|v| (v, BigUint::zero())),
    }
}

fn unknowns(t: &Term, env: &HashMap<String, BigUint>) -> BTreeSet<String> {
    t.vars()
        .into_iter()
        .filter(|v| !env.contains_key(v))
        .collect()
}

enum Step {
    Done,
    Fail,
    Unknown,
    Wait,
    Replace(Vec<Node>),
}

struct Solver {
    budget: u64,
    steps: u64,
    names: Renamer,
}

fn combine_or(results: impl IntoIterator<Item = TriBool>) -> TriBool {
    let mut unknown = false;
    for r in results {
        match r {
            TriBool::True => return TriBool::True,
            TriBool::Unknown => unknown = true,
            TriBool::False => {}
        }
    }
    if unknown {
        TriBool::Unknown
    } else {
        TriBool::False
    }
}

impl Solver {
    fn determined(n: &Node, st: &State) -> bool {
        let mut vs = BTreeSet::new();
        n.free_vars(&mut vs);
        vs.iter().all(|v| st.env.contains_key(v)) && !n.has_seq_atom()
    }

    fn sub_eval(&mut self, n: &Node, st: &State) -> TriBool {
        self.solve(vec![n.clone()], st.clone())
    }

    fn step(&mut self, g: &Node, st: &mut State) -> Step {
        let truth = |b: bool| if b { Step::Done } else { Step::Fail };
        match g {
            Node::Eq(s, t) => {
                if let (Some(x), Some(y)) = (value(s, &st.env), value(t, &st.env)) {
                    return truth(x == y);
                }
                let (us, ut) = (unknowns(s, &st.env), unknowns(t, &st.env));
                let (side, other, u) = match (us.len(), ut.len()) {
                    (1, 0) => (s, t, us.into_iter().next().unwrap()),
                    (0, 1) => (t, s, ut.into_iter().next().unwrap()),
                    _ => return Step::Wait,
                };
                let (Some((c0, c1)), Some(v)) = (linear(side, &u, &st.env), value(other, &st.env))
                else {
                    return Step::Wait;
                };
                if c1.is_zero() {
                    return truth(c0 == v);
                }
                if v < c0 || !((&v - &c0) % &c1).is_zero() {
                    return Step::Fail;
                }
                st.env.insert(u, (v - c0) / c1);
                Step::Done
            }
            Node::Leq(s, t) => match (value(s, &st.env), value(t, &st.env)) {
                (Some(x), Some(y)) => truth(x <= y),
                _ => Step::Wait,
            },
            Node::Rel(k, s, t) => match (value(s, &st.env), value(t, &st.env)) {
                (Some(h), Some(j)) => truth(diag_rel_eval(*k, &h, &j)),
                _ => Step::Wait,
            },
            Node::Not(x) => {
                if !Self::determined(x, st) {
                    return Step::Wait;
                }
                match self.sub_eval(x, st) {
                    TriBool::True => Step::Fail,
                    TriBool::False => Step::Done,
                    TriBool::Unknown => Step::Unknown,
                }
            }
            Node::And(x, y) => Step::Replace(vec![(**x).clone(), (**y).clone()]),
            Node::Imp(x, y) => {
                if !Self::determined(x, st) {
                    return Step::Wait;
                }
                match self.sub_eval(x, st) {
                    TriBool::False => Step::Done,
                    TriBool::True => Step::Replace(vec![(**y).clone()]),
                    TriBool::Unknown => Step::Wait,
                }
            }
            Node::Iff(x, y) => {
                if !Self::determined(x, st) || !Self::determined(y, st) {
                    return Step::Wait;
                }
                match (self.sub_eval(x, st), self.sub_eval(y, st)) {
                    (TriBool::Unknown, _) | (_, TriBool::Unknown) => Step::Unknown,
                    (a, b) => truth(a == b),
                }
            }
            Node::Or(..) => Step::Wait,
            Node::Exists(_, x) => Step::Replace(vec![(**x).clone()]),
            Node::ExistsSeq(s, x) => {
                st.seqs.insert(s.clone(), HashMap::new());
                Step::Replace(vec![(**x).clone()])
            }
            Node::Forall(w, body) => self.bounded_forall(w, body, st),
            Node::Beta {
                seq: None, plain, ..
            } => Step::Replace(vec![(**plain).clone()]),
            Node::Beta {
                seq: Some(s),
                idx,
                val,
                ..
            } => {
                let Some(i) = value(idx, &st.env) else {
                    return Step::Wait;
                };
                let seq = st.seqs.get_mut(s).expect("sequence opened before use");
                if let Some(e) = seq.get(&i) {
                    return Step::Replace(vec![Node::Eq(val.clone(), Term::Num(e.clone()))]);
                }
                match value(val, &st.env) {
                    Some(v) => {
                        seq.insert(i, v);
                        Step::Done
                    }
                    None => Step::Wait,
                }
            }
        }
    }

    fn bounded_forall(&mut self, w: &str, body: &Node, st: &State) -> Step {
        let Node::Imp(guard, inner) = body else {
            return Step::Wait;
        };
        let Node::Leq(lhs, rhs) = &**guard else {
            return Step::Wait;
        };
        let offset = match lhs {
            Term::Var(v) if v == w => Some(BigUint::zero()),
            Term::Add(x, k) | Term::Add(k, x) if matches!(&**x, Term::Var(v) if v == w) => {
                value(k, &st.env)
            }
            _ => None,
        };
        let (Some(k), Some(bound)) = (offset, value(rhs, &st.env)) else {
            return Step::Wait;
        };
        if bound < k {
            return Step::Done;
        }
        let top = bound - k;
        if top >= BigUint::from(self.budget) {
            return Step::Unknown;
        }
        let top: u64 = top.try_into().expect("below the budget");
        let mut out = Vec::with_capacity(top as usize + 1);
        for i in 0..=top {
            let mut map = HashMap::from([(w.to_string(), Term::Num(BigUint::from(i)))]);
            out.push(self.names.copy(inner, &mut map));
        }
        Step::Replace(out)
    }

    fn solve(&mut self, goals: Vec<Node>, mut st: State) -> TriBool {
        let mut unknown = false;
        let mut waiting = goals;
        loop {
            self.steps += 1;
            if self.steps > STEP_LIMIT {
                return TriBool::Unknown;
            }
            if waiting.is_empty() {
                return if unknown {
                    TriBool::Unknown
                } else {
                    TriBool::True
                };
            }
            let mut work = std::mem::take(&mut waiting);
            work.reverse();
            let mut progressed = false;
            while let Some(g) = work.pop() {
                let g = match g {
                    Node::And(x, y) => {
                        work.push(*y);
                        work.push(*x);
                        progressed = true;
                        continue;
                    }
                    Node::Exists(_, x)
                    | Node::Beta {
                        seq: None,
                        plain: x,
                        ..
                    } => {
                        work.push(*x);
                        progressed = true;
                        continue;
                    }
                    Node::ExistsSeq(s, x) => {
                        st.seqs.insert(s, HashMap::new());
                        work.push(*x);
                        progressed = true;
                        continue;
                    }
                    g => g,
                };
                match self.step(&g, &mut st) {
                    Step::Done => progressed = true,
                    Step::Fail => return TriBool::False,
                    Step::Unknown => {
                        unknown = true;
                        progressed = true;
                    }
                    Step::Replace(new) => {
                        work.extend(new.into_iter().rev());
                        progressed = true;
                    }
                    Step::Wait => waiting.push(g),
                }
            }
            if progressed {
                continue;
            }
            let r = self.stuck(waiting, st);
            return match (r, unknown) {
                (TriBool::True, true) => TriBool::Unknown,
                (r, _) => r,
            };
        }
    }

    fn stuck(&mut self, goals: Vec<Node>, st: State) -> TriBool {
        if let Some(pos) = goals
            .iter()
            .position(|g| matches!(g, Node::Or(..) | Node::Imp(..) | Node::Iff(..)))
        {
            let mut rest = goals.clone();
            let g = rest.remove(pos);
            let alts = match g {
                Node::Or(x, y) => vec![*x, *y],
                Node::Imp(x, y) => vec![Node::Not(x), *y],
                Node::Iff(x, y) => vec![
                    Node::And(x.clone(), y.clone()),
                    Node::And(Box::new(Node::Not(x)), Box::new(Node::Not(y))),
                ],
                _ => unreachable!(),
            };
            let mut results = Vec::new();
            for alt in alts {
                let mut gs = rest.clone();
                gs.push(alt);
                let r = self.solve(gs, st.clone());
                if r == TriBool::True {
                    return r;
                }
                results.push(r);
            }
            return combine_or(results);
        }

        let mut vars = BTreeSet::new();
        for g in &goals {
            g.free_vars(&mut vars);
        }
        vars.retain(|v| !st.env.contains_key(v));
        if vars.is_empty() {
            return TriBool::Unknown;
        }
        let bounded = vars
            .iter()
            .filter_map(|v| upper_bound(v, &goals, &st).map(|b| (v.clone(), b)))
            .min_by(|x, y| x.1.cmp(&y.1));
        let (u, limit, exhaustive) = match bounded {
            Some((u, b)) if b < BigUint::from(self.budget) => {
                let b: u64 = b.try_into().expect("below the budget");
                (u, b + 1, true)
            }
            Some((u, _)) => (u, self.budget, false),
            None => (vars.iter().next().unwrap().clone(), self.budget, false),
        };
        let mut unknown = !exhaustive;
        for n in 0..limit {
            let mut st2 = st.clone();
            st2.env.insert(u.clone(), BigUint::from(n));
            match self.solve(goals.clone(), st2) {
                TriBool::True => return TriBool::True,
                TriBool::Unknown => unknown = true,
                TriBool::False => {}
            }
            if self.steps > STEP_LIMIT {
                return TriBool::Unknown;
            }
        }
        if unknown {
            TriBool::Unknown
        } else {
            TriBool::False
        }
    }
}

/// An upper bound on `u` from a pending goal `u =< t`, `(u+k) =< t` or `(k+u) =< t`.
fn upper_bound(u: &str, goals: &[Node], st: &State) -> Option<BigUint> {
    goals
        .iter()
        .filter_map(|g| {
            let Node::Leq(s, t) = g else { return None };
            let t = value(t, &st.env)?;
            let k = match s {
                Term::Var(v) if v == u => BigUint::zero(),
                Term::Add(x, k) | Term::Add(k, x) if matches!(&**x, Term::Var(v) if v == u) => {
                    value(k, &st.env)?
                }
                _ => return None,
            };
            Some(if t >= k { t - k } else { BigUint::zero() })
        })
        .min()
}

/// Evaluate a closed formula, searching at most `budget` candidates per
/// existential that is not fixed by an equation or a sequence constraint.
pub fn eval_sigma1(f: &Formula, budget: u64) -> Result<TriBool, EvalError> {
    let free = f.free_variables();
    if !free.is_empty() {
        return Err(EvalError::NotClosed(free.into_iter().collect()));
    }
    let mut conv = Converter {
        names: Renamer { next: 0 },
    };
    let node = conv.convert(f, &mut HashMap::new());
    let mut solver = Solver {
        budget: budget.max(1),
        steps: 0,
        names: conv.names,
    };
    Ok(solver.solve(vec![node], State::default()))
}
