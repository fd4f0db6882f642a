//! A sound, incomplete test for first-order consequence.
//!
//! Formulas are normalised (`(Ex)F` becomes `~(Ax)~F`, `E!` is expanded,
//! double negations drop, bound variables get canonical names) and then
//! checked propositionally with quantified subformulas as atoms. A few rounds
//! of universal instantiation, existential witnessing, generalisation,
//! implication introduction and equality rewriting are tried on top.

use std::collections::{BTreeSet, HashMap};

use crate::syntax::{expand_exists_unique, Formula, Term};

const DEPTH: usize = 3;
const MAX_ATOMS: usize = 20;

/// Whether `goal` follows from `premises` in first-order logic with equality.
/// Free variables in `fixed` may not be generalised.
pub fn entails(premises: &[Formula], goal: &Formula, fixed: &BTreeSet<String>) -> bool {
    let prems: Vec<Formula> = premises.iter().map(normalize).collect();
    let goal = normalize(goal);
    let mut fixed = fixed.clone();
    search(prems, goal, &mut fixed, DEPTH)
}

/// Whether `f` is a logical truth.
pub fn valid(f: &Formula) -> bool {
    entails(&[], f, &BTreeSet::new())
}

pub fn normalize(f: &Formula) -> Formula {
    canonical(&simplify(f), &mut 0)
}

fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::Eq(..) | Formula::Leq(..) | Formula::Rel(..) => f.clone(),
        Formula::Not(g) => match simplify(g) {
            Formula::Not(h) => *h,
            g => Formula::not(g),
        },
        Formula::Imp(a, b) => Formula::imp(simplify(a), simplify(b)),
        Formula::And(a, b) => Formula::and(simplify(a), simplify(b)),
        Formula::Or(a, b) => Formula::or(simplify(a), simplify(b)),
        Formula::Iff(a, b) => Formula::iff(simplify(a), simplify(b)),
        Formula::Forall(x, g) => Formula::forall(x, simplify(g)),
        Formula::Exists(x, g) => {
            let body = match simplify(g) {
                Formula::Not(h) => *h,
                h => Formula::not(h),
            };
            Formula::not(Formula::forall(x, body))
        }
        Formula::ExistsUnique(x, g) => simplify(&expand_exists_unique(x, g)),
    }
}

/// Rename bound variables to `$0`, `$1`, .. by binding depth.
fn canonical(f: &Formula, depth: &mut usize) -> Formula {
    match f {
        Formula::Eq(..) | Formula::Leq(..) | Formula::Rel(..) => f.clone(),
        Formula::Not(g) => Formula::not(canonical(g, depth)),
        Formula::Imp(a, b) => Formula::imp(canonical(a, depth), canonical(b, depth)),
        Formula::And(a, b) => Formula::and(canonical(a, depth), canonical(b, depth)),
        Formula::Or(a, b) => Formula::or(canonical(a, depth), canonical(b, depth)),
        Formula::Iff(a, b) => Formula::iff(canonical(a, depth), canonical(b, depth)),
        Formula::Forall(x, g) | Formula::Exists(x, g) | Formula::ExistsUnique(x, g) => {
            let name = format!("${depth}");
            *depth += 1;
            let body = canonical(&g.substitute(x, &Term::Var(name.clone())), depth);
            *depth -= 1;
            match f {
                Formula::Forall(..) => Formula::forall(&name, body),
                Formula::Exists(..) => Formula::exists(&name, body),
                _ => Formula::exists_unique(&name, body),
            }
        }
    }
}

fn fresh(avoid: &BTreeSet<String>) -> String {
    (0..)
        .map(|i| format!("v'{i}"))
        .find(|v| !avoid.contains(v))
        .expect("unbounded supply of names")
}

fn all_vars(fs: &[&Formula]) -> BTreeSet<String> {
    fs.iter().flat_map(|f| f.all_variables()).collect()
}

fn candidates(prems: &[Formula], goal: &Formula) -> Vec<Term> {
    let mut out = BTreeSet::new();
    let mut add = |t: &Term| {
        out.insert(t.clone());
    };
    for f in prems.iter().chain(std::iter::once(goal)) {
        f.visit_terms(&mut |t| collect_subterms(t, &mut add));
    }
    out.insert(Term::Num(0u32.into()));
    out.into_iter()
        .filter(|t| !t.vars().iter().any(|v| v.starts_with('$')))
        .collect()
}

fn collect_subterms(t: &Term, add: &mut impl FnMut(&Term)) {
    add(t);
    if let Term::Add(a, b) | Term::Mul(a, b) = t {
        collect_subterms(a, add);
        collect_subterms(b, add);
    }
}

fn search(
    mut prems: Vec<Formula>,
    goal: Formula,
    fixed: &mut BTreeSet<String>,
    depth: usize,
) -> bool {
    if tautology(&prems, &goal) {
        return true;
    }
    match &goal {
        Formula::Imp(a, b) => {
            let (a, b) = ((**a).clone(), (**b).clone());
            let added: Vec<String> = a
                .free_variables()
                .into_iter()
                .filter(|v| fixed.insert(v.clone()))
                .collect();
            let ok = match equation_var(&a) {
                Some((x, t)) => {
                    let prems2: Vec<Formula> = prems
                        .iter()
                        .map(|p| normalize(&p.substitute(&x, &t)))
                        .collect();
                    search(prems2, normalize(&b.substitute(&x, &t)), fixed, depth)
                }
                None => {
                    let mut prems2 = prems.clone();
                    prems2.push(a);
                    search(prems2, b, fixed, depth)
                }
            };
            for v in added {
                fixed.remove(&v);
            }
            if ok {
                return true;
            }
        }
        Formula::Or(a, b) => {
            let goal2 = normalize(&Formula::imp(Formula::not((**a).clone()), (**b).clone()));
            if search(prems.clone(), goal2, fixed, depth) {
                return true;
            }
        }
        Formula::Forall(x, body) => {
            let mut refs: Vec<&Formula> = prems.iter().collect();
            refs.push(&goal);
            let mut avoid = all_vars(&refs);
            avoid.extend(fixed.iter().cloned());
            let v = fresh(&avoid);
            let inst = normalize(&body.substitute(x, &Term::Var(v.clone())));
            fixed.insert(v.clone());
            let ok = search(prems.clone(), inst, fixed, depth);
            fixed.remove(&v);
            if ok {
                return true;
            }
        }
        _ => {}
    }
    if depth == 0 {
        return false;
    }
    if let Some((prems2, goal2, witnesses)) = decompose(&prems, &goal, fixed) {
        fixed.extend(witnesses.iter().cloned());
        let ok = search(prems2, goal2, fixed, depth);
        for w in witnesses {
            fixed.remove(&w);
        }
        return ok;
    }
    if let Some(i) = prems.iter().position(|p| matches!(p, Formula::Or(..))) {
        let mut rest = prems.clone();
        let Formula::Or(a, b) = rest.remove(i) else {
            unreachable!()
        };
        return [*a, *b].into_iter().all(|case| {
            let mut ps = rest.clone();
            ps.push(case);
            search(ps, goal.clone(), fixed, depth - 1)
        });
    }
    let terms = candidates(&prems, &goal);
    let mut instances = Vec::new();
    for p in &prems {
        if let Formula::Forall(x, body) = p {
            for t in &terms {
                instances.push(normalize(&body.substitute(x, t)));
            }
        }
        for y in p.free_variables() {
            if fixed.contains(&y) || y.starts_with('$') {
                continue;
            }
            for t in &terms {
                instances.push(normalize(&p.substitute(&y, t)));
            }
        }
    }
    instances.retain(|i| !prems.contains(i));
    let grew = !instances.is_empty();
    prems.extend(instances);
    if let Formula::Not(g) = &goal {
        if let Formula::Forall(x, body) = &**g {
            for t in &terms {
                let witness = normalize(&Formula::not(body.substitute(x, t)));
                if search(prems.clone(), witness, fixed, depth - 1) {
                    return true;
                }
            }
        }
    }
    grew && search(prems, goal, fixed, depth - 1)
}

/// Split conjunctive premises, open existential premises with fresh
/// witnesses, and rewrite by a premise `x = t`. `None` if nothing changes.
fn decompose(
    prems: &[Formula],
    goal: &Formula,
    fixed: &BTreeSet<String>,
) -> Option<(Vec<Formula>, Formula, Vec<String>)> {
    let mut refs: Vec<&Formula> = prems.iter().collect();
    refs.push(goal);
    let mut avoid = all_vars(&refs);
    avoid.extend(fixed.iter().cloned());
    let mut out = Vec::new();
    let mut witnesses = Vec::new();
    let mut changed = false;
    let mut stack: Vec<Formula> = prems.iter().rev().cloned().collect();
    while let Some(p) = stack.pop() {
        match p {
            Formula::And(a, b) => {
                stack.push(*b);
                stack.push(*a);
                changed = true;
            }
            Formula::Not(ref g) if matches!(&**g, Formula::Forall(..)) => {
                let Formula::Forall(x, body) = &**g else {
                    unreachable!()
                };
                let w = fresh(&avoid);
                avoid.insert(w.clone());
                stack.push(normalize(&Formula::not(
                    body.substitute(x, &Term::Var(w.clone())),
                )));
                witnesses.push(w);
                changed = true;
            }
            p => {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    let mut goal = goal.clone();
    let occurs = |x: &str, out: &[Formula], goal: &Formula| {
        goal.free_variables().contains(x)
            || out
                .iter()
                .filter(|p| equation_var(p).is_none_or(|(y, _)| y != x))
                .any(|p| p.free_variables().contains(x))
    };
    let rewrite = out
        .iter()
        .filter_map(equation_var)
        .find(|(x, _)| occurs(x, &out, &goal));
    if let Some((x, t)) = rewrite {
        let eq = Formula::Eq(Term::Var(x.clone()), t.clone());
        out = out
            .iter()
            .map(|p| normalize(&p.substitute(&x, &t)))
            .filter(|p| !matches!(p, Formula::Eq(a, b) if a == b))
            .collect();
        out.retain(|p| p != &eq);
        out.push(eq);
        goal = normalize(&goal.substitute(&x, &t));
        changed = true;
    }
    changed.then_some((out, goal, witnesses))
}

/// `x = t` or `t = x` with `x` a variable not occurring in `t`.
fn equation_var(f: &Formula) -> Option<(String, Term)> {
    let Formula::Eq(a, b) = f else { return None };
    match (a, b) {
        (Term::Var(x), t) | (t, Term::Var(x)) if !t.contains_var(x) && !x.starts_with('$') => {
            Some((x.clone(), t.clone()))
        }
        _ => None,
    }
}

struct Atoms {
    index: HashMap<Formula, usize>,
    fixed: HashMap<usize, bool>,
}

impl Atoms {
    fn collect(&mut self, f: &Formula) {
        match f {
            Formula::Not(g) => self.collect(g),
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                self.collect(a);
                self.collect(b);
            }
            _ => {
                if !self.index.contains_key(f) {
                    let i = self.index.len();
                    self.index.insert(f.clone(), i);
                    if let Some(v) = atom_value(f) {
                        self.fixed.insert(i, v);
                    }
                }
            }
        }
    }

    fn eval(&self, f: &Formula, bits: u64) -> bool {
        match f {
            Formula::Not(g) => !self.eval(g, bits),
            Formula::Imp(a, b) => !self.eval(a, bits) || self.eval(b, bits),
            Formula::And(a, b) => self.eval(a, bits) && self.eval(b, bits),
            Formula::Or(a, b) => self.eval(a, bits) || self.eval(b, bits),
            Formula::Iff(a, b) => self.eval(a, bits) == self.eval(b, bits),
            _ => bits >> self.index[f] & 1 == 1,
        }
    }
}

/// Truth value of an atom that holds or fails in every model of PA.
fn atom_value(f: &Formula) -> Option<bool> {
    match f {
        Formula::Eq(a, b) if a == b => Some(true),
        Formula::Leq(a, b) if a == b => Some(true),
        Formula::Eq(a, b) => Some(a.eval()? == b.eval()?),
        Formula::Leq(a, b) => Some(a.eval()? <= b.eval()?),
        _ => None,
    }
}

/// Propositional validity of `prems => goal` over the atoms.
pub fn tautology(prems: &[Formula], goal: &Formula) -> bool {
    let mut atoms = Atoms {
        index: HashMap::new(),
        fixed: HashMap::new(),
    };
    for f in prems.iter().chain(std::iter::once(goal)) {
        atoms.collect(f);
    }
    let n = atoms.index.len();
    if n > MAX_ATOMS {
        return false;
    }
    let mut base = 0u64;
    for (&i, &v) in &atoms.fixed {
        if v {
            base |= 1 << i;
        }
    }
    let free: Vec<usize> = (0..n).filter(|i| !atoms.fixed.contains_key(i)).collect();
    (0..1u64 << free.len()).all(|mask| {
        let mut bits = base;
        for (k, &i) in free.iter().enumerate() {
            if mask >> k & 1 == 1 {
                bits |= 1 << i;
            }
        }
        !prems.iter().all(|p| atoms.eval(p, bits)) || atoms.eval(goal, bits)
    })
}
