use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::syntax::{Formula, Term};

/// Primitive recursive function descriptions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PRDef {
    /// The constant zero of the given arity.
    Zero(usize),
    Succ,
    /// `Proj(k, i)`: the `i`-th (1-based) of `k` arguments.
    Proj(usize, usize),
    /// `Comp(h, [g1..gm])`: `h(g1(x), .., gm(x))`.
    Comp(Box<PRDef>, Vec<PRDef>),
    /// `PrimRec(g, h)`: `f(x, 0) = g(x)`, `f(x, n+1) = h(x, n, f(x, n))`.
    PrimRec(Box<PRDef>, Box<PRDef>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ill-formed definition: {0}")]
pub struct PRError(pub String);

impl PRDef {
    pub fn comp(h: PRDef, gs: Vec<PRDef>) -> PRDef {
        PRDef::Comp(Box::new(h), gs)
    }

    pub fn prim_rec(g: PRDef, h: PRDef) -> PRDef {
        PRDef::PrimRec(Box::new(g), Box::new(h))
    }

    /// The arity, checking consistency at every node.
    pub fn arity(&self) -> Result<usize, PRError> {
        match self {
            PRDef::Zero(k) => Ok(*k),
            PRDef::Succ => Ok(1),
            PRDef::Proj(k, i) => {
                if (1..=*k).contains(i) {
                    Ok(*k)
                } else {
                    Err(PRError(format!("projection {i} of {k}")))
                }
            }
            PRDef::Comp(h, gs) => {
                if h.arity()? != gs.len() {
                    return Err(PRError(format!(
                        "outer function takes {} arguments, {} given",
                        h.arity()?,
                        gs.len()
                    )));
                }
                let Some(first) = gs.first() else {
                    return Err(PRError(
                        "composition needs at least one inner function".into(),
                    ));
                };
                let k = first.arity()?;
                for g in gs {
                    if g.arity()? != k {
                        return Err(PRError("inner functions disagree on arity".into()));
                    }
                }
                Ok(k)
            }
            PRDef::PrimRec(g, h) => {
                let k = g.arity()?;
                if h.arity()? != k + 2 {
                    return Err(PRError(format!(
                        "step function must take {} arguments, takes {}",
                        k + 2,
                        h.arity()?
                    )));
                }
                Ok(k + 1)
            }
        }
    }

    pub fn eval(&self, args: &[BigUint]) -> BigUint {
        match self {
            PRDef::Zero(_) => BigUint::zero(),
            PRDef::Succ => &args[0] + 1u32,
            PRDef::Proj(_, i) => args[i - 1].clone(),
            PRDef::Comp(h, gs) => {
                let inner: Vec<BigUint> = gs.iter().map(|g| g.eval(args)).collect();
                h.eval(&inner)
            }
            PRDef::PrimRec(g, h) => {
                let (xs, n) = args.split_at(args.len() - 1);
                let mut acc = g.eval(xs);
                let mut i = BigUint::zero();
                while i < n[0] {
                    let mut hargs = xs.to_vec();
                    hargs.push(i.clone());
                    hargs.push(acc);
                    acc = h.eval(&hargs);
                    i += 1u32;
                }
                acc
            }
        }
    }
}

impl fmt::Display for PRDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PRDef::Zero(k) => write!(f, "Z{k}"),
            PRDef::Succ => write!(f, "S"),
            PRDef::Proj(k, i) => write!(f, "P{k}_{i}"),
            PRDef::Comp(h, gs) => {
                write!(f, "C({h}")?;
                for g in gs {
                    write!(f, ", {g}")?;
                }
                write!(f, ")")
            }
            PRDef::PrimRec(g, h) => write!(f, "R({g}, {h})"),
        }
    }
}

pub fn successor() -> PRDef {
    PRDef::Succ
}

pub fn addition() -> PRDef {
    PRDef::prim_rec(
        PRDef::Proj(1, 1),
        PRDef::comp(PRDef::Succ, vec![PRDef::Proj(3, 3)]),
    )
}

pub fn multiplication() -> PRDef {
    PRDef::prim_rec(
        PRDef::Zero(1),
        PRDef::comp(addition(), vec![PRDef::Proj(3, 3), PRDef::Proj(3, 1)]),
    )
}

pub fn factorial() -> PRDef {
    PRDef::prim_rec(
        PRDef::comp(PRDef::Succ, vec![PRDef::Zero(0)]),
        PRDef::comp(
            multiplication(),
            vec![
                PRDef::comp(PRDef::Succ, vec![PRDef::Proj(2, 1)]),
                PRDef::Proj(2, 2),
            ],
        ),
    )
}

pub fn predecessor() -> PRDef {
    PRDef::prim_rec(PRDef::Zero(0), PRDef::Proj(2, 1))
}

/// The named catalogue used by the CLI and the tests.
pub fn catalogue() -> Vec<(&'static str, PRDef)> {
    vec![
        ("successor", successor()),
        ("addition", addition()),
        ("multiplication", multiplication()),
        ("factorial", factorial()),
        ("predecessor", predecessor()),
    ]
}

pub fn lookup(name: &str) -> Option<PRDef> {
    catalogue()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, d)| d)
}

/// Argument variables of a compiled formula: `x1..xk`.
pub fn arg_var(i: usize) -> String {
    format!("x{i}")
}

pub const RESULT_VAR: &str = "y";

/// `beta(a, b, i) = r` as the formula `(Eq)((a = ((q*M)+r)) & ((r+1) =< M))`
/// with `M = (1+((i+1)*b))`.
pub fn beta_formula(a: &str, b: &str, q: &str, i: Term, r: Term) -> Formula {
    let one = || Term::Num(BigUint::one());
    let m = Term::add(one(), Term::mul(Term::add(i, one()), Term::Var(b.into())));
    Formula::exists(
        q,
        Formula::and(
            Formula::Eq(
                Term::Var(a.into()),
                Term::add(Term::mul(Term::Var(q.into()), m.clone()), r.clone()),
            ),
            Formula::Leq(Term::add(r, one()), m),
        ),
    )
}

/// A formula `F(x1..xk, y)` over the pure arithmetical alphabet that holds
/// exactly when `y = f(x1..xk)`. Bound variables are `z1, z2, ..`.
pub fn compile_pr(d: &PRDef) -> Result<Formula, PRError> {
    let k = d.arity()?;
    let args: Vec<Term> = (1..=k).map(|i| Term::Var(arg_var(i))).collect();
    let mut c = Compiler { next: 0 };
    let mut f = c.compile(d, &args, &Term::Var(RESULT_VAR.into()));
    for i in (1..=k).rev() {
        let x = arg_var(i);
        if !f.is_free(&x) {
            f = Formula::and(Formula::Eq(Term::Var(x.clone()), Term::Var(x)), f);
        }
    }
    Ok(f)
}

struct Compiler {
    next: usize,
}

impl Compiler {
    fn fresh(&mut self) -> String {
        self.next += 1;
        format!("z{}", self.next)
    }

    fn compile(&mut self, d: &PRDef, args: &[Term], out: &Term) -> Formula {
        match d {
            PRDef::Zero(_) => Formula::Eq(out.clone(), Term::Num(BigUint::zero())),
            PRDef::Succ => Formula::Eq(
                out.clone(),
                Term::add(args[0].clone(), Term::Num(BigUint::one())),
            ),
            PRDef::Proj(_, i) => Formula::Eq(out.clone(), args[i - 1].clone()),
            PRDef::Comp(h, gs) => {
                let zs: Vec<String> = gs.iter().map(|_| self.fresh()).collect();
                let ztms: Vec<Term> = zs.iter().map(|z| Term::Var(z.clone())).collect();
                let mut body = self.compile(h, &ztms, out);
                for (g, z) in gs.iter().zip(&ztms).rev() {
                    body = Formula::and(self.compile(g, args, z), body);
                }
                zs.iter().rev().fold(body, |acc, z| Formula::exists(z, acc))
            }
            PRDef::PrimRec(g, h) => {
                let (xs, n) = args.split_at(args.len() - 1);
                let n = &n[0];
                let (a, b) = (self.fresh(), self.fresh());
                let one = || Term::Num(BigUint::one());

                let c0 = self.fresh();
                let q0 = self.fresh();
                let base = Formula::exists(
                    &c0,
                    Formula::and(
                        self.compile(g, xs, &Term::Var(c0.clone())),
                        beta_formula(
                            &a,
                            &b,
                            &q0,
                            Term::Num(BigUint::zero()),
                            Term::Var(c0.clone()),
                        ),
                    ),
                );

                let (w, c, c2) = (self.fresh(), self.fresh(), self.fresh());
                let (q1, q2) = (self.fresh(), self.fresh());
                let wt = Term::Var(w.clone());
                let mut hargs = xs.to_vec();
                hargs.push(wt.clone());
                hargs.push(Term::Var(c.clone()));
                let step_body = Formula::and(
                    Formula::and(
                        beta_formula(&a, &b, &q1, wt.clone(), Term::Var(c.clone())),
                        self.compile(h, &hargs, &Term::Var(c2.clone())),
                    ),
                    beta_formula(
                        &a,
                        &b,
                        &q2,
                        Term::add(wt.clone(), one()),
                        Term::Var(c2.clone()),
                    ),
                );
                let step = Formula::forall(
                    &w,
                    Formula::imp(
                        Formula::Leq(Term::add(wt, one()), n.clone()),
                        Formula::exists(&c, Formula::exists(&c2, step_body)),
                    ),
                );

                let q3 = self.fresh();
                let end = beta_formula(&a, &b, &q3, n.clone(), out.clone());
                Formula::exists(
                    &a,
                    Formula::exists(&b, Formula::and(Formula::and(base, step), end)),
                )
            }
        }
    }
}
