use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{render, Formula, Term};

/// A statement about provability in PA.
///
/// Meta-variables (`#r` inside formulas) range over numerals and are bound by
/// [`Meta::AllNum`] and [`Meta::SomeNum`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Meta {
    /// PA proves the formula from the object hypotheses; the context is sorted
    /// and free of duplicates.
    Prov(Vec<Formula>, Formula),
    NotProv(Formula),
    AllNum(String, Box<Meta>),
    SomeNum(String, Box<Meta>),
    Imp(Box<Meta>, Box<Meta>),
    Consistent,
    OmegaConsistent,
    False,
}

impl Meta {
    pub fn prov(ctx: impl IntoIterator<Item = Formula>, f: Formula) -> Meta {
        let mut ctx: Vec<Formula> = ctx.into_iter().collect();
        ctx.sort();
        ctx.dedup();
        Meta::Prov(ctx, f)
    }

    pub fn imp(a: Meta, b: Meta) -> Meta {
        Meta::Imp(Box::new(a), Box::new(b))
    }

    pub fn all(v: &str, m: Meta) -> Meta {
        Meta::AllNum(v.to_string(), Box::new(m))
    }

    pub fn some(v: &str, m: Meta) -> Meta {
        Meta::SomeNum(v.to_string(), Box::new(m))
    }

    /// Meta-variables occurring unbound.
    pub fn free_metas(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut add = |f: &Formula| {
            for m in f.meta_variables() {
                if !bound.contains(&m) {
                    out.insert(m);
                }
            }
        };
        match self {
            Meta::Prov(ctx, f) => {
                ctx.iter().for_each(&mut add);
                add(f);
            }
            Meta::NotProv(f) => add(f),
            Meta::AllNum(v, b) | Meta::SomeNum(v, b) => {
                bound.push(v.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Meta::Imp(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Meta::Consistent | Meta::OmegaConsistent | Meta::False => {}
        }
    }

    /// Every meta-variable name, bound or free.
    pub fn all_metas(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_formulas(&mut |f| out.extend(f.meta_variables()));
        self.visit_binders(&mut |v| {
            out.insert(v.to_string());
        });
        out
    }

    pub fn visit_formulas(&self, f: &mut impl FnMut(&Formula)) {
        match self {
            Meta::Prov(ctx, g) => {
                ctx.iter().for_each(&mut *f);
                f(g);
            }
            Meta::NotProv(g) => f(g),
            Meta::AllNum(_, b) | Meta::SomeNum(_, b) => b.visit_formulas(f),
            Meta::Imp(a, b) => {
                a.visit_formulas(f);
                b.visit_formulas(f);
            }
            Meta::Consistent | Meta::OmegaConsistent | Meta::False => {}
        }
    }

    fn visit_binders(&self, f: &mut impl FnMut(&str)) {
        match self {
            Meta::AllNum(v, b) | Meta::SomeNum(v, b) => {
                f(v);
                b.visit_binders(f);
            }
            Meta::Imp(a, b) => {
                a.visit_binders(f);
                b.visit_binders(f);
            }
            _ => {}
        }
    }

    /// Replace the free meta-variable `m` by `t`, renaming binders that would capture.
    pub fn subst_meta(&self, m: &str, t: &Term) -> Meta {
        let mut t_metas = BTreeSet::new();
        t.collect_metas(&mut t_metas);
        self.subst_inner(m, t, &t_metas)
    }

    fn subst_inner(&self, m: &str, t: &Term, t_metas: &BTreeSet<String>) -> Meta {
        match self {
            Meta::Prov(ctx, f) => {
                Meta::prov(ctx.iter().map(|g| g.subst_meta(m, t)), f.subst_meta(m, t))
            }
            Meta::NotProv(f) => Meta::NotProv(f.subst_meta(m, t)),
            Meta::Imp(a, b) => {
                Meta::imp(a.subst_inner(m, t, t_metas), b.subst_inner(m, t, t_metas))
            }
            Meta::AllNum(v, b) | Meta::SomeNum(v, b) => {
                if v == m {
                    return self.clone();
                }
                let (v2, b2) = if t_metas.contains(v) && b.free_metas().contains(m) {
                    let mut avoid = self.all_metas();
                    avoid.extend(t_metas.iter().cloned());
                    let fresh = fresh_meta(v, &avoid);
                    (fresh.clone(), b.subst_meta(v, &Term::Meta(fresh)))
                } else {
                    (v.clone(), (**b).clone())
                };
                let inner = Box::new(b2.subst_inner(m, t, t_metas));
                match self {
                    Meta::AllNum(..) => Meta::AllNum(v2, inner),
                    _ => Meta::SomeNum(v2, inner),
                }
            }
            Meta::Consistent | Meta::OmegaConsistent | Meta::False => self.clone(),
        }
    }

    /// Equality up to renaming of meta-variable binders.
    pub fn alpha_eq(&self, other: &Meta) -> bool {
        self.canonical(&mut 0) == other.canonical(&mut 0)
    }

    fn canonical(&self, next: &mut usize) -> Meta {
        match self {
            Meta::AllNum(v, b) | Meta::SomeNum(v, b) => {
                let name = format!("%{next}");
                *next += 1;
                let inner = Box::new(b.subst_meta(v, &Term::Meta(name.clone())).canonical(next));
                match self {
                    Meta::AllNum(..) => Meta::AllNum(name, inner),
                    _ => Meta::SomeNum(name, inner),
                }
            }
            Meta::Imp(a, b) => Meta::imp(a.canonical(next), b.canonical(next)),
            _ => self.clone(),
        }
    }
}

pub fn fresh_meta(base: &str, avoid: &BTreeSet<String>) -> String {
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|c| !avoid.contains(c))
        .expect("unbounded supply of names")
}

impl fmt::Display for Meta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Meta::Prov(ctx, g) => {
                let ctx: Vec<String> = ctx.iter().map(render).collect();
                write!(f, "Prov{{{}| {}}}", ctx.join("; "), render(g))
            }
            Meta::NotProv(g) => write!(f, "NotProv{{{}}}", render(g)),
            Meta::AllNum(v, b) => write!(f, "forall {v}: {b}"),
            Meta::SomeNum(v, b) => write!(f, "exists {v}: {b}"),
            Meta::Imp(a, b) => match **a {
                Meta::Imp(..) | Meta::AllNum(..) | Meta::SomeNum(..) => write!(f, "({a}) => {b}"),
                _ => write!(f, "{a} => {b}"),
            },
            Meta::Consistent => write!(f, "Consistent"),
            Meta::OmegaConsistent => write!(f, "OmegaConsistent"),
            Meta::False => write!(f, "FALSE"),
        }
    }
}
