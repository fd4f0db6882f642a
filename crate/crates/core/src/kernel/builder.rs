use std::collections::HashMap;

use super::{pa_axiom, AxiomId, Justification, Line, Proof};
use crate::syntax::{Formula, Term};

/// Incremental proof construction. Re-deriving a formula already on a line
/// returns that line instead of adding a duplicate.
#[derive(Debug, Default)]
pub struct ProofBuilder {
    proof: Proof,
    memo: HashMap<Formula, usize>,
}

impl ProofBuilder {
    pub fn new(hypotheses: Vec<Formula>) -> Self {
        ProofBuilder {
            proof: Proof {
                hypotheses,
                lines: Vec::new(),
            },
            memo: HashMap::new(),
        }
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.proof.lines[i].formula
    }

    pub fn len(&self) -> usize {
        self.proof.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.proof.lines.is_empty()
    }

    pub fn add(&mut self, formula: Formula, just: Justification) -> usize {
        if let Some(&i) = self.memo.get(&formula) {
            return i;
        }
        let i = self.proof.push(formula.clone(), just);
        self.memo.insert(formula, i);
        i
    }

    /// The finished proof, with `goal` repeated at the end if it is not last.
    pub fn finish(mut self, goal: usize) -> Proof {
        if goal + 1 != self.proof.lines.len() {
            let Line { formula, just } = self.proof.lines[goal].clone();
            self.proof.push(formula, just);
        }
        self.proof
    }

    pub fn axiom(&mut self, f: Formula, id: AxiomId) -> usize {
        debug_assert!(super::is_instance(&f, id), "{f} is not {id}");
        self.add(f, Justification::Axiom(id))
    }

    pub fn hyp(&mut self, i: usize) -> usize {
        let f = self.proof.hypotheses[i].clone();
        self.add(f, Justification::Hyp(i))
    }

    /// From `F` on line `i` and `F => G` on line `j`, derive `G`.
    pub fn mp(&mut self, i: usize, j: usize) -> usize {
        let g = match self.formula(j) {
            Formula::Imp(a, b) if **a == *self.formula(i) => (**b).clone(),
            other => panic!("mp: {other} does not match {}", self.formula(i)),
        };
        self.add(g, Justification::Mp(i, j))
    }

    pub fn gen(&mut self, i: usize, v: &str) -> usize {
        let f = Formula::forall(v, self.formula(i).clone());
        self.add(f, Justification::Gen(i, v.to_string()))
    }

    /// From `(Ax)B` on line `i`, derive `B[t/x]`.
    pub fn instantiate(&mut self, i: usize, t: &Term) -> usize {
        let (x, body) = match self.formula(i) {
            Formula::Forall(x, b) => (x.clone(), (**b).clone()),
            other => panic!("instantiate: {other} is not universal"),
        };
        let inst = body.substitute(&x, t);
        let ax = self.axiom(
            Formula::imp(self.formula(i).clone(), inst),
            AxiomId::Logical(4),
        );
        self.mp(i, ax)
    }

    /// The instance of `PAk` with `x` and `y` replaced by closed terms.
    pub fn pa_instance(&mut self, k: u8, x: &Term, y: Option<&Term>) -> usize {
        let mut line = self.axiom(pa_axiom(k).clone(), AxiomId::Pa(k));
        line = self.gen(line, "x");
        line = self.instantiate(line, x);
        if let Some(y) = y {
            line = self.gen(line, "y");
            line = self.instantiate(line, y);
        }
        line
    }

    pub fn refl(&mut self, t: &Term) -> usize {
        self.axiom(Formula::Eq(t.clone(), t.clone()), AxiomId::Equality(1))
    }

    fn eq_sides(&self, i: usize) -> (Term, Term) {
        match self.formula(i) {
            Formula::Eq(s, t) => (s.clone(), t.clone()),
            other => panic!("{other} is not an equation"),
        }
    }

    /// From `s = t` on line `i`, derive `t = s`.
    pub fn sym(&mut self, i: usize) -> usize {
        let (s, t) = self.eq_sides(i);
        let ax = Formula::imp(
            Formula::Eq(s.clone(), t.clone()),
            Formula::imp(Formula::Eq(s.clone(), s.clone()), Formula::Eq(t, s.clone())),
        );
        let ax = self.axiom(ax, AxiomId::Equality(2));
        let step = self.mp(i, ax);
        let r = self.refl(&s);
        self.mp(r, step)
    }

    /// From `a = b` on line `i` and `b = c` on line `j`, derive `a = c`.
    pub fn trans(&mut self, i: usize, j: usize) -> usize {
        let (a, b) = self.eq_sides(i);
        let (b2, c) = self.eq_sides(j);
        assert_eq!(b, b2, "trans: middle terms differ");
        let ax = Formula::imp(
            Formula::Eq(b.clone(), c.clone()),
            Formula::imp(Formula::Eq(a.clone(), b), Formula::Eq(a, c)),
        );
        let ax = self.axiom(ax, AxiomId::Equality(2));
        let step = self.mp(j, ax);
        self.mp(i, step)
    }

    /// From `s = t` on line `i`, derive `u = u2` where `u2` is `u` with some
    /// occurrences of `s` replaced by `t`.
    pub fn rewrite(&mut self, i: usize, u: &Term, u2: &Term) -> usize {
        let (s, t) = self.eq_sides(i);
        let ax = Formula::imp(
            Formula::Eq(s, t),
            Formula::imp(
                Formula::Eq(u.clone(), u.clone()),
                Formula::Eq(u.clone(), u2.clone()),
            ),
        );
        let ax = self.axiom(ax, AxiomId::Equality(2));
        let step = self.mp(i, ax);
        let r = self.refl(u);
        self.mp(r, step)
    }

    /// `A => A` in five lines.
    pub fn identity(&mut self, a: &Formula) -> usize {
        let aa = Formula::imp(a.clone(), a.clone());
        let a_aa = Formula::imp(a.clone(), aa.clone());
        let a_aa_a = Formula::imp(a.clone(), Formula::imp(aa.clone(), a.clone()));
        let l1 = self.axiom(
            Formula::imp(a_aa_a.clone(), Formula::imp(a_aa.clone(), aa.clone())),
            AxiomId::Logical(2),
        );
        let l2 = self.axiom(a_aa_a, AxiomId::Logical(1));
        let l3 = self.mp(l2, l1);
        let l4 = self.axiom(a_aa, AxiomId::Logical(1));
        self.mp(l4, l3)
    }
}
