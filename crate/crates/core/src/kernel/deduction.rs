use thiserror::Error;

use super::{check_proof, AxiomId, Justification, Proof, ProofBuilder, Reason};
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeductionError {
    #[error("the proof has no hypothesis to discharge")]
    NoHypothesis,
    #[error("input proof is invalid at line {}: {reason}", .line.map_or(0, |l| l + 1))]
    InvalidInput { line: Option<usize>, reason: Reason },
    #[error("line {}: generalisation on `{var}`, which is free in the discharged hypothesis", .line + 1)]
    GenOnFreeVariable { line: usize, var: String },
    #[error("line {}: induction on a premise that depends on the discharged hypothesis", .line + 1)]
    InductionOnDependent { line: usize },
}

/// Discharge the last hypothesis `A` of a valid proof of `B`, giving a proof
/// of `A => B` from the remaining hypotheses.
pub fn deduction_transform(p: &Proof) -> Result<Proof, DeductionError> {
    let verdict = check_proof(p);
    if !verdict.valid {
        return Err(DeductionError::InvalidInput {
            line: verdict.first_bad_line,
            reason: verdict.reason.unwrap_or(Reason::Empty),
        });
    }
    let Some((a, rest)) = p.hypotheses.split_last() else {
        return Err(DeductionError::NoHypothesis);
    };
    let discharged = rest.len();
    let mut t = Transformer {
        b: ProofBuilder::new(rest.to_vec()),
        a: a.clone(),
        direct: vec![None; p.lines.len()],
        imp: vec![None; p.lines.len()],
    };

    for (k, line) in p.lines.iter().enumerate() {
        let c = &line.formula;
        match &line.just {
            Justification::Hyp(i) if *i == discharged => {
                t.imp[k] = Some(t.b.identity(&t.a));
            }
            Justification::Hyp(i) => t.direct[k] = Some(t.b.hyp(*i)),
            Justification::Axiom(id) => t.direct[k] = Some(t.b.axiom(c.clone(), *id)),
            Justification::Mp(i, j) => match (t.direct[*i], t.direct[*j]) {
                (Some(di), Some(dj)) => t.direct[k] = Some(t.b.mp(di, dj)),
                _ => {
                    let (ii, ij) = (t.implication(*i), t.implication(*j));
                    let f = p.lines[*i].formula.clone();
                    let ax = Formula::imp(
                        Formula::imp(t.a.clone(), Formula::imp(f.clone(), c.clone())),
                        Formula::imp(
                            Formula::imp(t.a.clone(), f),
                            Formula::imp(t.a.clone(), c.clone()),
                        ),
                    );
                    let ax = t.b.axiom(ax, AxiomId::Logical(2));
                    let step = t.b.mp(ij, ax);
                    t.imp[k] = Some(t.b.mp(ii, step));
                }
            },
            Justification::Gen(i, v) => match t.direct[*i] {
                Some(di) => t.direct[k] = Some(t.b.gen(di, v)),
                None => {
                    if t.a.is_free(v) {
                        return Err(DeductionError::GenOnFreeVariable {
                            line: k,
                            var: v.clone(),
                        });
                    }
                    let ii = t.implication(*i);
                    let g = t.b.gen(ii, v);
                    let f = p.lines[*i].formula.clone();
                    let ax = Formula::imp(
                        t.b.formula(g).clone(),
                        Formula::imp(t.a.clone(), Formula::forall(v, f)),
                    );
                    let ax = t.b.axiom(ax, AxiomId::Logical(5));
                    t.imp[k] = Some(t.b.mp(g, ax));
                }
            },
            Justification::Ind(i, j) => match (t.direct[*i], t.direct[*j]) {
                (Some(di), Some(dj)) => {
                    t.direct[k] = Some(t.b.add(c.clone(), Justification::Ind(di, dj)))
                }
                _ => return Err(DeductionError::InductionOnDependent { line: k }),
            },
        }
    }
    let goal = t.implication(p.lines.len() - 1);
    Ok(t.b.finish(goal))
}

struct Transformer {
    b: ProofBuilder,
    a: Formula,
    direct: Vec<Option<usize>>,
    imp: Vec<Option<usize>>,
}

impl Transformer {
    /// The line proving `A => C_k`, derived from the direct line by `LAx1` if needed.
    fn implication(&mut self, k: usize) -> usize {
        if let Some(i) = self.imp[k] {
            return i;
        }
        let d = self.direct[k].expect("every line is direct or dependent");
        let c = self.b.formula(d).clone();
        let ax = self.b.axiom(
            Formula::imp(c.clone(), Formula::imp(self.a.clone(), c)),
            AxiomId::Logical(1),
        );
        let i = self.b.mp(d, ax);
        self.imp[k] = Some(i);
        i
    }
}
