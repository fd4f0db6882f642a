use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::parse::{Assumption, Chain, ChainStep, Macros};
use super::rules::{
    arity, check_bounded, check_core, check_omega, fixed_axiom, is_known, is_lifted, requires,
};
use super::statement::Meta;
use crate::syntax::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    PremiseShapeMismatch,
    DeductionTheoremOnMetaImplication,
    EigenvariableEscape,
    WitnessAliasing,
    UnknownRule,
    MissingPremise,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::PremiseShapeMismatch => "premise-shape-mismatch",
            Reason::DeductionTheoremOnMetaImplication => "deduction-theorem-on-meta-implication",
            Reason::EigenvariableEscape => "eigenvariable-escape",
            Reason::WitnessAliasing => "witness-aliasing",
            Reason::UnknownRule => "unknown-rule",
            Reason::MissingPremise => "missing-premise",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Justified,
    Unjustified(Reason),
}

impl Verdict {
    pub fn is_justified(&self) -> bool {
        matches!(self, Verdict::Justified)
    }

    pub fn reason(&self) -> Option<Reason> {
        match self {
            Verdict::Justified => None,
            Verdict::Unjustified(r) => Some(*r),
        }
    }
}

#[derive(Debug, Clone)]
pub struct StepReport {
    pub step: ChainStep,
    pub verdict: Verdict,
    /// Open meta-hypotheses the step depends on.
    pub depends_on: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoalReport {
    pub goal: String,
    pub supported: bool,
    /// The earliest unjustified step in the goal's ancestry, or an open hypothesis.
    pub blocked_by: Option<String>,
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub chain: String,
    pub steps: Vec<StepReport>,
    pub goals: Vec<GoalReport>,
}

impl AuditReport {
    pub fn all_justified(&self) -> bool {
        self.steps.iter().all(|s| s.verdict.is_justified())
    }

    pub fn all_goals_supported(&self) -> bool {
        self.goals.iter().all(|g| g.supported)
    }

    pub fn first_unjustified(&self) -> Option<&StepReport> {
        self.steps.iter().find(|s| !s.verdict.is_justified())
    }

    pub fn step(&self, label: &str) -> Option<&StepReport> {
        self.steps.iter().find(|s| s.step.label == label)
    }

    pub fn goal(&self, label: &str) -> Option<&GoalReport> {
        self.goals.iter().find(|g| g.goal == label)
    }

    /// One flat record per step, formulas abbreviated with `macros`.
    pub fn records(&self, macros: &Macros) -> Vec<StepRecord> {
        self.steps
            .iter()
            .map(|s| StepRecord {
                id: s.step.label.clone(),
                statement: macros.abbreviate(&s.step.statement.to_string()),
                claimed_rule: s.step.rule.clone(),
                verdict: if s.verdict.is_justified() {
                    "JUSTIFIED"
                } else {
                    "UNJUSTIFIED"
                },
                reason: s.verdict.reason().map(Reason::code),
                premises: s.step.premises.clone(),
                discharge: s.step.discharge.clone(),
                provenance: s.step.provenance.clone(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub id: String,
    pub statement: String,
    pub claimed_rule: String,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<&'static str>,
    pub premises: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discharge: Option<String>,
    pub provenance: String,
}

pub fn audit(chain: &Chain) -> AuditReport {
    let mut steps: Vec<StepReport> = Vec::new();
    for (i, step) in chain.steps.iter().enumerate() {
        let earlier = |l: &String| chain.steps[..i].iter().position(|s| &s.label == l);
        let refs: Option<Vec<usize>> = step.premises.iter().map(earlier).collect();
        let discharge = step.discharge.as_ref().map(earlier);
        let mut deps = BTreeSet::new();
        let verdict = match refs {
            Some(refs) if discharge != Some(None) => {
                for &r in &refs {
                    deps.extend(steps[r].depends_on.iter().cloned());
                }
                let ps: Vec<&Meta> = refs.iter().map(|&r| &chain.steps[r].statement).collect();
                let hyps: Vec<&Meta> = deps
                    .iter()
                    .filter_map(|h| chain.step(h).map(|s| &s.statement))
                    .collect();
                let disc = discharge.flatten().map(|d| &chain.steps[d]);
                let ctx = StepContext {
                    chain,
                    hyps: &hyps,
                    open: &deps,
                    discharge: disc,
                };
                match check_step(step, &ps, &ctx) {
                    Ok(()) => Verdict::Justified,
                    Err(r) => Verdict::Unjustified(r),
                }
            }
            _ => Verdict::Unjustified(Reason::MissingPremise),
        };
        if step.rule == "META-HYP" {
            deps.insert(step.label.clone());
        }
        if let Some(d) = &step.discharge {
            deps.remove(d);
        }
        steps.push(StepReport {
            step: step.clone(),
            verdict,
            depends_on: deps,
        });
    }
    let goals = chain
        .goals
        .iter()
        .map(|g| goal_report(chain, &steps, g))
        .collect();
    AuditReport {
        chain: chain.name.clone(),
        steps,
        goals,
    }
}

fn goal_report(chain: &Chain, steps: &[StepReport], goal: &str) -> GoalReport {
    let Some(gi) = chain.index_of(goal) else {
        return GoalReport {
            goal: goal.into(),
            supported: false,
            blocked_by: Some(goal.into()),
        };
    };
    let mut seen = BTreeSet::new();
    let mut stack = vec![gi];
    while let Some(i) = stack.pop() {
        if !seen.insert(i) {
            continue;
        }
        let s = &chain.steps[i];
        for l in s.premises.iter().chain(&s.discharge) {
            if let Some(j) = chain.steps[..i].iter().position(|t| &t.label == l) {
                stack.push(j);
            }
        }
    }
    let blocked_by = seen
        .iter()
        .find(|&&i| !steps[i].verdict.is_justified())
        .map(|&i| chain.steps[i].label.clone())
        .or_else(|| steps[gi].depends_on.iter().next().cloned());
    GoalReport {
        goal: goal.into(),
        supported: blocked_by.is_none(),
        blocked_by,
    }
}

struct StepContext<'a> {
    chain: &'a Chain,
    /// Statements of the open hypotheses the premises depend on.
    hyps: &'a [&'a Meta],
    open: &'a BTreeSet<String>,
    discharge: Option<&'a ChainStep>,
}

impl StepContext<'_> {
    fn assumed(&self, a: Assumption) -> bool {
        self.chain.assumptions.contains(&a)
    }
}

fn check_step(step: &ChainStep, ps: &[&Meta], ctx: &StepContext) -> Result<(), Reason> {
    let rule = step.rule.as_str();
    let c = &step.statement;
    if !is_known(rule) {
        return Err(Reason::UnknownRule);
    }
    if let Some(a) = requires(rule) {
        if !ctx.assumed(a) {
            return Err(Reason::MissingPremise);
        }
    }
    match arity(rule) {
        Some(n) if ps.len() < n => return Err(Reason::MissingPremise),
        Some(n) if ps.len() > n => return Err(Reason::PremiseShapeMismatch),
        _ => {}
    }
    let ok = |b: bool| {
        if b {
            Ok(())
        } else {
            Err(Reason::PremiseShapeMismatch)
        }
    };
    if let Some(ax) = fixed_axiom(rule) {
        return ok(c.alpha_eq(&ax));
    }
    match rule {
        "META-HYP" => Ok(()),
        "META-MP" => {
            let mp =
                |a: &Meta, b: &Meta| matches!(b, Meta::Imp(x, y) if a.alpha_eq(x) && c.alpha_eq(y));
            ok(mp(ps[0], ps[1]) || mp(ps[1], ps[0]))
        }
        "META-DISCHARGE" => {
            let h = open_hypothesis(ctx)?;
            ok(c.alpha_eq(&Meta::imp(h.statement.clone(), ps[0].clone())))
        }
        "META-REDUCTIO" => {
            let h = open_hypothesis(ctx)?;
            let Meta::Prov(hctx, f) = &h.statement else {
                return Err(Reason::PremiseShapeMismatch);
            };
            if !hctx.is_empty() || *c != Meta::NotProv(f.clone()) {
                return Err(Reason::PremiseShapeMismatch);
            }
            refutes(ps, ctx)
        }
        "OMEGA" => ok(*c == Meta::False && check_omega(&[ps[0].clone(), ps[1].clone()])),
        "OBJ-BOUNDED" => {
            let (_, body) = peel(c, &[]);
            ok(check_bounded(ps[0], &body.body))
        }
        "OBJ-DEDUCTION" if ps.iter().any(|p| is_meta_implication(p)) => {
            Err(Reason::DeductionTheoremOnMetaImplication)
        }
        _ if is_lifted(rule) => lifted(rule, ps, c, ctx.hyps),
        _ => Err(Reason::PremiseShapeMismatch),
    }
}

fn open_hypothesis<'a>(ctx: &StepContext<'a>) -> Result<&'a ChainStep, Reason> {
    let h = ctx.discharge.ok_or(Reason::MissingPremise)?;
    if h.rule != "META-HYP" || !ctx.open.contains(&h.label) {
        return Err(Reason::PremiseShapeMismatch);
    }
    Ok(h)
}

/// Premises that yield FALSE: FALSE itself, or a pair refuted by CONS,
/// META-CONTRA or OMEGA.
fn refutes(ps: &[&Meta], ctx: &StepContext) -> Result<(), Reason> {
    if let [Meta::False] = ps {
        return Ok(());
    }
    if ps.len() != 2 {
        return Err(Reason::PremiseShapeMismatch);
    }
    let mut best = Reason::PremiseShapeMismatch;
    for (rule, needs) in [
        ("META-CONTRA", None),
        ("CONS", Some(Assumption::Consistent)),
        ("OMEGA", Some(Assumption::OmegaConsistent)),
    ] {
        let r = if rule == "OMEGA" {
            if check_omega(&[ps[0].clone(), ps[1].clone()]) {
                Ok(())
            } else {
                Err(Reason::PremiseShapeMismatch)
            }
        } else {
            lifted(rule, ps, &Meta::False, ctx.hyps)
        };
        match (r, needs) {
            (Ok(()), Some(a)) if !ctx.assumed(a) => best = Reason::MissingPremise,
            (Ok(()), _) => return Ok(()),
            (Err(Reason::PremiseShapeMismatch), _) => {}
            (Err(e), _) => best = e,
        }
    }
    Err(best)
}

fn is_meta_implication(m: &Meta) -> bool {
    match m {
        Meta::AllNum(_, b) | Meta::SomeNum(_, b) => is_meta_implication(b),
        Meta::Imp(..) => true,
        _ => false,
    }
}

/// A statement with its leading binders and meta-antecedents removed.
struct Peeled {
    body: Meta,
    alls: Vec<String>,
    somes: Vec<String>,
}

/// Strip leading binders and those meta-antecedents alpha-equal to one in `unders`.
/// With empty `unders`, every leading antecedent is stripped and returned.
fn peel(m: &Meta, unders: &[Meta]) -> (Vec<Meta>, Peeled) {
    let mut out = Peeled {
        body: m.clone(),
        alls: vec![],
        somes: vec![],
    };
    let mut stripped = Vec::new();
    loop {
        match &out.body {
            Meta::AllNum(v, b) => {
                out.alls.push(v.clone());
                out.body = (**b).clone();
            }
            Meta::SomeNum(v, b) => {
                out.somes.push(v.clone());
                out.body = (**b).clone();
            }
            Meta::Imp(a, b) if unders.is_empty() || unders.iter().any(|u| u.alpha_eq(a)) => {
                stripped.push((**a).clone());
                out.body = (**b).clone();
            }
            _ => return (stripped, out),
        }
    }
}

fn rename(m: &Meta, from: &str, to: &str) -> Meta {
    m.subst_meta(from, &Term::Meta(to.to_string()))
}

const MAX_ASSIGNMENTS: usize = 50_000;

/// Check a rule pointwise under binders.
///
/// Universally bound premise variables and existentially bound conclusion
/// variables become pattern variables, solved by trying the closed terms in
/// sight. Existential premise witnesses become fresh constants, one per
/// premise. If that fails but identifying witnesses by name would succeed,
/// the step reuses a witness: `witness-aliasing` when two premises share one,
/// `eigenvariable-escape` when it leaks into the conclusion.
fn lifted(rule: &str, ps: &[&Meta], c: &Meta, hyps: &[&Meta]) -> Result<(), Reason> {
    let (unders, concl) = peel(c, &[]);
    let premise_free: BTreeSet<String> = ps.iter().flat_map(|p| p.free_metas()).collect();
    for v in &concl.alls {
        if premise_free.contains(v) && hyps.iter().any(|h| h.free_metas().contains(v)) {
            return Err(Reason::EigenvariableEscape);
        }
    }
    let peeled: Vec<Peeled> = ps.iter().map(|p| peel(p, &unders).1).collect();
    if attempt(rule, &peeled, &concl, &premise_free, true) {
        return Ok(());
    }
    if !attempt(rule, &peeled, &concl, &premise_free, false) {
        return Err(Reason::PremiseShapeMismatch);
    }
    for (i, p) in peeled.iter().enumerate() {
        for v in &p.somes {
            let shared = peeled.iter().enumerate().any(|(j, q)| {
                j != i
                    && (q.somes.contains(v)
                        || (!q.alls.contains(v) && q.body.free_metas().contains(v)))
            });
            if shared {
                return Err(Reason::WitnessAliasing);
            }
        }
    }
    Err(Reason::EigenvariableEscape)
}

fn attempt(
    rule: &str,
    peeled: &[Peeled],
    concl: &Peeled,
    premise_free: &BTreeSet<String>,
    strict: bool,
) -> bool {
    let mut patterns = Vec::new();
    let mut c = concl.body.clone();
    // Generalising a free meta-variable of a premise keeps its name.
    for v in &concl.alls {
        if !premise_free.contains(v) {
            c = rename(&c, v, &format!("{v}^"));
        }
    }
    for v in &concl.somes {
        let p = format!("?{v}");
        c = rename(&c, v, &p);
        patterns.push(p);
    }
    let mut bodies = Vec::new();
    for (i, p) in peeled.iter().enumerate() {
        let mut b = p.body.clone();
        for v in &p.alls {
            let pat = format!("?{i}.{v}");
            b = rename(&b, v, &pat);
            patterns.push(pat);
        }
        if strict {
            for v in &p.somes {
                b = rename(&b, v, &format!("{v}~{i}"));
            }
        }
        bodies.push(b);
    }

    let mut terms = BTreeSet::new();
    for m in bodies.iter().chain(std::iter::once(&c)) {
        m.visit_formulas(&mut |f| f.visit_terms(&mut |t| collect_closed(t, &patterns, &mut terms)));
    }
    terms.insert(Term::Num(0u32.into()));
    let terms: Vec<Term> = terms.into_iter().collect();
    if terms
        .len()
        .checked_pow(patterns.len() as u32)
        .is_none_or(|n| n > MAX_ASSIGNMENTS)
    {
        return false;
    }
    let mut choice = vec![0usize; patterns.len()];
    loop {
        let assign = |m: &Meta| {
            patterns
                .iter()
                .zip(&choice)
                .fold(m.clone(), |acc, (p, &k)| acc.subst_meta(p, &terms[k]))
        };
        let ps: Vec<Meta> = bodies.iter().map(assign).collect();
        if check_core(rule, &ps, &assign(&c)) {
            return true;
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return false;
            }
            choice[k] += 1;
            if choice[k] < terms.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Closed subterms free of pattern variables.
fn collect_closed(t: &Term, patterns: &[String], out: &mut BTreeSet<Term>) {
    let mut metas = BTreeSet::new();
    t.collect_metas(&mut metas);
    if t.vars().is_empty() && !metas.iter().any(|m| patterns.contains(m)) {
        out.insert(t.clone());
    }
    if let Term::Add(a, b) | Term::Mul(a, b) = t {
        collect_closed(a, patterns, out);
        collect_closed(b, patterns, out);
    }
}
