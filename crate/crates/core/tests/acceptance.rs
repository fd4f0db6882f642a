//! Acceptance criteria. Each prints one PASS or FAIL line; any FAIL makes the
//! target exit non-zero.

use std::collections::HashMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

use pa_audit::codec::{decode_formula, decode_proof, encode_formula, encode_proof};
use pa_audit::diagonal::{construct_builtin, diagonalize, Builtin};
use pa_audit::kernel::{
    check_proof, deduction_transform, parse_proof, AxiomId, DeductionError, Justification, Proof,
    PA_AXIOMS,
};
use pa_audit::metalogic::{audit, builtin_chain, AuditReport, BuiltinChain, Reason, Variant};
use pa_audit::recursion::{
    arg_var, beta, beta_find, compile_pr, diag_rel_eval, eval_sigma1, lookup, prf_eval, TriBool,
    DEFAULT_BUDGET, RESULT_VAR,
};
use pa_audit::syntax::{numeral, parse_formula, Formula, RelConst, Term};

const PINNED_GUS: &str = "6323158676708678423867341974347633137218";
const PINNED_RUS: &str = "11172054348070632932363706460101272863252212920109593222181052642615605148501926876935579114358299677123496386690";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixtures(dir: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(dir)
}

fn corpus() -> Vec<(String, Proof)> {
    let mut files: Vec<_> = std::fs::read_dir(fixtures("proofs"))
        .expect("proof corpus")
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "prf"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).expect("readable fixture");
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let proof = parse_proof(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, proof)
        })
        .collect()
}

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<String, String> {
    let e = t.elapsed();
    check(e < limit, || format!("took {e:.2?}, limit {limit:?}"))?;
    Ok(format!("{:.2?} (limit {limit:?})", e))
}

/// Every single-line alteration of `p` that the kernel must reject.
fn tamperings(p: &Proof) -> Vec<Proof> {
    let mut out = Vec::new();
    for i in 0..p.lines.len() {
        let line = &p.lines[i];
        let mut negated = p.clone();
        negated.lines[i].formula = Formula::not(line.formula.clone());
        out.push(negated);
        let mut absurd = p.clone();
        absurd.lines[i].formula = f("(0 = 1)");
        if absurd.lines[i].formula != line.formula {
            out.push(absurd);
        }
        let mut rejust = p.clone();
        rejust.lines[i].just = match line.just {
            Justification::Axiom(AxiomId::Pa(1)) => Justification::Axiom(AxiomId::Pa(2)),
            _ => Justification::Axiom(AxiomId::Pa(1)),
        };
        out.push(rejust);
    }
    out
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let corpus = corpus();
    check(corpus.len() >= 10, || {
        format!("only {} proofs", corpus.len())
    })?;
    for required in ["plus_zero.prf", "induction_reflexivity.prf"] {
        check(corpus.iter().any(|(n, _)| n == required), || {
            format!("{required} missing")
        })?;
    }
    let mut rejected = 0;
    for (name, proof) in &corpus {
        let v = check_proof(proof);
        check(v.valid, || format!("{name} rejected: {v:?}"))?;
        for (k, bad) in tamperings(proof).iter().enumerate() {
            check(!check_proof(bad).valid, || {
                format!("{name}: tampering {k} accepted")
            })?;
            rejected += 1;
        }
    }
    let time = within(t, Duration::from_secs(1))?;
    Ok(format!(
        "{} proofs valid, {rejected} tamperings rejected, {time}",
        corpus.len()
    ))
}

fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop_oneof![Just("x"), Just("y"), Just("z"), Just("w1")].prop_map(|v| Term::Var(v.into())),
        (0u64..1000).prop_map(numeral),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::add(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Term::mul(a, b)),
        ]
    })
}

/// Pure formulas of depth at most `depth`.
fn arb_formula(depth: u32) -> impl Strategy<Value = Formula> {
    let var = prop_oneof![Just("x"), Just("y"), Just("z"), Just("w1")].prop_map(String::from);
    let atom = prop_oneof![
        (arb_term(), arb_term()).prop_map(|(a, b)| Formula::Eq(a, b)),
        (arb_term(), arb_term()).prop_map(|(a, b)| Formula::Leq(a, b)),
    ];
    atom.prop_recursive(depth, 64, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (var.clone(), inner.clone()).prop_map(|(v, f)| Formula::forall(&v, f)),
            (var.clone(), inner.clone()).prop_map(|(v, f)| Formula::exists(&v, f)),
            (var.clone(), inner).prop_map(|(v, f)| Formula::exists_unique(&v, f)),
        ]
    })
}

fn arb_justification(len: usize) -> impl Strategy<Value = Justification> {
    let idx = 0..len.max(1);
    prop_oneof![
        (1u8..=6).prop_map(|k| Justification::Axiom(AxiomId::Pa(k))),
        (1u8..=12).prop_map(|k| Justification::Axiom(AxiomId::Logical(k))),
        (1u8..=4).prop_map(|k| Justification::Axiom(AxiomId::Equality(k))),
        (idx.clone(), idx.clone()).prop_map(|(i, j)| Justification::Mp(i, j)),
        (idx.clone(), idx.clone()).prop_map(|(i, j)| Justification::Ind(i, j)),
        (idx, prop_oneof![Just("x"), Just("y")]).prop_map(|(i, v)| Justification::Gen(i, v.into())),
    ]
}

fn arb_proof() -> impl Strategy<Value = Proof> {
    (1usize..6).prop_flat_map(|n| {
        prop::collection::vec((arb_formula(3), arb_justification(n)), n).prop_map(|lines| {
            let mut p = Proof::default();
            for (formula, just) in lines {
                p.push(formula, just);
            }
            p
        })
    })
}

fn sample<S: Strategy>(runner: &mut TestRunner, s: &S) -> S::Value {
    s.new_tree(runner).expect("strategy").current()
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut runner = TestRunner::deterministic();
    let mut formulas: Vec<Formula> = Vec::new();
    let mut proofs: Vec<Proof> = Vec::new();
    for (_, p) in corpus() {
        formulas.extend(p.lines.iter().map(|l| l.formula.clone()));
        formulas.extend(p.hypotheses.iter().cloned());
        if p.hypotheses.is_empty() {
            proofs.push(p);
        }
    }
    let strategy = arb_formula(6);
    formulas.extend((0..1000).map(|_| sample(&mut runner, &strategy)));
    let strategy = arb_proof();
    proofs.extend((0..100).map(|_| sample(&mut runner, &strategy)));

    let mut seen: HashMap<BigUint, String> = HashMap::new();
    for g in &formulas {
        let code = encode_formula(g).value;
        let back = decode_formula(&code).map_err(|e| format!("{g:?}: {e}"))?;
        check(back == *g, || format!("formula round trip changed {g:?}"))?;
        let key = format!("F{g:?}");
        if let Some(prev) = seen.insert(code, key.clone()) {
            check(prev == key, || {
                format!("collision between {prev} and {key}")
            })?;
        }
    }
    for p in &proofs {
        let code = encode_proof(p).map_err(|e| e.to_string())?.value;
        let back = decode_proof(&code).map_err(|e| e.to_string())?;
        check(back == *p, || {
            "proof round trip changed a proof".to_string()
        })?;
        let key = format!("P{p:?}");
        if let Some(prev) = seen.insert(code, key.clone()) {
            check(prev == key, || {
                "collision between a proof code and another code".to_string()
            })?;
        }
    }
    let time = within(t, Duration::from_secs(10))?;
    Ok(format!(
        "{} formulas and {} proofs round-trip, {} distinct codes, 0 collisions, {time}",
        formulas.len(),
        proofs.len(),
        seen.len()
    ))
}

fn criterion_3() -> Outcome {
    let mut cases = 0;
    let mut corrupted = 0;
    for (name, p) in corpus() {
        if !p.hypotheses.is_empty() {
            continue;
        }
        let mut variants = vec![p.clone()];
        variants.extend(tamperings(&p));
        for q in &variants {
            let (Some(concl), Ok(m)) = (q.conclusion(), encode_proof(q)) else {
                continue;
            };
            let k = encode_formula(concl).value;
            let expected = check_proof(q).valid;
            check(prf_eval(&k, &m.value) == expected, || {
                format!("{name}: prf disagrees with the kernel")
            })?;
            cases += 1;
        }
        let k = encode_formula(p.conclusion().unwrap()).value;
        let m = encode_proof(&p).unwrap().value;
        for d in 1u32..=10 {
            check(!prf_eval(&k, &(&m + d)), || {
                format!("{name}: proof code + {d} accepted")
            })?;
            check(!prf_eval(&(&k + d), &m), || {
                format!("{name}: formula code + {d} accepted")
            })?;
            corrupted += 2;
        }
    }
    check(corrupted >= 100, || {
        format!("only {corrupted} corrupted codes")
    })?;
    Ok(format!(
        "{cases} proofs agree with the kernel, {corrupted} corrupted codes rejected"
    ))
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let mut count = 0u64;
    let mut seq: Vec<BigUint> = Vec::new();
    for len in 1..=5u32 {
        for n in 0..11u64.pow(len) {
            seq.clear();
            let mut r = n;
            for _ in 0..len {
                seq.push(BigUint::from(r % 11));
                r /= 11;
            }
            let pair = beta_find(&seq);
            for (i, v) in seq.iter().enumerate() {
                if beta(&pair.a, &pair.b, &BigUint::from(i)) != *v {
                    return Err(format!(
                        "{seq:?}: beta({}, {}, {i}) is wrong",
                        pair.a, pair.b
                    ));
                }
            }
            count += 1;
        }
    }
    let time = within(t, Duration::from_secs(60))?;
    Ok(format!("{count} sequences recovered, {time}"))
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    type Func = fn(&[u64]) -> u64;
    let defs: [(&str, usize, Func); 4] = [
        ("successor", 1, |a| a[0] + 1),
        ("addition", 2, |a| a[0] + a[1]),
        ("multiplication", 2, |a| a[0] * a[1]),
        ("factorial", 1, |a| factorial(a[0])),
    ];
    let mut evaluations = 0;
    for (name, arity, func) in defs {
        let formula =
            compile_pr(&lookup(name).ok_or(format!("{name} missing"))?).map_err(|e| e.0)?;
        let top = func(&vec![5; arity]);
        let args: Vec<Vec<u64>> = if arity == 1 {
            (0..=5).map(|k| vec![k]).collect()
        } else {
            (0..=5)
                .flat_map(|a| (0..=5).map(move |b| vec![a, b]))
                .collect()
        };
        for k in args {
            let mut bound = formula.clone();
            for (i, v) in k.iter().enumerate() {
                bound = bound.substitute(&arg_var(i + 1), &numeral(*v));
            }
            let mut witnesses = 0;
            for m in 0..=top {
                let inst = bound.substitute(RESULT_VAR, &numeral(m));
                let v = eval_sigma1(&inst, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
                evaluations += 1;
                let expected = func(&k) == m;
                check(
                    v == if expected {
                        TriBool::True
                    } else {
                        TriBool::False
                    },
                    || format!("{name}{k:?} = {m}: evaluator says {}", v.as_str()),
                )?;
                witnesses += usize::from(v == TriBool::True);
            }
            check(witnesses == 1, || {
                format!("{name}{k:?}: {witnesses} values")
            })?;
        }
    }
    Ok(format!(
        "{evaluations} evaluations exact, one value per argument, {:.2?}",
        t.elapsed()
    ))
}

/// A random valid derivation from one hypothesis.
fn random_derivation(rng: &mut impl Rng) -> Proof {
    let mut pick = |n: usize| rng.next_u32() as usize % n;
    let hyps = [
        "(x = 0)",
        "(y = (x+1))",
        "~(z = 0)",
        "(0 = 1)",
        "(Ax)(x = z)",
    ];
    let a = f(hyps[pick(hyps.len())]);
    let mut p = Proof {
        hypotheses: vec![a.clone()],
        lines: vec![],
    };
    p.push(a.clone(), Justification::Hyp(0));
    let steps = 3 + pick(8);
    for _ in 0..steps {
        let n = p.lines.len();
        match pick(4) {
            0 => {
                let k = pick(6);
                p.push(
                    PA_AXIOMS[k].clone(),
                    Justification::Axiom(AxiomId::Pa(k as u8 + 1)),
                );
            }
            1 => {
                let (i, g) = (pick(n), p.lines[pick(n)].formula.clone());
                let fi = p.lines[i].formula.clone();
                let k = p.push(
                    Formula::imp(fi.clone(), Formula::imp(g.clone(), fi.clone())),
                    Justification::Axiom(AxiomId::Logical(1)),
                );
                p.push(Formula::imp(g, fi), Justification::Mp(i, k));
            }
            2 => {
                let i = pick(n);
                let free = a.free_variables();
                let vars: Vec<&str> = ["x", "y", "z", "w"]
                    .into_iter()
                    .filter(|v| !free.contains(*v))
                    .collect();
                let v = vars[pick(vars.len())];
                let g = Formula::forall(v, p.lines[i].formula.clone());
                p.push(g, Justification::Gen(i, v.to_string()));
            }
            _ => {
                let lines = &p.lines;
                let found = (0..n)
                    .flat_map(|j| (0..n).map(move |i| (i, j)))
                    .find_map(|(i, j)| match &lines[j].formula {
                        Formula::Imp(x, y) if **x == lines[i].formula && j + 1 < n => {
                            Some((i, j, (**y).clone()))
                        }
                        _ => None,
                    });
                if let Some((i, j, g)) = found {
                    p.push(g, Justification::Mp(i, j));
                }
            }
        }
    }
    p
}

fn criterion_6() -> Outcome {
    let mut runner = TestRunner::deterministic();
    for k in 0..20 {
        let p = random_derivation(runner.rng());
        check(check_proof(&p).valid, || {
            format!("generated derivation {k} is invalid")
        })?;
        let out = deduction_transform(&p).map_err(|e| format!("derivation {k}: {e}"))?;
        let expected = Formula::imp(p.hypotheses[0].clone(), p.conclusion().unwrap().clone());
        check(check_proof(&out).valid, || format!("output {k} is invalid"))?;
        check(out.conclusion() == Some(&expected), || {
            format!("output {k} concludes the wrong formula")
        })?;
        check(out.hypotheses.is_empty(), || {
            format!("output {k} keeps a hypothesis")
        })?;
    }
    let text = std::fs::read_to_string(fixtures("deduction").join("gen_violation.prf"))
        .map_err(|e| e.to_string())?;
    let bad = parse_proof(&text).map_err(|e| e.to_string())?;
    let rejected = matches!(
        deduction_transform(&bad),
        Err(DeductionError::GenOnFreeVariable { .. })
    );
    check(rejected, || "Gen-violation fixture was not rejected".into())?;
    Ok("20 random derivations discharged to valid proofs of A => B, Gen violation rejected".into())
}

fn criterion_7() -> Outcome {
    let gus = construct_builtin(Builtin::Gus);
    let rus = construct_builtin(Builtin::Rus);
    let p = Term::Num(gus.code.clone());
    let u = Term::Num(rus.code.clone());
    let y = || Term::Var("y".into());
    let gus_shape = Formula::forall("y", Formula::not(Formula::rel(RelConst::UpperQ, p, y())));
    check(gus.sentence == gus_shape, || {
        format!("GUS has the wrong shape: {:?}", gus.sentence)
    })?;
    let z = || Term::Var("z".into());
    let rus_shape = Formula::forall(
        "y",
        Formula::imp(
            Formula::rel(RelConst::UpperQ, u.clone(), y()),
            Formula::exists(
                "z",
                Formula::and(
                    Formula::Leq(z(), y()),
                    Formula::rel(RelConst::UpperS, u, z()),
                ),
            ),
        ),
    );
    check(rus.sentence == rus_shape, || {
        format!("RUS has the wrong shape: {:?}", rus.sentence)
    })?;
    check(
        decode_formula(&gus.code).ok() == Some(gus.template.clone()),
        || "p does not decode to the template".into(),
    )?;
    check(gus.code.to_string() == PINNED_GUS, || {
        format!("p changed: {}", gus.code)
    })?;
    check(rus.code.to_string() == PINNED_RUS, || {
        format!("u changed: {}", rus.code)
    })?;

    let d = diagonalize(&f("(x = x)")).map_err(|e| e.to_string())?;
    let mut proof = Proof::default();
    proof.push(
        d.sentence.clone(),
        Justification::Axiom(AxiomId::Equality(1)),
    );
    check(check_proof(&proof).valid, || {
        "no kernel proof of the diagonal sentence".into()
    })?;
    let j = encode_proof(&proof).map_err(|e| e.to_string())?.value;
    check(diag_rel_eval(RelConst::LowerQ, &d.code, &j), || {
        "q(h, j) is false".into()
    })?;
    check(!diag_rel_eval(RelConst::LowerS, &d.code, &j), || {
        "s(h, j) is true".into()
    })?;
    Ok("GUS and RUS match their patterns, codes pinned, (x = x) loop closes".into())
}

fn timed_audit(id: BuiltinChain, v: Variant) -> Result<AuditReport, String> {
    let t = Instant::now();
    let r = audit(&builtin_chain(id, v));
    within(t, Duration::from_secs(1)).map_err(|e| format!("{id}: {e}"))?;
    Ok(r)
}

fn breaks_at(r: &AuditReport, step: &str, reason: Reason) -> Result<(), String> {
    let first = r
        .first_unjustified()
        .ok_or(format!("{}: no unjustified step", r.chain))?;
    check(
        first.step.label == step && first.verdict.reason() == Some(reason),
        || {
            format!(
                "{}: first break is {} ({:?})",
                r.chain,
                first.step.label,
                first.verdict.reason()
            )
        },
    )
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    for id in [BuiltinChain::GodelA, BuiltinChain::GodelB] {
        let r = timed_audit(id, Variant::Literal)?;
        check(r.all_justified() && r.all_goals_supported(), || {
            format!("{id} is not fully justified")
        })?;
    }
    let r = timed_audit(BuiltinChain::Anand, Variant::Literal)?;
    breaks_at(&r, "(vi)", Reason::DeductionTheoremOnMetaImplication)?;
    check(r.goals.iter().all(|g| !g.supported), || {
        "anand: a goal is supported".into()
    })?;
    let r = timed_audit(BuiltinChain::RosserB, Variant::Literal)?;
    breaks_at(&r, "(x)(3)", Reason::WitnessAliasing)?;
    let r = timed_audit(BuiltinChain::Footnote13, Variant::Literal)?;
    breaks_at(&r, "(ii)", Reason::DeductionTheoremOnMetaImplication)?;
    let r = timed_audit(BuiltinChain::RosserA, Variant::Refined)?;
    check(r.all_justified(), || {
        "refined rosser_a has an unjustified step".into()
    })?;
    check(r.goal("(xiii)").is_some_and(|g| g.supported), || {
        "rosser_a goal (xiii) unsupported".into()
    })?;
    for id in BuiltinChain::ALL {
        for v in [Variant::Literal, Variant::Refined] {
            timed_audit(id, v)?;
        }
    }
    Ok(format!(
        "all verdicts as expected, each audit under 1 s, total {:.2?}",
        t.elapsed()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("kernel corpus", criterion_1),
        ("codec round trip", criterion_2),
        ("prf agrees with the kernel", criterion_3),
        ("beta recovery", criterion_4),
        ("representation in the standard model", criterion_5),
        ("deduction transformer", criterion_6),
        ("diagonalization", criterion_7),
        ("audit verdicts", criterion_8),
    ];
    let only: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.iter().any(|o| name.contains(o.as_str())) {
            continue;
        }
        match run() {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
