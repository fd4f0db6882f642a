use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use proptest::prelude::*;

use super::*;
use crate::syntax::parse_formula as parse;

fn run(id: BuiltinChain, v: Variant) -> AuditReport {
    audit(&builtin_chain(id, v))
}

fn unjustified(r: &AuditReport) -> Vec<(String, Reason)> {
    r.steps
        .iter()
        .filter_map(|s| Some((s.step.label.clone(), s.verdict.reason()?)))
        .collect()
}

#[test]
fn parse_rejects_empty_and_forward_references() {
    assert!(parse_chain("chain: x\n// nothing\n").is_err());
    let fwd = "(i) Consistent ; META-MP (ii)\n(ii) Consistent ; META-HYP\n";
    let e = parse_chain(fwd).unwrap_err();
    assert_eq!(e.line, 1);
    assert!(parse_chain("(i) Consistent ; META-HYP\ngoal: (ii)\n").is_err());
    assert!(parse_chain("(i) Consistent ; META-HYP\n(i) Consistent ; META-HYP\n").is_err());
}

#[test]
fn statements_parse_and_print() {
    let m = Macros::standard();
    let s = parse_statement("forall r: Prov{| q(@p, #r)} => NotProv{(0 = 1)}", &m).unwrap();
    let Meta::AllNum(v, body) = &s else {
        panic!("{s}")
    };
    assert_eq!(v, "r");
    assert!(matches!(&**body, Meta::Imp(..)));
    assert_eq!(
        parse_statement(&s.to_string(), &m).map(|t| t.alpha_eq(&s)),
        Ok(true)
    );
    let a = parse_statement("Prov{(0 = 0); (0 = 1)| (0 = 1)}", &m).unwrap();
    let b = parse_statement("Prov{(0 = 1); (0 = 0); (0 = 0)| (0 = 1)}", &m).unwrap();
    assert_eq!(a, b);
}

#[test]
fn godel_a_has_the_argued_steps() {
    let c = builtin_chain(BuiltinChain::GodelA, Variant::Literal);
    let labels: Vec<&str> = c.steps.iter().map(|s| s.label.as_str()).collect();
    for l in [
        "(i)", "(ii)", "(iii)", "(iv)", "(v)", "(vi)", "(vii)", "(viii)", "(ix)",
    ] {
        assert!(labels.contains(&l), "{l}");
    }
    assert_eq!(c.goals, ["(ix)"]);
    assert!(c.assumptions.contains(&Assumption::Consistent));
}

#[test]
fn catalogue_shapes() {
    let rules = list_rules();
    let names: BTreeSet<&str> = rules.iter().map(|r| r.name).collect();
    assert_eq!(names.len(), rules.len());
    let shapes = |n: &str| rules.iter().find(|r| r.name == n).unwrap().premises.len();
    assert_eq!(shapes("OBJ-DEDUCTION"), 1);
    assert_eq!(shapes("OMEGA"), 3);
    for id in BuiltinChain::ALL {
        for v in [Variant::Literal, Variant::Refined] {
            for s in builtin_chain(id, v).steps {
                assert!(names.contains(s.rule.as_str()), "{id}: {}", s.rule);
            }
        }
    }
}

#[test]
fn godel_halves_are_fully_justified() {
    for id in [BuiltinChain::GodelA, BuiltinChain::GodelB] {
        for v in [Variant::Literal, Variant::Refined] {
            let r = run(id, v);
            assert!(r.all_justified(), "{id} {v:?}: {:?}", unjustified(&r));
            assert!(r.all_goals_supported(), "{id} {v:?}: {:?}", r.goals);
        }
    }
}

#[test]
fn anand_breaks_at_deduction_on_meta_implication() {
    for v in [Variant::Literal, Variant::Refined] {
        let r = run(BuiltinChain::Anand, v);
        let first = r.first_unjustified().expect("a break");
        assert_eq!(first.step.label, "(vi)", "{v:?}: {:?}", unjustified(&r));
        assert_eq!(
            first.verdict.reason(),
            Some(Reason::DeductionTheoremOnMetaImplication)
        );
        assert!(!r.goal("(xiii)").unwrap().supported);
    }
    let r = run(BuiltinChain::Anand, Variant::Literal);
    assert_eq!(
        r.goal("(viii)").unwrap().blocked_by.as_deref(),
        Some("(vi)")
    );
    assert!(r.steps.iter().take(5).all(|s| s.verdict.is_justified()));
}

#[test]
fn rosser_a_literal_is_compressed() {
    let r = run(BuiltinChain::RosserA, Variant::Literal);
    assert_eq!(
        r.first_unjustified().map(|s| s.step.label.as_str()),
        Some("(ix)"),
        "{:?}",
        unjustified(&r)
    );
    assert!(!r.goal("(xiii)").unwrap().supported);
}

#[test]
fn rosser_a_refined_is_fully_justified() {
    let r = run(BuiltinChain::RosserA, Variant::Refined);
    assert!(r.all_justified(), "{:?}", unjustified(&r));
    assert!(r.goal("(xiii)").unwrap().supported);
}

#[test]
fn rosser_b_breaks_at_witness_aliasing() {
    for v in [Variant::Literal, Variant::Refined] {
        let r = run(BuiltinChain::RosserB, v);
        let first = r.first_unjustified().expect("a break");
        assert_eq!(first.step.label, "(x)(3)", "{v:?}: {:?}", unjustified(&r));
        assert_eq!(first.verdict.reason(), Some(Reason::WitnessAliasing));
        let g = r.goal("(xv)").unwrap();
        assert!(!g.supported);
        assert_eq!(g.blocked_by.as_deref(), Some("(x)(3)"));
    }
    let before_break = |r: &AuditReport| {
        r.steps
            .iter()
            .take_while(|s| s.step.label != "(x)(3)")
            .all(|s| s.verdict.is_justified())
    };
    assert!(before_break(&run(BuiltinChain::RosserB, Variant::Literal)));
}

#[test]
fn footnote13_breaks() {
    let r = run(BuiltinChain::Footnote13, Variant::Literal);
    let s = r.step("(ii)").unwrap();
    assert_eq!(
        s.verdict.reason(),
        Some(Reason::DeductionTheoremOnMetaImplication)
    );
    assert!(r.step("(iii)").unwrap().verdict.is_justified());
}

#[test]
fn eigenvariable_escape() {
    let text = "\
(i) Prov{| q(@p, #j)} ; META-HYP
(ii) forall j: Prov{| q(@p, #j)} ; ALL-INTRO (i)
goal: (ii)
";
    let r = audit(&parse_chain(text).unwrap());
    assert_eq!(
        r.step("(ii)").unwrap().verdict.reason(),
        Some(Reason::EigenvariableEscape)
    );
}

#[test]
fn unknown_rule_and_arity() {
    let text = "\
(i) Prov{| (0 = 0)} ; OBJ-LOGIC
(ii) Prov{| (0 = 0)} ; MAGIC (i)
(iii) NotProv{(0 = 0)} ; CONS-NOTPROV
";
    let r = audit(&parse_chain(text).unwrap());
    assert!(r.step("(i)").unwrap().verdict.is_justified());
    assert_eq!(
        r.step("(ii)").unwrap().verdict.reason(),
        Some(Reason::UnknownRule)
    );
    assert!(!r.step("(iii)").unwrap().verdict.is_justified());
}

#[test]
fn audits_are_fast_and_deterministic() {
    for id in BuiltinChain::ALL {
        for v in [Variant::Literal, Variant::Refined] {
            let t = Instant::now();
            let a = run(id, v);
            assert!(
                t.elapsed() < Duration::from_secs(1),
                "{id} {v:?} took {:?}",
                t.elapsed()
            );
            let b = run(id, v);
            assert_eq!(
                serde_json::to_string(&a.records(&Macros::standard())).unwrap(),
                serde_json::to_string(&b.records(&Macros::standard())).unwrap()
            );
        }
    }
}

#[test]
fn records_abbreviate_and_flag() {
    let r = run(BuiltinChain::RosserB, Variant::Literal);
    let recs = r.records(&Macros::standard());
    assert_eq!(recs.len(), r.steps.len());
    let x3 = recs.iter().find(|s| s.id == "(x)(3)").unwrap();
    assert_eq!(x3.verdict, "UNJUSTIFIED");
    assert_eq!(x3.reason, Some("witness-aliasing"));
    assert!(recs[0].statement.contains("@RUS"), "{}", recs[0].statement);
}

#[test]
fn logic_checker() {
    let f = |s: &str| parse(s).unwrap();
    let none = BTreeSet::new();
    assert!(logic::valid(&f("((x = y) => (y = x))")));
    assert!(logic::valid(&f("((Ax)(x = x) v (0 = 1))")));
    assert!(logic::entails(&[f("(Ax)(x = 0)")], &f("(y = 0)"), &none));
    assert!(logic::entails(
        &[f("(Ex)((x = y) & (x = 0))")],
        &f("(y = 0)"),
        &none
    ));
    assert!(!logic::valid(&f("(x = 0)")));
    assert!(!logic::entails(
        &[f("(x = 0)")],
        &f("(Ax)(x = 0)"),
        &BTreeSet::from(["x".to_string()])
    ));
    assert!(!logic::entails(
        &[f("(Ex)(x = 0)")],
        &f("(Ax)(x = 0)"),
        &none
    ));
    assert!(!logic::valid(&f("(0 = 1)")));
}

#[test]
fn dropping_a_premise_never_helps() {
    let text = include_str!("../../fixtures/chains/godel_a.literal.chain");
    let chain = parse_chain(text).unwrap();
    let full = audit(&chain);
    for (i, s) in chain.steps.iter().enumerate() {
        if s.premises.is_empty() || !full.steps[i].verdict.is_justified() {
            continue;
        }
        let mut c = chain.clone();
        c.steps[i].premises.pop();
        let r = audit(&c);
        let rule = &c.steps[i].rule;
        if rule != "OBJ-LOGIC" {
            assert!(!r.steps[i].verdict.is_justified(), "{}", s.label);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn justified_steps_stay_justified_when_goals_change(id in 0usize..6, refined: bool) {
        let v = if refined { Variant::Refined } else { Variant::Literal };
        let mut chain = builtin_chain(BuiltinChain::ALL[id], v);
        let base = audit(&chain);
        chain.goals = chain.steps.iter().map(|s| s.label.clone()).collect();
        let all = audit(&chain);
        for (a, b) in base.steps.iter().zip(&all.steps) {
            prop_assert_eq!(&a.verdict, &b.verdict);
        }
        for g in &all.goals {
            prop_assert_eq!(g.supported, g.blocked_by.is_none());
        }
    }

    #[test]
    fn truncating_a_chain_keeps_earlier_verdicts(id in 0usize..6, cut in 1usize..30) {
        let chain = builtin_chain(BuiltinChain::ALL[id], Variant::Literal);
        let full = audit(&chain);
        let mut short = chain.clone();
        short.steps.truncate(cut.min(chain.steps.len()));
        short.goals.clear();
        let part = audit(&short);
        for (a, b) in part.steps.iter().zip(&full.steps) {
            prop_assert_eq!(&a.verdict, &b.verdict);
        }
    }
}
