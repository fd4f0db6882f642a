//! End-to-end runs of the binary over the fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pa-audit"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = bin(&all);
    (
        code(&o),
        serde_json::from_slice(&o.stdout).expect("json report"),
    )
}

fn fixture_files(dir: &str) -> Vec<PathBuf> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(dir);
    let mut v: Vec<_> = std::fs::read_dir(root)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    v.sort();
    v
}

#[test]
fn every_corpus_proof_checks() {
    for p in fixture_files("proofs") {
        let o = bin(&["check-proof", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", p.display());
        assert_eq!(stdout(&o).lines().next(), Some("valid"));
    }
    let o = bin(&["check-proof", "fixtures/proofs/plus_zero.prf"]);
    assert_eq!(stdout(&o), "valid\n");
}

#[test]
fn tampered_proof_exits_one_and_garbage_exits_two() {
    let dir = std::env::temp_dir().join(format!("pa-audit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.prf");
    std::fs::write(&bad, "1. (x+0) = x ; PA3\n2. (0+0) = 0 ; MP 1 1\n").unwrap();
    let o = bin(&["check-proof", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(
        stdout(&o).starts_with("invalid at line 2"),
        "{}",
        stdout(&o)
    );
    let garbage = dir.join("garbage.prf");
    std::fs::write(&garbage, "this is not a proof\n").unwrap();
    assert_eq!(code(&bin(&["check-proof", garbage.to_str().unwrap()])), 2);
    assert_eq!(
        code(&bin(&[
            "check-proof",
            dir.join("missing.prf").to_str().unwrap()
        ])),
        2
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn deduction_fixtures() {
    assert_eq!(
        code(&bin(&[
            "check-proof",
            "--discharge",
            "fixtures/deduction/gen_allowed.prf"
        ])),
        0
    );
    let o = bin(&[
        "check-proof",
        "--discharge",
        "fixtures/deduction/gen_violation.prf",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("rejected"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&bin(&[])), 2);
    assert_eq!(code(&bin(&["frobnicate"])), 2);
    assert_eq!(code(&bin(&["parse", "(0 ="])), 2);
    assert_eq!(code(&bin(&["audit"])), 2);
    assert_eq!(code(&bin(&["audit", "--builtin", "nonesuch"])), 2);
    assert_eq!(code(&bin(&["pr", "compile", "nonesuch"])), 2);
    assert_eq!(code(&bin(&["decode", "formula", "abc"])), 2);
    assert_eq!(code(&bin(&["beta", "find", "1,x"])), 2);
}

#[test]
fn builtin_audits_follow_the_exit_contract() {
    for id in [
        "godel_a",
        "godel_b",
        "anand",
        "rosser_a",
        "rosser_b",
        "footnote13",
    ] {
        for variant in ["--literal", "--refined"] {
            let (c, report) = json(&["audit", "--builtin", id, variant]);
            let p = &report["payload"];
            let steps = p["steps"].as_array().unwrap();
            let all_ok = steps.iter().all(|s| s["verdict"] == "JUSTIFIED")
                && p["goals"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .all(|g| g["supported"] == true);
            assert_eq!(c, if all_ok { 0 } else { 1 }, "{id} {variant}");
            for s in steps {
                for field in [
                    "id",
                    "statement",
                    "claimed_rule",
                    "verdict",
                    "premises",
                    "provenance",
                ] {
                    assert!(s.get(field).is_some(), "{id}: missing {field}");
                }
                assert_eq!(s.get("reason").is_some(), s["verdict"] == "UNJUSTIFIED");
            }
        }
    }
}

#[test]
fn anand_report_names_step_six() {
    let o = bin(&["audit", "--builtin", "anand", "--literal"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    let line = text
        .lines()
        .find(|l| l.starts_with("(vi) "))
        .expect("step (vi)");
    assert!(
        line.contains("UNJUSTIFIED (deduction-theorem-on-meta-implication)"),
        "{line}"
    );
    let (_, report) = json(&["audit", "--builtin", "anand"]);
    let steps = report["payload"]["steps"].as_array().unwrap();
    let first = steps
        .iter()
        .find(|s| s["verdict"] == "UNJUSTIFIED")
        .unwrap();
    assert_eq!(first["id"], "(vi)");
    assert_eq!(first["reason"], "deduction-theorem-on-meta-implication");
}

#[test]
fn chain_files_audit() {
    for p in fixture_files("chains") {
        let c = code(&bin(&["audit", p.to_str().unwrap()]));
        assert!(c == 0 || c == 1, "{}: {c}", p.display());
    }
    let (c, _) = json(&["audit", "fixtures/chains/godel_a.literal.chain"]);
    assert_eq!(c, 0);
}

#[test]
fn diagonal_sentences() {
    let o = bin(&["gus"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("template: (Ay)~Q(x, y)"), "{text}");
    assert!(text.contains("p = 6323158676708678423867341974347633137218"));
    let (c, report) = json(&["rus"]);
    assert_eq!(c, 0);
    assert!(report["payload"]["sentence"]
        .as_str()
        .unwrap()
        .contains("=<"));
    assert_eq!(report["codec_version"], "pa-codec/1");
}

#[test]
fn codes_round_trip_through_the_cli() {
    let o = bin(&["encode", "formula", "(Ax)((x+0) = x)"]);
    assert_eq!(code(&o), 0);
    let n = stdout(&o).trim().to_string();
    assert_eq!(
        stdout(&bin(&["decode", "formula", &n])),
        "(Ax)((x+0) = x)\n"
    );
    assert_eq!(code(&bin(&["decode", "formula", "7"])), 1);
    let p = bin(&["encode", "proof", "fixtures/proofs/plus_zero.prf"]);
    let m = stdout(&p).trim().to_string();
    let k = stdout(&bin(&["encode", "formula", "((0+0) = 0)"]))
        .trim()
        .to_string();
    assert_eq!(code(&bin(&["eval", "prf", &k, &m])), 0);
    assert_eq!(code(&bin(&["eval", "prf", &n, &m])), 1);
    assert!(stdout(&bin(&["decode", "proof", &m])).contains("Gen 1 x"));
}

#[test]
fn evaluator_and_beta() {
    assert_eq!(
        stdout(&bin(&["eval", "sigma1", "(Ey)((y+1) = 3)"])),
        "true\n"
    );
    assert_eq!(code(&bin(&["eval", "sigma1", "(y = 0)"])), 2);
    let o = bin(&["beta", "find", "2"]);
    assert_eq!(stdout(&o), "a = 2\nb = 2\n");
    let (c, r) = json(&["beta", "find", "0,0,0"]);
    assert_eq!(c, 0);
    assert_eq!(r["payload"]["pair"]["a"], "0");
    assert_eq!(code(&bin(&["pr", "compile", "factorial"])), 0);
    assert_eq!(code(&bin(&["rules"])), 0);
    assert_eq!(stdout(&bin(&["--codec-version"])), "pa-codec/1\n");
}
