use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use pa_audit::codec::{self, CodeKind, GoedelCode, CODEC_VERSION};
use pa_audit::diagonal::{construct_builtin, Builtin, DiagonalResult};
use pa_audit::kernel::{check_proof, deduction_transform, format_proof, parse_proof};
use pa_audit::metalogic::{
    audit, builtin_chain, list_rules, parse_chain, AuditReport, Chain, Macros, Variant,
};
use pa_audit::recursion::{
    beta_find, catalogue, compile_pr, diag_rel_eval, eval_sigma1, lookup, prf_eval, TriBool,
    DEFAULT_BUDGET,
};
use pa_audit::syntax::{parse_formula, render, Formula, RelConst};

#[derive(Parser)]
#[command(
    name = "pa-audit",
    version,
    about = "Peano Arithmetic proofs, Goedel codes and provability audits"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Search budget for the existential evaluator.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Print the codec version and exit.
    #[arg(long)]
    codec_version: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and describe it.
    Parse { formula: String },
    /// Print a formula in canonical form.
    Render { formula: String },
    /// Check a proof file.
    CheckProof {
        file: PathBuf,
        /// Discharge the last hypothesis with the deduction transformer.
        #[arg(long)]
        discharge: bool,
    },
    /// Goedel-number a formula (given as text) or a proof (given as a file).
    Encode { kind: Kind, input: String },
    /// Decode a Goedel number.
    Decode { kind: Kind, code: String },
    /// Evaluate a decidable relation or an existential formula.
    #[command(subcommand)]
    Eval(Eval),
    /// Beta-function utilities.
    #[command(subcommand)]
    Beta(BetaCmd),
    /// Primitive recursive definitions.
    #[command(subcommand)]
    Pr(PrCmd),
    /// The first diagonal sentence.
    Gus,
    /// The second diagonal sentence.
    Rus,
    /// Audit a chain of meta-statements.
    Audit(AuditArgs),
    /// List the meta-rule catalogue.
    Rules,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Formula,
    Proof,
}

#[derive(Subcommand)]
enum Eval {
    /// prf(k, m): m codes a proof of the formula coded by k.
    Prf { k: String, m: String },
    /// q(h, j): j codes a proof of the diagonal instance of h.
    Q { h: String, j: String },
    /// s(h, j): j codes a proof of the negated diagonal instance of h.
    S { h: String, j: String },
    /// Evaluate a closed existential formula in the standard model.
    Sigma1 { formula: String },
}

#[derive(Subcommand)]
enum BetaCmd {
    /// Smallest pair (a, b) coding a comma-separated sequence.
    Find { csv: String },
}

#[derive(Subcommand)]
enum PrCmd {
    /// Compile a named definition to its representing formula.
    Compile { name: String },
    /// List the named definitions.
    List,
}

#[derive(Args)]
struct AuditArgs {
    /// A chain file.
    #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
    file: Option<PathBuf>,
    /// One of the bundled chains.
    #[arg(long)]
    builtin: Option<String>,
    #[arg(long, conflicts_with = "refined")]
    literal: bool,
    #[arg(long)]
    refined: bool,
}

/// A finished command: whether the answer was positive, and its report.
struct Outcome {
    ok: bool,
    text: String,
    payload: Value,
}

impl Outcome {
    fn new(ok: bool, text: String, payload: Value) -> Outcome {
        Outcome { ok, text, payload }
    }
}

type Run = Result<Outcome, String>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.codec_version {
        println!("{CODEC_VERSION}");
        return ExitCode::SUCCESS;
    }
    let Some(command) = &cli.command else {
        eprintln!("error: a subcommand is required (try --help)");
        return ExitCode::from(2);
    };
    match run(command, cli.budget) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => {
                    let report = json!({
                        "command": std::env::args().skip(1).collect::<Vec<_>>(),
                        "codec_version": CODEC_VERSION,
                        "ok": out.ok,
                        "payload": out.payload,
                    });
                    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
                }
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command, budget: u64) -> Run {
    match command {
        Command::Parse { formula } => cmd_parse(formula),
        Command::Render { formula } => {
            let f = formula_arg(formula)?;
            let text = render(&f);
            Ok(Outcome::new(
                true,
                format!("{text}\n"),
                json!({ "formula": text }),
            ))
        }
        Command::CheckProof { file, discharge } => cmd_check_proof(file, *discharge),
        Command::Encode { kind, input } => cmd_encode(*kind, input),
        Command::Decode { kind, code } => cmd_decode(*kind, code),
        Command::Eval(e) => cmd_eval(e, budget),
        Command::Beta(BetaCmd::Find { csv }) => cmd_beta(csv),
        Command::Pr(PrCmd::Compile { name }) => {
            let d = lookup(name).ok_or_else(|| {
                let names: Vec<_> = catalogue().into_iter().map(|(n, _)| n).collect();
                format!("unknown definition `{name}`; known: {}", names.join(", "))
            })?;
            let f = compile_pr(&d).map_err(|e| e.0)?;
            let text = render(&f);
            Ok(Outcome::new(
                true,
                format!("{text}\n"),
                json!({ "name": name, "formula": text }),
            ))
        }
        Command::Pr(PrCmd::List) => {
            let names: Vec<_> = catalogue().into_iter().map(|(n, _)| n).collect();
            Ok(Outcome::new(
                true,
                names.join("\n") + "\n",
                json!({ "definitions": names }),
            ))
        }
        Command::Gus => Ok(diagonal(Builtin::Gus)),
        Command::Rus => Ok(diagonal(Builtin::Rus)),
        Command::Audit(args) => cmd_audit(args),
        Command::Rules => {
            let rules = list_rules();
            let mut text = String::new();
            for r in &rules {
                let _ = writeln!(text, "{}", r.name);
                for p in &r.premises {
                    let _ = writeln!(text, "    {p}");
                }
                let _ = writeln!(text, "  --------\n    {}\n  {}", r.conclusion, r.basis);
            }
            Ok(Outcome::new(true, text, json!({ "rules": rules })))
        }
    }
}

fn formula_arg(text: &str) -> Result<Formula, String> {
    parse_formula(text).map_err(|e| format!("cannot parse formula: {e}"))
}

fn number_arg(text: &str) -> Result<BigUint, String> {
    text.trim()
        .parse()
        .map_err(|_| format!("`{text}` is not a natural number"))
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_parse(text: &str) -> Run {
    let f = formula_arg(text)?;
    let free: Vec<String> = f.free_variables().into_iter().collect();
    let canonical = render(&f);
    let mut out = format!("{canonical}\n");
    let _ = writeln!(
        out,
        "free variables: {}",
        if free.is_empty() {
            "none".into()
        } else {
            free.join(", ")
        }
    );
    let _ = writeln!(out, "pure arithmetic: {}", f.is_pure());
    Ok(Outcome::new(
        true,
        out,
        json!({ "formula": canonical, "free_variables": free, "pure": f.is_pure() }),
    ))
}

fn cmd_check_proof(file: &Path, discharge: bool) -> Run {
    let proof = parse_proof(&read(file)?).map_err(|e| e.to_string())?;
    if discharge {
        return Ok(match deduction_transform(&proof) {
            Ok(p) => {
                let valid = check_proof(&p).valid;
                let text = format_proof(&p);
                Outcome::new(
                    valid,
                    text.clone(),
                    json!({ "discharged": true, "valid": valid, "proof": text }),
                )
            }
            Err(e) => Outcome::new(
                false,
                format!("rejected: {e}\n"),
                json!({ "discharged": false, "error": e.to_string() }),
            ),
        });
    }
    let v = check_proof(&proof);
    let flagged: Vec<Value> = v
        .flagged_generalisations
        .iter()
        .map(|(l, x)| json!({ "line": l + 1, "variable": x }))
        .collect();
    let mut text = if v.valid {
        "valid\n".to_string()
    } else {
        let at = v
            .first_bad_line
            .map_or(String::new(), |l| format!(" at line {}", l + 1));
        let reason = v
            .reason
            .as_ref()
            .map_or(String::new(), |r| format!(": {r}"));
        format!("invalid{at}{reason}\n")
    };
    for (l, x) in &v.flagged_generalisations {
        let _ = writeln!(
            text,
            "note: line {} generalises on `{x}`, free in a hypothesis",
            l + 1
        );
    }
    let payload = json!({
        "valid": v.valid,
        "first_bad_line": v.first_bad_line.map(|l| l + 1),
        "reason": v.reason.as_ref().map(|r| r.code()),
        "detail": v.reason.as_ref().map(|r| r.to_string()),
        "conclusion": proof.conclusion().map(render),
        "flagged_generalisations": flagged,
    });
    Ok(Outcome::new(v.valid, text, payload))
}

fn cmd_encode(kind: Kind, input: &str) -> Run {
    let code = match kind {
        Kind::Formula => codec::encode_formula(&formula_arg(input)?),
        Kind::Proof => {
            let proof = parse_proof(&read(Path::new(input))?).map_err(|e| e.to_string())?;
            codec::encode_proof(&proof).map_err(|e| e.to_string())?
        }
    };
    let value = code.value.to_string();
    Ok(Outcome::new(
        true,
        format!("{value}\n"),
        json!({ "code": value }),
    ))
}

fn cmd_decode(kind: Kind, code: &str) -> Run {
    let value = number_arg(code)?;
    let kind = match kind {
        Kind::Formula => CodeKind::Formula,
        Kind::Proof => CodeKind::Proof,
    };
    Ok(match codec::decode(&GoedelCode { value, kind }) {
        Ok(text) => {
            let text = if text.ends_with('\n') {
                text
            } else {
                text + "\n"
            };
            Outcome::new(true, text.clone(), json!({ "decoded": text.trim_end() }))
        }
        Err(e) => Outcome::new(false, format!("{e}\n"), json!({ "error": e.to_string() })),
    })
}

fn truth(b: bool) -> Outcome {
    Outcome::new(b, format!("{b}\n"), json!({ "value": b }))
}

fn cmd_eval(e: &Eval, budget: u64) -> Run {
    match e {
        Eval::Prf { k, m } => Ok(truth(prf_eval(&number_arg(k)?, &number_arg(m)?))),
        Eval::Q { h, j } => Ok(truth(diag_rel_eval(
            RelConst::LowerQ,
            &number_arg(h)?,
            &number_arg(j)?,
        ))),
        Eval::S { h, j } => Ok(truth(diag_rel_eval(
            RelConst::LowerS,
            &number_arg(h)?,
            &number_arg(j)?,
        ))),
        Eval::Sigma1 { formula } => {
            let v = eval_sigma1(&formula_arg(formula)?, budget).map_err(|e| e.to_string())?;
            Ok(Outcome::new(
                v == TriBool::True,
                format!("{}\n", v.as_str()),
                json!({ "value": v, "budget": budget }),
            ))
        }
    }
}

fn cmd_beta(csv: &str) -> Run {
    let seq = csv
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(number_arg)
        .collect::<Result<Vec<_>, _>>()?;
    if seq.is_empty() {
        return Err("empty sequence".into());
    }
    let pair = beta_find(&seq);
    Ok(Outcome::new(
        true,
        format!("a = {}\nb = {}\n", pair.a, pair.b),
        json!({ "sequence": seq.iter().map(|n| n.to_string()).collect::<Vec<_>>(), "pair": pair }),
    ))
}

fn diagonal(b: Builtin) -> Outcome {
    let DiagonalResult {
        template,
        code,
        sentence,
    } = construct_builtin(b);
    let (t, s) = (render(&template), render(&sentence));
    let letter = match b {
        Builtin::Gus => "p",
        Builtin::Rus => "u",
    };
    Outcome::new(
        true,
        format!("template: {t}\n{letter} = {code}\nsentence: {s}\n"),
        json!({ "name": b.to_string(), "template": t, "code": code.to_string(), "sentence": s }),
    )
}

fn cmd_audit(args: &AuditArgs) -> Run {
    let variant = if args.refined {
        Variant::Refined
    } else {
        Variant::Literal
    };
    let chain: Chain = match (&args.file, &args.builtin) {
        (_, Some(id)) => builtin_chain(id.parse()?, variant),
        (Some(file), None) => {
            parse_chain(&read(file)?).map_err(|e| format!("{}: {e}", file.display()))?
        }
        (None, None) => return Err("give a chain file or --builtin <id>".into()),
    };
    let report = audit(&chain);
    let macros = Macros::standard();
    let records = report.records(&macros);
    let ok = report.all_justified() && report.all_goals_supported();
    let text = audit_text(&chain, &report, &macros);
    let payload = json!({
        "chain": chain.name,
        "variant": args.builtin.as_ref().map(|_| match variant {
            Variant::Literal => "literal",
            Variant::Refined => "refined",
        }),
        "assumptions": chain.assumptions.iter().map(|a| a.name()).collect::<Vec<_>>(),
        "steps": records,
        "goals": report.goals,
    });
    Ok(Outcome::new(ok, text, payload))
}

fn audit_text(chain: &Chain, report: &AuditReport, macros: &Macros) -> String {
    let mut out = String::new();
    let assumptions: Vec<_> = chain.assumptions.iter().map(|a| a.name()).collect();
    let _ = writeln!(
        out,
        "chain {} (assuming {})",
        chain.name,
        if assumptions.is_empty() {
            "nothing".into()
        } else {
            assumptions.join(", ")
        }
    );
    let width = report
        .steps
        .iter()
        .map(|s| s.step.label.len())
        .max()
        .unwrap_or(0);
    for r in report.records(macros) {
        let verdict = match r.reason {
            Some(reason) => format!("{} ({reason})", r.verdict),
            None => r.verdict.to_string(),
        };
        let cites = if r.premises.is_empty() {
            String::new()
        } else {
            format!(" {}", r.premises.join(" "))
        };
        let _ = writeln!(out, "{:width$}  {verdict}  {}{cites}", r.id, r.claimed_rule);
        let _ = writeln!(out, "{:width$}    {}", "", r.statement);
    }
    for g in &report.goals {
        match (&g.supported, &g.blocked_by) {
            (true, _) => {
                let _ = writeln!(out, "goal {}: supported", g.goal);
            }
            (false, Some(b)) => {
                let _ = writeln!(out, "goal {}: unsupported, blocked by {b}", g.goal);
            }
            (false, None) => {
                let _ = writeln!(out, "goal {}: unsupported", g.goal);
            }
        }
    }
    out
}
