use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::statement::Meta;
use crate::diagonal::{construct_builtin, Builtin};
use crate::syntax::{lex, parse_tokens, tokens, tokens_term, Formula, Term, Token};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    pub label: String,
    pub statement: Meta,
    pub rule: String,
    pub premises: Vec<String>,
    pub discharge: Option<String>,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub name: String,
    /// A subset of `Consistent` and `OmegaConsistent`.
    pub assumptions: BTreeSet<Assumption>,
    pub steps: Vec<ChainStep>,
    pub goals: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Assumption {
    Consistent,
    OmegaConsistent,
}

impl Assumption {
    pub fn name(self) -> &'static str {
        match self {
            Assumption::Consistent => "Consistent",
            Assumption::OmegaConsistent => "OmegaConsistent",
        }
    }
}

impl Chain {
    pub fn step(&self, label: &str) -> Option<&ChainStep> {
        self.steps.iter().find(|s| s.label == label)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.steps.iter().position(|s| s.label == label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ChainError {
    pub line: usize,
    pub msg: String,
}

/// Abbreviations usable inside formulas of a chain file: `@GUS` and `@RUS`
/// for the two diagonal sentences, `@p` and `@u` for their template codes.
#[derive(Debug, Clone)]
pub struct Macros {
    formulas: HashMap<String, Formula>,
    terms: HashMap<String, Term>,
}

impl Macros {
    pub fn standard() -> Macros {
        let gus = construct_builtin(Builtin::Gus);
        let rus = construct_builtin(Builtin::Rus);
        Macros {
            formulas: HashMap::from([
                ("GUS".to_string(), gus.sentence),
                ("RUS".to_string(), rus.sentence),
            ]),
            terms: HashMap::from([
                ("p".to_string(), Term::Num(gus.code)),
                ("u".to_string(), Term::Num(rus.code)),
            ]),
        }
    }

    fn expand(&self, name: &str) -> Option<Vec<Token>> {
        if let Some(f) = self.formulas.get(name) {
            return Some(tokens(f));
        }
        self.terms.get(name).map(tokens_term)
    }

    /// Replace expansions of the macros in rendered text by their names.
    pub fn abbreviate(&self, text: &str) -> String {
        let mut out = text.to_string();
        let mut fs: Vec<_> = self.formulas.iter().collect();
        fs.sort();
        for (name, f) in fs {
            out = out.replace(&crate::syntax::render(f), &format!("@{name}"));
        }
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort();
        for (name, t) in ts {
            out = out.replace(&crate::syntax::render_term(t), &format!("@{name}"));
        }
        out
    }
}

pub fn parse_formula_with(text: &str, macros: &Macros) -> Result<Formula, String> {
    let mut toks = Vec::new();
    let mut rest = text;
    while let Some(at) = rest.find('@') {
        toks.extend(
            lex(&rest[..at])
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(|(t, _)| t),
        );
        let name_len = rest[at + 1..]
            .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
            .unwrap_or(rest.len() - at - 1);
        let name = &rest[at + 1..at + 1 + name_len];
        toks.extend(
            macros
                .expand(name)
                .ok_or_else(|| format!("unknown abbreviation `@{name}`"))?,
        );
        rest = &rest[at + 1 + name_len..];
    }
    toks.extend(
        lex(rest)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|(t, _)| t),
    );
    parse_tokens(&toks).map_err(|e| format!("in formula `{}`: {e}", text.trim()))
}

pub fn parse_statement(text: &str, macros: &Macros) -> Result<Meta, String> {
    let mut p = StatementParser {
        s: text,
        pos: 0,
        macros,
    };
    let m = p.meta()?;
    p.ws();
    if p.pos != text.len() {
        return Err(format!("unexpected `{}`", &text[p.pos..]));
    }
    Ok(m)
}

struct StatementParser<'a> {
    s: &'a str,
    pos: usize,
    macros: &'a Macros,
}

impl<'a> StatementParser<'a> {
    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.s.len() - trimmed.len();
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.ws();
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.ws();
        let r = self.rest();
        let boundary = r[kw.len().min(r.len())..]
            .chars()
            .next()
            .is_none_or(|c| !c.is_ascii_alphanumeric() && c != '_');
        if r.starts_with(kw) && boundary {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn meta(&mut self) -> Result<Meta, String> {
        let a = self.unary()?;
        if self.eat("=>") {
            let b = self.meta()?;
            return Ok(Meta::imp(a, b));
        }
        Ok(a)
    }

    fn ident(&mut self) -> Result<String, String> {
        self.ws();
        let r = self.rest();
        let n = r
            .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
            .unwrap_or(r.len());
        if n == 0 || !r.starts_with(|c: char| c.is_ascii_lowercase()) {
            return Err(format!("expected a meta-variable name at `{r}`"));
        }
        self.pos += n;
        Ok(r[..n].to_string())
    }

    fn braced(&mut self) -> Result<&'a str, String> {
        if !self.eat("{") {
            return Err(format!("expected `{{` at `{}`", self.rest()));
        }
        let r = self.rest();
        let close = r.find('}').ok_or("unclosed `{`")?;
        self.pos += close + 1;
        Ok(&r[..close])
    }

    fn unary(&mut self) -> Result<Meta, String> {
        for (kw, all) in [("forall", true), ("exists", false)] {
            if self.keyword(kw) {
                let v = self.ident()?;
                if !self.eat(":") {
                    return Err(format!("expected `:` after `{kw} {v}`"));
                }
                let body = self.meta()?;
                return Ok(if all {
                    Meta::all(&v, body)
                } else {
                    Meta::some(&v, body)
                });
            }
        }
        if self.keyword("Prov") {
            let inner = self.braced()?;
            let (ctx, f) = inner.split_once('|').ok_or("`Prov{..}` needs `|`")?;
            let ctx = ctx
                .split(';')
                .filter(|c| !c.trim().is_empty())
                .map(|c| parse_formula_with(c, self.macros))
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(Meta::prov(ctx, parse_formula_with(f, self.macros)?));
        }
        if self.keyword("NotProv") {
            let inner = self.braced()?;
            return Ok(Meta::NotProv(parse_formula_with(inner, self.macros)?));
        }
        if self.keyword("OmegaConsistent") {
            return Ok(Meta::OmegaConsistent);
        }
        if self.keyword("Consistent") {
            return Ok(Meta::Consistent);
        }
        if self.keyword("FALSE") {
            return Ok(Meta::False);
        }
        if self.eat("(") {
            let m = self.meta()?;
            if !self.eat(")") {
                return Err(format!("expected `)` at `{}`", self.rest()));
            }
            return Ok(m);
        }
        Err(format!("expected a meta-statement at `{}`", self.rest()))
    }
}

/// Split at the last `;` that is not inside braces.
fn split_rule(line: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    let mut last = None;
    for (i, c) in line.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            ';' if depth == 0 => last = Some(i),
            _ => {}
        }
    }
    last.map(|i| (&line[..i], &line[i + 1..]))
}

/// Parse a chain file.
///
/// ```text
/// chain: name
/// assume: Consistent, OmegaConsistent
/// (i) Prov{| @GUS} ; META-HYP % where the step comes from
/// (ii) Prov{| @GUS} => exists r: Prov{| q(@p, #r)} ; SELFREF-2
/// (iii) exists r: Prov{| q(@p, #r)} ; META-MP (i) (ii)
/// goal: (iii)
/// ```
pub fn parse_chain(text: &str) -> Result<Chain, ChainError> {
    parse_chain_with(text, &Macros::standard())
}

pub fn parse_chain_with(text: &str, macros: &Macros) -> Result<Chain, ChainError> {
    let mut chain = Chain {
        name: String::new(),
        assumptions: BTreeSet::new(),
        steps: Vec::new(),
        goals: Vec::new(),
    };
    let mut goal_line = 0;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let err = |msg: String| ChainError { line: line_no, msg };
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix("chain:") {
            chain.name = name.trim().to_string();
        } else if let Some(list) = line.strip_prefix("assume:") {
            for a in list.split(',').map(str::trim).filter(|a| !a.is_empty()) {
                let a = match a {
                    "Consistent" => Assumption::Consistent,
                    "OmegaConsistent" => Assumption::OmegaConsistent,
                    "none" => continue,
                    other => return Err(err(format!("unknown assumption `{other}`"))),
                };
                chain.assumptions.insert(a);
            }
        } else if let Some(list) = line.strip_prefix("goal:") {
            chain
                .goals
                .extend(list.split_whitespace().map(str::to_string));
            goal_line = line_no;
        } else {
            let step = parse_step(line, macros).map_err(err)?;
            if chain.step(&step.label).is_some() {
                return Err(err(format!("duplicate label {}", step.label)));
            }
            for p in step.premises.iter().chain(&step.discharge) {
                if chain.step(p).is_none() {
                    return Err(err(format!("{p} does not name an earlier step")));
                }
            }
            chain.steps.push(step);
        }
    }
    if chain.steps.is_empty() {
        return Err(ChainError {
            line: 0,
            msg: "no steps".into(),
        });
    }
    for g in &chain.goals {
        if chain.step(g).is_none() {
            return Err(ChainError {
                line: goal_line,
                msg: format!("goal {g} is not a step"),
            });
        }
    }
    Ok(chain)
}

fn parse_step(line: &str, macros: &Macros) -> Result<ChainStep, String> {
    let (line, provenance) = match line.rsplit_once('%') {
        Some((l, p)) => (l, p.trim().to_string()),
        None => (line, String::new()),
    };
    let label_len = line.find(char::is_whitespace).ok_or("missing statement")?;
    let label = line[..label_len].to_string();
    if !label.starts_with('(') || !label.ends_with(')') {
        return Err(format!("label `{label}` must be parenthesised"));
    }
    let (stmt, just) = split_rule(&line[label_len..]).ok_or("missing `; RULE`")?;
    let statement = parse_statement(stmt, macros)?;
    let mut words = just.split_whitespace();
    let rule = words.next().ok_or("missing rule name")?.to_string();
    let mut premises = Vec::new();
    let mut discharge = None;
    while let Some(w) = words.next() {
        if w == "discharge" {
            discharge = Some(words.next().ok_or("`discharge` needs a label")?.to_string());
        } else {
            premises.push(w.to_string());
        }
    }
    let provenance = if provenance.is_empty() {
        label.clone()
    } else {
        provenance
    };
    Ok(ChainStep {
        label,
        statement,
        rule,
        premises,
        discharge,
        provenance,
    })
}
