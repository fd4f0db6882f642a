//! Goedel numbering.
//!
//! A formula is coded by reading its canonical token sequence as the digits of
//! a base-64 natural, most significant first. Numerals, names and counts are
//! written as self-delimiting blocks: one digit `k`, then the `k` decimal
//! digits of a length `L`, then `L` decimal digits (each decimal digit being a
//! single base-64 digit). This keeps codes linear in the size of the formula
//! even when it mentions very large numerals.
//!
//! Proofs are coded as a `PROOF` marker, a line count, and per line a `LINE`
//! marker, the length-prefixed digits of the formula code, a `JUST` marker and
//! a tagged justification.
//!
//! Decoding re-encodes its result and rejects anything that is not the
//! canonical code of what it decoded to, so every code has exactly one reading.

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::kernel::{AxiomId, Justification, Line, Proof};
use crate::syntax::{parse_tokens, tokens, Formula, RelConst, Token};

pub const CODEC_VERSION: &str = "pa-codec/1";
pub const BASE: u32 = 64;
/// Decimal digits of a formula code never exceed this multiple of [`formula_size`].
pub const FEASIBILITY_CONSTANT: usize = 4;

const LPAREN: u8 = 1;
const RPAREN: u8 = 2;
const NOT: u8 = 3;
const IMP: u8 = 4;
const AND: u8 = 5;
const OR: u8 = 6;
const IFF: u8 = 7;
const EQ: u8 = 8;
const LEQ: u8 = 9;
const ALL: u8 = 10;
const EX: u8 = 11;
const EXU: u8 = 12;
const PLUS: u8 = 13;
const STAR: u8 = 14;
const COMMA: u8 = 15;
const REL_LQ: u8 = 16;
const REL_LS: u8 = 17;
const REL_UQ: u8 = 18;
const REL_US: u8 = 19;
const NUM: u8 = 20;
const VAR: u8 = 21;
const CONST: u8 = 22;
const META: u8 = 23;
const PROOF: u8 = 24;
const LINE: u8 = 25;
const JUST: u8 = 26;

const TAG_PA: u8 = 1;
const TAG_LAX: u8 = 2;
const TAG_EQAX: u8 = 3;
const TAG_HYP: u8 = 4;
const TAG_MP: u8 = 5;
const TAG_GEN: u8 = 6;
const TAG_IND: u8 = 7;

/// The symbol table as `(symbol, digit)` pairs, for display.
pub fn symbol_table() -> Vec<(&'static str, u8)> {
    vec![
        ("(", LPAREN),
        (")", RPAREN),
        ("~", NOT),
        ("=>", IMP),
        ("&", AND),
        ("v", OR),
        ("<=>", IFF),
        ("=", EQ),
        ("=<", LEQ),
        ("A", ALL),
        ("E", EX),
        ("E!", EXU),
        ("+", PLUS),
        ("*", STAR),
        (",", COMMA),
        ("q", REL_LQ),
        ("s", REL_LS),
        ("Q", REL_UQ),
        ("S", REL_US),
        ("<numeral>", NUM),
        ("<variable>", VAR),
        ("<constant>", CONST),
        ("<meta>", META),
        ("<proof>", PROOF),
        ("<line>", LINE),
        ("<justification>", JUST),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeKind {
    Formula,
    Proof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoedelCode {
    pub value: BigUint,
    pub kind: CodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("not a code: {0}")]
    NotACode(String),
    #[error("only hypothesis-free proofs are coded")]
    HasHypotheses,
}

fn bad(msg: impl Into<String>) -> CodecError {
    CodecError::NotACode(msg.into())
}

fn push_nat(out: &mut Vec<u8>, n: &BigUint) {
    let digits = n.to_str_radix(10);
    let len = digits.len().to_string();
    out.push(len.len() as u8);
    out.extend(len.bytes().map(|b| b - b'0'));
    out.extend(digits.bytes().map(|b| b - b'0'));
}

fn push_small(out: &mut Vec<u8>, n: usize) {
    push_nat(out, &BigUint::from(n));
}

fn name_digit(c: char) -> Option<u8> {
    match c {
        'a'..='z' => Some(c as u8 - b'a' + 1),
        '0'..='9' => Some(c as u8 - b'0' + 27),
        '_' => Some(37),
        _ => None,
    }
}

fn digit_name(d: u8) -> Option<char> {
    match d {
        1..=26 => Some((b'a' + d - 1) as char),
        27..=36 => Some((b'0' + d - 27) as char),
        37 => Some('_'),
        _ => None,
    }
}

fn push_name(out: &mut Vec<u8>, name: &str) {
    push_small(out, name.len());
    out.extend(
        name.chars()
            .map(|c| name_digit(c).expect("identifier character")),
    );
}

fn token_digits(toks: &[Token]) -> Vec<u8> {
    let mut out = Vec::with_capacity(toks.len() * 2);
    for t in toks {
        match t {
            Token::LParen => out.push(LPAREN),
            Token::RParen => out.push(RPAREN),
            Token::Comma => out.push(COMMA),
            Token::Not => out.push(NOT),
            Token::Imp => out.push(IMP),
            Token::And => out.push(AND),
            Token::Or => out.push(OR),
            Token::Iff => out.push(IFF),
            Token::Eq => out.push(EQ),
            Token::Leq => out.push(LEQ),
            Token::Plus => out.push(PLUS),
            Token::Star => out.push(STAR),
            Token::All => out.push(ALL),
            Token::Ex => out.push(EX),
            Token::ExUnique => out.push(EXU),
            Token::Rel(r) => out.push(match r {
                RelConst::LowerQ => REL_LQ,
                RelConst::LowerS => REL_LS,
                RelConst::UpperQ => REL_UQ,
                RelConst::UpperS => REL_US,
            }),
            Token::Num(n) => {
                out.push(NUM);
                push_nat(&mut out, n);
            }
            Token::Var(v) => {
                out.push(VAR);
                push_name(&mut out, v);
            }
            Token::Const(c) => {
                out.push(CONST);
                push_name(&mut out, c);
            }
            Token::Meta(m) => {
                out.push(META);
                push_name(&mut out, m);
            }
        }
    }
    out
}

fn formula_digits(f: &Formula) -> Vec<u8> {
    token_digits(&tokens(f))
}

fn to_value(digits: &[u8]) -> BigUint {
    BigUint::from_radix_be(digits, BASE).expect("digits below the base")
}

fn to_digits(value: &BigUint) -> Result<Vec<u8>, CodecError> {
    if value.is_zero() {
        return Err(bad("zero is not a code"));
    }
    Ok(value.to_radix_be(BASE))
}

pub fn encode_formula(f: &Formula) -> GoedelCode {
    GoedelCode {
        value: to_value(&formula_digits(f)),
        kind: CodeKind::Formula,
    }
}

/// Size measure for the feasibility bound: tokens, plus name lengths, plus
/// decimal digits of numerals.
pub fn formula_size(f: &Formula) -> usize {
    tokens(f)
        .iter()
        .map(|t| match t {
            Token::Num(n) => 1 + n.to_str_radix(10).len(),
            Token::Var(v) | Token::Const(v) | Token::Meta(v) => 1 + v.len(),
            _ => 1,
        })
        .sum()
}

struct Reader<'a> {
    d: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn next(&mut self) -> Result<u8, CodecError> {
        let x = *self.d.get(self.pos).ok_or_else(|| bad("truncated"))?;
        self.pos += 1;
        Ok(x)
    }

    fn done(&self) -> bool {
        self.pos >= self.d.len()
    }

    fn decimal(&mut self, count: usize) -> Result<String, CodecError> {
        let mut s = String::with_capacity(count);
        for _ in 0..count {
            let x = self.next()?;
            if x > 9 {
                return Err(bad("non-decimal digit in a numeral block"));
            }
            s.push((b'0' + x) as char);
        }
        Ok(s)
    }

    fn nat(&mut self) -> Result<BigUint, CodecError> {
        let k = self.next()? as usize;
        if k == 0 {
            return Err(bad("empty length prefix"));
        }
        let len: usize = self
            .decimal(k)?
            .parse()
            .map_err(|_| bad("length prefix out of range"))?;
        if len == 0 || len > self.d.len() {
            return Err(bad("truncated numeral block"));
        }
        let s = self.decimal(len)?;
        Ok(BigUint::parse_bytes(s.as_bytes(), 10).expect("decimal digits"))
    }

    fn small(&mut self) -> Result<usize, CodecError> {
        usize::try_from(self.nat()?).map_err(|_| bad("count out of range"))
    }

    fn name(&mut self) -> Result<String, CodecError> {
        let len = self.small()?;
        if len == 0 {
            return Err(bad("empty name"));
        }
        (0..len)
            .map(|_| {
                self.next()
                    .and_then(|d| digit_name(d).ok_or_else(|| bad("bad name digit")))
            })
            .collect()
    }

    fn token(&mut self) -> Result<Token, CodecError> {
        Ok(match self.next()? {
            LPAREN => Token::LParen,
            RPAREN => Token::RParen,
            NOT => Token::Not,
            IMP => Token::Imp,
            AND => Token::And,
            OR => Token::Or,
            IFF => Token::Iff,
            EQ => Token::Eq,
            LEQ => Token::Leq,
            ALL => Token::All,
            EX => Token::Ex,
            EXU => Token::ExUnique,
            PLUS => Token::Plus,
            STAR => Token::Star,
            COMMA => Token::Comma,
            REL_LQ => Token::Rel(RelConst::LowerQ),
            REL_LS => Token::Rel(RelConst::LowerS),
            REL_UQ => Token::Rel(RelConst::UpperQ),
            REL_US => Token::Rel(RelConst::UpperS),
            NUM => Token::Num(self.nat()?),
            VAR => Token::Var(self.name()?),
            CONST => Token::Const(self.name()?),
            META => Token::Meta(self.name()?),
            d => return Err(bad(format!("digit {d} is not a formula symbol"))),
        })
    }
}

fn decode_formula_digits(d: &[u8]) -> Result<Formula, CodecError> {
    let mut r = Reader { d, pos: 0 };
    let mut toks = Vec::new();
    while !r.done() {
        toks.push(r.token()?);
    }
    let f = parse_tokens(&toks).map_err(|e| bad(format!("symbol sequence does not parse: {e}")))?;
    if formula_digits(&f) != d {
        return Err(bad("not in canonical form"));
    }
    Ok(f)
}

pub fn decode_formula(value: &BigUint) -> Result<Formula, CodecError> {
    decode_formula_digits(&to_digits(value)?)
}

pub fn encode_proof(p: &Proof) -> Result<GoedelCode, CodecError> {
    if !p.hypotheses.is_empty() {
        return Err(CodecError::HasHypotheses);
    }
    let mut out = vec![PROOF];
    push_small(&mut out, p.lines.len());
    for line in &p.lines {
        out.push(LINE);
        let fd = formula_digits(&line.formula);
        push_small(&mut out, fd.len());
        out.extend(fd);
        out.push(JUST);
        match &line.just {
            Justification::Axiom(id) => {
                let (tag, k) = match id {
                    AxiomId::Pa(k) => (TAG_PA, k),
                    AxiomId::Logical(k) => (TAG_LAX, k),
                    AxiomId::Equality(k) => (TAG_EQAX, k),
                };
                out.push(tag);
                push_small(&mut out, usize::from(*k));
            }
            Justification::Hyp(i) => {
                out.push(TAG_HYP);
                push_small(&mut out, *i);
            }
            Justification::Mp(i, j) | Justification::Ind(i, j) => {
                let tag = if matches!(line.just, Justification::Mp(..)) {
                    TAG_MP
                } else {
                    TAG_IND
                };
                out.push(tag);
                push_small(&mut out, *i);
                push_small(&mut out, *j);
            }
            Justification::Gen(i, v) => {
                out.push(TAG_GEN);
                push_small(&mut out, *i);
                push_name(&mut out, v);
            }
        }
    }
    Ok(GoedelCode {
        value: to_value(&out),
        kind: CodeKind::Proof,
    })
}

pub fn decode_proof(value: &BigUint) -> Result<Proof, CodecError> {
    let d = to_digits(value)?;
    let mut r = Reader { d: &d, pos: 0 };
    if r.next()? != PROOF {
        return Err(bad("missing proof marker"));
    }
    let n = r.small()?;
    if n > d.len() {
        return Err(bad("line count exceeds code length"));
    }
    let mut proof = Proof::default();
    for _ in 0..n {
        if r.next()? != LINE {
            return Err(bad("missing line marker"));
        }
        let len = r.small()?;
        let end = r
            .pos
            .checked_add(len)
            .filter(|e| *e <= d.len())
            .ok_or_else(|| bad("truncated line"))?;
        let formula = decode_formula_digits(&d[r.pos..end])?;
        r.pos = end;
        if r.next()? != JUST {
            return Err(bad("missing justification marker"));
        }
        let axiom_num = |r: &mut Reader, max: u8| -> Result<u8, CodecError> {
            let k = r.small()?;
            u8::try_from(k)
                .ok()
                .filter(|k| (1..=max).contains(k))
                .ok_or_else(|| bad("axiom number out of range"))
        };
        let just = match r.next()? {
            TAG_PA => Justification::Axiom(AxiomId::Pa(axiom_num(&mut r, 6)?)),
            TAG_LAX => Justification::Axiom(AxiomId::Logical(axiom_num(
                &mut r,
                crate::kernel::LOGICAL_SCHEMAS,
            )?)),
            TAG_EQAX => Justification::Axiom(AxiomId::Equality(axiom_num(
                &mut r,
                crate::kernel::EQUALITY_SCHEMAS,
            )?)),
            TAG_HYP => Justification::Hyp(r.small()?),
            TAG_MP => Justification::Mp(r.small()?, r.small()?),
            TAG_IND => Justification::Ind(r.small()?, r.small()?),
            TAG_GEN => Justification::Gen(r.small()?, r.name()?),
            t => return Err(bad(format!("unknown justification tag {t}"))),
        };
        proof.lines.push(Line { formula, just });
    }
    if !r.done() {
        return Err(bad("trailing digits"));
    }
    if encode_proof(&proof)?.value != *value {
        return Err(bad("not in canonical form"));
    }
    Ok(proof)
}

/// Decode according to `kind`, returning the canonical text of the object.
pub fn decode(code: &GoedelCode) -> Result<String, CodecError> {
    match code.kind {
        CodeKind::Formula => decode_formula(&code.value).map(|f| crate::syntax::render(&f)),
        CodeKind::Proof => decode_proof(&code.value).map(|p| crate::kernel::format_proof(&p)),
    }
}
