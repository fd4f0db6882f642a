use std::collections::HashSet;

use num_bigint::BigUint;

use super::{Formula, RelConst, SyntaxError, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    LParen,
    RParen,
    Comma,
    Not,
    Imp,
    And,
    Or,
    Iff,
    Eq,
    Leq,
    Plus,
    Star,
    /// `A` in `(Ax)`.
    All,
    /// `E` in `(Ex)`.
    Ex,
    /// `E!` in `(E!x)`.
    ExUnique,
    Rel(RelConst),
    Num(BigUint),
    Var(String),
    Const(String),
    Meta(String),
}

/// Split surface text into tokens, each paired with its byte offset.
pub fn lex(text: &str) -> Result<Vec<(Token, usize)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let syntax = |msg: &str| SyntaxError::Syntax {
            pos: start,
            msg: msg.to_string(),
        };
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => out.push((Token::LParen, i)),
            b')' => out.push((Token::RParen, i)),
            b',' => out.push((Token::Comma, i)),
            b'~' => out.push((Token::Not, i)),
            b'&' => out.push((Token::And, i)),
            b'+' => out.push((Token::Plus, i)),
            b'*' => out.push((Token::Star, i)),
            b'=' => match bytes.get(i + 1) {
                Some(b'>') => {
                    out.push((Token::Imp, i));
                    i += 1;
                }
                Some(b'<') => {
                    out.push((Token::Leq, i));
                    i += 1;
                }
                _ => out.push((Token::Eq, i)),
            },
            b'<' => {
                if bytes.get(i + 1) == Some(&b'=') && bytes.get(i + 2) == Some(&b'>') {
                    out.push((Token::Iff, i));
                    i += 2;
                } else {
                    return Err(syntax("expected `<=>`"));
                }
            }
            b'0'..=b'9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let n = BigUint::parse_bytes(&bytes[i..j], 10).expect("decimal digits");
                out.push((Token::Num(n), i));
                i = j;
                continue;
            }
            b'#' => {
                let j = ident_end(bytes, i + 1);
                if j == i + 1 || !bytes[i + 1].is_ascii_lowercase() {
                    return Err(syntax("expected a meta-variable name after `#`"));
                }
                out.push((Token::Meta(text[i + 1..j].to_string()), i));
                i = j;
                continue;
            }
            b'a'..=b'z' => {
                let j = ident_end(bytes, i);
                let word = &text[i..j];
                let tok = match word {
                    "v" => Token::Or,
                    "a" | "b" | "c" => Token::Const(word.to_string()),
                    "q" => Token::Rel(RelConst::LowerQ),
                    "s" => Token::Rel(RelConst::LowerS),
                    _ => Token::Var(word.to_string()),
                };
                out.push((tok, i));
                i = j;
                continue;
            }
            b'A' => out.push((Token::All, i)),
            b'E' => {
                if bytes.get(i + 1) == Some(&b'!') {
                    out.push((Token::ExUnique, i));
                    i += 1;
                } else {
                    out.push((Token::Ex, i));
                }
            }
            b'Q' => out.push((Token::Rel(RelConst::UpperQ), i)),
            b'S' => out.push((Token::Rel(RelConst::UpperS), i)),
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                if ch.is_alphabetic() {
                    let mut j = i + ch.len_utf8();
                    while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_')
                    {
                        j += 1;
                    }
                    return Err(SyntaxError::Unbound {
                        pos: i,
                        sym: text[i..j].to_string(),
                    });
                }
                return Err(syntax(&format!("unexpected character `{ch}`")));
            }
        }
        i += 1;
    }
    Ok(out)
}

fn ident_end(bytes: &[u8], mut j: usize) -> usize {
    while j < bytes.len()
        && (bytes[j].is_ascii_lowercase() || bytes[j].is_ascii_digit() || bytes[j] == b'_')
    {
        j += 1;
    }
    j
}

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let toks = lex(text)?;
    Parser::new(&toks, text.len()).finish_formula()
}

pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser::new(&toks, text.len());
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

/// Parse a bare token sequence; error positions are token indices.
pub fn parse_tokens(toks: &[Token]) -> Result<Formula, SyntaxError> {
    let indexed: Vec<(Token, usize)> = toks.iter().cloned().zip(0..).collect();
    Parser::new(&indexed, toks.len()).finish_formula()
}

struct Parser<'a> {
    toks: &'a [(Token, usize)],
    end: usize,
    pos: usize,
    /// Token positions where a parenthesised formula was tried and failed.
    failed_paren: HashSet<usize>,
}

type PResult<T> = Result<T, SyntaxError>;

impl<'a> Parser<'a> {
    fn new(toks: &'a [(Token, usize)], end: usize) -> Self {
        Parser {
            toks,
            end,
            pos: 0,
            failed_paren: HashSet::new(),
        }
    }

    fn finish_formula(mut self) -> PResult<Formula> {
        let f = self.formula()?;
        self.expect_end()?;
        Ok(f)
    }

    fn expect_end(&self) -> PResult<()> {
        if self.pos < self.toks.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(())
    }

    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn err(&self, msg: &str) -> SyntaxError {
        SyntaxError::Syntax {
            pos: self.offset(),
            msg: msg.to_string(),
        }
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Token, what: &str) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.implication()?;
        if self.eat(&Token::Iff) {
            let rhs = self.implication()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Token::Imp) {
            let rhs = self.implication()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Token::Or) {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::And) {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat(&Token::Not) {
            return Ok(Formula::not(self.unary()?));
        }
        if let Some((kind, v)) = self.quantifier() {
            self.pos += 4;
            let body = self.unary()?;
            return Ok(match kind {
                Token::All => Formula::Forall(v, Box::new(body)),
                Token::Ex => Formula::Exists(v, Box::new(body)),
                _ => Formula::ExistsUnique(v, Box::new(body)),
            });
        }
        self.atom()
    }

    /// Recognise `( A|E|E! var )` without consuming it.
    fn quantifier(&self) -> Option<(Token, String)> {
        if self.peek() != Some(&Token::LParen) {
            return None;
        }
        let kind = match self.peek_at(1)? {
            t @ (Token::All | Token::Ex | Token::ExUnique) => t.clone(),
            _ => return None,
        };
        let v = match self.peek_at(2)? {
            Token::Var(v) => v.clone(),
            _ => return None,
        };
        (self.peek_at(3)? == &Token::RParen).then_some((kind, v))
    }

    fn atom(&mut self) -> PResult<Formula> {
        match self.peek() {
            Some(Token::Rel(r)) => {
                let r = *r;
                self.pos += 1;
                self.expect(&Token::LParen, "`(` after relation constant")?;
                let a = self.term()?;
                self.expect(&Token::Comma, "`,` between relation arguments")?;
                let b = self.term()?;
                self.expect(&Token::RParen, "`)` closing relation arguments")?;
                Ok(Formula::Rel(r, a, b))
            }
            Some(Token::LParen) if !self.failed_paren.contains(&self.pos) => {
                let save = self.pos;
                self.pos += 1;
                let attempt = self
                    .formula()
                    .and_then(|f| self.expect(&Token::RParen, "`)`").map(|_| f));
                match attempt {
                    Ok(f) => Ok(f),
                    Err(e) => {
                        self.pos = save;
                        self.failed_paren.insert(save);
                        self.comparison().map_err(|e2| furthest(e, e2))
                    }
                }
            }
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        if self.eat(&Token::Eq) {
            Ok(Formula::Eq(lhs, self.term()?))
        } else if self.eat(&Token::Leq) {
            Ok(Formula::Leq(lhs, self.term()?))
        } else {
            Err(self.err("expected `=` or `=<`"))
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let mut lhs = self.product()?;
        while self.eat(&Token::Plus) {
            lhs = Term::add(lhs, self.product()?);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> PResult<Term> {
        let mut lhs = self.primary()?;
        while self.eat(&Token::Star) {
            lhs = Term::mul(lhs, self.primary()?);
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> PResult<Term> {
        let t = match self.peek() {
            Some(Token::Num(n)) => Term::Num(n.clone()),
            Some(Token::Var(v)) => Term::Var(v.clone()),
            Some(Token::Const(c)) => Term::Const(c.clone()),
            Some(Token::Meta(m)) => Term::Meta(m.clone()),
            Some(Token::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(&Token::RParen, "`)` closing term")?;
                return Ok(t);
            }
            _ => return Err(self.err("expected a term")),
        };
        self.pos += 1;
        Ok(t)
    }
}

fn furthest(a: SyntaxError, b: SyntaxError) -> SyntaxError {
    let pos = |e: &SyntaxError| match e {
        SyntaxError::Syntax { pos, .. } | SyntaxError::Unbound { pos, .. } => *pos,
        SyntaxError::ThresholdExceeded { .. } => 0,
    };
    if pos(&a) > pos(&b) {
        a
    } else {
        b
    }
}
