use super::{Formula, Term, Token};

/// The canonical, fully parenthesised token sequence of a formula.
pub fn tokens(f: &Formula) -> Vec<Token> {
    let mut out = Vec::new();
    push_formula(f, &mut out);
    out
}

pub fn tokens_term(t: &Term) -> Vec<Token> {
    let mut out = Vec::new();
    push_term(t, &mut out);
    out
}

fn push_term(t: &Term, out: &mut Vec<Token>) {
    match t {
        Term::Var(v) => out.push(Token::Var(v.clone())),
        Term::Num(n) => out.push(Token::Num(n.clone())),
        Term::Const(c) => out.push(Token::Const(c.clone())),
        Term::Meta(m) => out.push(Token::Meta(m.clone())),
        Term::Add(l, r) | Term::Mul(l, r) => {
            out.push(Token::LParen);
            push_term(l, out);
            out.push(if matches!(t, Term::Add(..)) {
                Token::Plus
            } else {
                Token::Star
            });
            push_term(r, out);
            out.push(Token::RParen);
        }
    }
}

fn push_formula(f: &Formula, out: &mut Vec<Token>) {
    let binary = |a: &Formula, op: Token, b: &Formula, out: &mut Vec<Token>| {
        out.push(Token::LParen);
        push_formula(a, out);
        out.push(op);
        push_formula(b, out);
        out.push(Token::RParen);
    };
    match f {
        Formula::Eq(a, b) | Formula::Leq(a, b) => {
            out.push(Token::LParen);
            push_term(a, out);
            out.push(if matches!(f, Formula::Eq(..)) {
                Token::Eq
            } else {
                Token::Leq
            });
            push_term(b, out);
            out.push(Token::RParen);
        }
        Formula::Rel(r, a, b) => {
            out.push(Token::Rel(*r));
            out.push(Token::LParen);
            push_term(a, out);
            out.push(Token::Comma);
            push_term(b, out);
            out.push(Token::RParen);
        }
        Formula::Not(g) => {
            out.push(Token::Not);
            push_formula(g, out);
        }
        Formula::Imp(a, b) => binary(a, Token::Imp, b, out),
        Formula::And(a, b) => binary(a, Token::And, b, out),
        Formula::Or(a, b) => binary(a, Token::Or, b, out),
        Formula::Iff(a, b) => binary(a, Token::Iff, b, out),
        Formula::Forall(v, g) | Formula::Exists(v, g) | Formula::ExistsUnique(v, g) => {
            out.push(Token::LParen);
            out.push(match f {
                Formula::Forall(..) => Token::All,
                Formula::Exists(..) => Token::Ex,
                _ => Token::ExUnique,
            });
            out.push(Token::Var(v.clone()));
            out.push(Token::RParen);
            push_formula(g, out);
        }
    }
}

pub fn render(f: &Formula) -> String {
    join(&tokens(f))
}

pub fn render_term(t: &Term) -> String {
    join(&tokens_term(t))
}

fn join(toks: &[Token]) -> String {
    let mut s = String::new();
    for t in toks {
        match t {
            Token::LParen => s.push('('),
            Token::RParen => s.push(')'),
            Token::Comma => s.push_str(", "),
            Token::Not => s.push('~'),
            Token::Imp => s.push_str(" => "),
            Token::And => s.push_str(" & "),
            Token::Or => s.push_str(" v "),
            Token::Iff => s.push_str(" <=> "),
            Token::Eq => s.push_str(" = "),
            Token::Leq => s.push_str(" =< "),
            Token::Plus => s.push('+'),
            Token::Star => s.push('*'),
            Token::All => s.push('A'),
            Token::Ex => s.push('E'),
            Token::ExUnique => s.push_str("E!"),
            Token::Rel(r) => s.push_str(r.symbol()),
            Token::Num(n) => s.push_str(&n.to_str_radix(10)),
            Token::Var(v) | Token::Const(v) => s.push_str(v),
            Token::Meta(m) => {
                s.push('#');
                s.push_str(m);
            }
        }
    }
    s
}
