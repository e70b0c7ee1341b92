//! Tiny expression grammar shared by scalar literals and the algebra-spec
//! text format:
//!
//!   expr   := term (('+' | '-') term)*
//!   term   := factor ('*' factor)*
//!   factor := ['-'] (number | 'i' | ident ('^' sint)? | '(' expr ')' ('^' sint)?)
//!   number := digits ('/' digits)?
//!
//! General division is intentionally absent; rationals are literals like
//! `3/4` and inverse symbols are written `x^-1`.

use super::{lookup_symbol, Scalar, ScalarError};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Num(i64, i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
}

pub(crate) fn lex(text: &str) -> Result<Vec<Tok>, ScalarError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                toks.push(Tok::Comma);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let num: i64 = text[start..i]
                    .parse()
                    .map_err(|_| ScalarError::Parse(format!("bad integer near `{}`", &text[start..i])))?;
                let mut den = 1i64;
                if i < bytes.len() && bytes[i] == b'/' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                    let dstart = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    den = text[dstart..i]
                        .parse()
                        .map_err(|_| ScalarError::Parse("bad denominator".into()))?;
                }
                toks.push(Tok::Num(num, den));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push(Tok::Ident(text[start..i].to_string()));
            }
            other => return Err(ScalarError::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(toks)
}

#[derive(Clone, Debug)]
pub(crate) enum Ast {
    Num(i64, i64),
    I,
    Sym(String),
    Pow(Box<Ast>, i32),
    Neg(Box<Ast>),
    Sum(Vec<Ast>),
    Prod(Vec<Ast>),
}

pub(crate) struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

pub(crate) type ParseError = ScalarError;

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn parse_expr(&mut self) -> Result<Ast, ParseError> {
        let mut terms = vec![self.parse_term()?];
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.parse_term()?);
                }
                Tok::Minus => {
                    self.bump();
                    terms.push(Ast::Neg(Box::new(self.parse_term()?)));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Ast::Sum(terms) })
    }

    fn parse_term(&mut self) -> Result<Ast, ParseError> {
        let mut factors = vec![self.parse_factor()?];
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            factors.push(self.parse_factor()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Ast::Prod(factors) })
    }

    fn parse_exponent(&mut self) -> Result<i32, ParseError> {
        let mut sign = 1i32;
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            sign = -1;
        }
        match self.bump() {
            Some(Tok::Num(n, 1)) => Ok(sign * n as i32),
            other => Err(ScalarError::Parse(format!("expected integer exponent, got {other:?}"))),
        }
    }

    fn parse_factor(&mut self) -> Result<Ast, ParseError> {
        match self.bump() {
            Some(Tok::Minus) => Ok(Ast::Neg(Box::new(self.parse_factor()?))),
            Some(Tok::Num(n, d)) => Ok(Ast::Num(n, d)),
            Some(Tok::Ident(name)) => {
                let base = if name == "i" { Ast::I } else { Ast::Sym(name) };
                if matches!(self.peek(), Some(Tok::Caret)) {
                    self.bump();
                    let e = self.parse_exponent()?;
                    Ok(Ast::Pow(Box::new(base), e))
                } else {
                    Ok(base)
                }
            }
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                match self.bump() {
                    Some(Tok::RParen) => {}
                    other => {
                        return Err(ScalarError::Parse(format!("expected `)`, got {other:?}")))
                    }
                }
                if matches!(self.peek(), Some(Tok::Caret)) {
                    self.bump();
                    let e = self.parse_exponent()?;
                    Ok(Ast::Pow(Box::new(inner), e))
                } else {
                    Ok(inner)
                }
            }
            other => Err(ScalarError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn eval_scalar(ast: &Ast) -> Result<Scalar, ScalarError> {
    match ast {
        Ast::Num(n, d) => Ok(Scalar::from_ratio(*n, *d)),
        Ast::I => Ok(Scalar::i()),
        Ast::Sym(name) => {
            let id = lookup_symbol(name).ok_or_else(|| ScalarError::UnknownSymbol(name.clone()))?;
            Ok(Scalar::from_symbol(id))
        }
        Ast::Pow(base, e) => eval_scalar(base)?.pow(*e),
        Ast::Neg(inner) => Ok(eval_scalar(inner)?.neg_ref()),
        Ast::Sum(terms) => {
            let mut acc = Scalar::zero();
            for t in terms {
                acc = acc.add_ref(&eval_scalar(t)?);
            }
            Ok(acc)
        }
        Ast::Prod(factors) => {
            let mut acc = Scalar::one();
            for fac in factors {
                acc = acc.mul_ref(&eval_scalar(fac)?);
            }
            Ok(acc)
        }
    }
}

pub fn parse_scalar(text: &str) -> Result<Scalar, ScalarError> {
    let mut p = Parser::new(text)?;
    let ast = p.parse_expr()?;
    if !p.at_end() {
        return Err(ScalarError::Parse(format!("trailing input in `{text}`")));
    }
    eval_scalar(&ast)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sums_products_and_powers() {
        let s = parse_scalar("1/2*i*kappa*alpha^2 - 3 + (1 + alpha)^2").unwrap();
        let t = parse_scalar("(alpha + 1)*(alpha + 1) + 1/2*i*kappa*alpha^2 - 3").unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn rejects_unknown_symbols() {
        assert!(matches!(parse_scalar("no_such_symbol"), Err(ScalarError::UnknownSymbol(_))));
    }

    #[test]
    fn display_round_trip() {
        let s = parse_scalar("-1/2*i*kappa*alpha + 3*phi^-2 - m_B").unwrap();
        let back = parse_scalar(&s.to_string()).unwrap();
        assert_eq!(s, back);
    }
}
