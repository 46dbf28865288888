//! Recursive-descent parser for the expression grammar in the module docs.

use super::lexer::{lex, Spanned, Tok};
use super::{build, Expr, Func};
use crate::error::Error;

struct Parser<'a> {
    toks: &'a [Spanned],
    at: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn offset(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> Error {
        Error::Parse {
            offset: self.offset(),
            message: alloc::format!("expected {expected}, found {}", self.peek().describe()),
        }
    }

    fn expr(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = build::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = build::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = build::mul(lhs, self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = build::div(lhs, self.unary()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, Error> {
        if matches!(self.peek(), Tok::Minus) {
            self.bump();
            return Ok(build::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, Error> {
        let base = self.atom()?;
        if matches!(self.peek(), Tok::Caret) {
            self.bump();
            // Right-associative; the exponent may start with unary minus.
            return Ok(build::pow(base, self.unary()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, Error> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Num(c) => {
                self.bump();
                Ok(Expr::Num(c))
            }
            Tok::Ident(name) => {
                self.bump();
                if matches!(self.peek(), Tok::LParen) {
                    let func = Func::from_name(&name)
                        .ok_or(Error::UnknownFunction { name, offset })?;
                    self.bump();
                    let arg = self.expr()?;
                    if !matches!(self.peek(), Tok::RParen) {
                        return Err(self.unexpected("`)`"));
                    }
                    self.bump();
                    Ok(build::call(func, arg))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if !matches!(self.peek(), Tok::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, variable, function call or `(`")),
        }
    }
}

/// Parses an expression from text.
pub fn parse(src: &str) -> Result<Expr, Error> {
    let toks = lex(src)?;
    let mut p = Parser { toks: &toks, at: 0 };
    let e = p.expr()?;
    if !matches!(p.peek(), Tok::End) {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}
