//! Expressions in u, t and the field generator z.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' '-'? digits)?
//! atom   := digits | 'z' | 'u' | 't' | '(' expr ')'
//! ```

use crate::error::{Error, Result};
use crate::ff::FieldSpec;
use crate::rational::RatFunc;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    /// The primitive element of F_q.
    Z,
    U,
    T,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::SyntaxError { offset: self.pos, msg: msg.into() })
    }
    fn digits(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            self.pos = start;
            return self.err("expected an integer");
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        text.parse().map_err(|_| Error::SyntaxError { offset: start, msg: "integer too large".into() })
    }
    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { Expr::Add(acc.into(), rhs.into()) } else { Expr::Sub(acc.into(), rhs.into()) };
        }
        Ok(acc)
    }
    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' { Expr::Mul(acc.into(), rhs.into()) } else { Expr::Div(acc.into(), rhs.into()) };
        }
        Ok(acc)
    }
    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(self.unary()?.into()));
        }
        self.factor()
    }
    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let start = self.pos;
        let e = self.digits()?;
        let e = i64::try_from(e).map_err(|_| Error::SyntaxError { offset: start, msg: "exponent too large".into() })?;
        Ok(Expr::Pow(base.into(), if neg { -e } else { e }))
    }
    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.digits()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                match &self.s[start..self.pos] {
                    b"z" => Ok(Expr::Z),
                    b"u" => Ok(Expr::U),
                    b"t" => Ok(Expr::T),
                    name => Err(Error::UndefinedSymbol {
                        name: String::from_utf8_lossy(name).into_owned(),
                        offset: start,
                    }),
                }
            }
            Some(_) => self.err("unexpected character"),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

impl Expr {
    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 0,
            Expr::Mul(..) | Expr::Div(..) => 1,
            Expr::Neg(_) => 2,
            Expr::Pow(..) => 3,
            _ => 4,
        }
    }
    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Z => write!(f, "z"),
            Expr::U => write!(f, "u"),
            Expr::T => write!(f, "t"),
            Expr::Neg(x) => {
                write!(f, "-")?;
                x.write_at(f, 2)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_at(f, 0)?;
                write!(f, " {} ", if matches!(self, Expr::Add(..)) { '+' } else { '-' })?;
                b.write_at(f, 1)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_at(f, 1)?;
                write!(f, "{}", if matches!(self, Expr::Mul(..)) { '*' } else { '/' })?;
                b.write_at(f, 2)
            }
            Expr::Pow(a, e) => {
                a.write_at(f, 4)?;
                write!(f, "^{e}")
            }
        }
    }

    /// Exact value in F_q(u, t).
    pub fn evaluate(&self, k: &FieldSpec) -> Result<RatFunc> {
        Ok(match self {
            Expr::Int(n) => RatFunc::constant(k, k.from_int((*n % k.p() as u64) as i64)),
            Expr::Z => RatFunc::constant(k, k.zeta()),
            Expr::U => RatFunc::u(k),
            Expr::T => RatFunc::t(k),
            Expr::Neg(x) => x.evaluate(k)?.neg(),
            Expr::Add(a, b) => a.evaluate(k)?.add(&b.evaluate(k)?),
            Expr::Sub(a, b) => a.evaluate(k)?.sub(&b.evaluate(k)?),
            Expr::Mul(a, b) => a.evaluate(k)?.mul(&b.evaluate(k)?),
            Expr::Div(a, b) => a.evaluate(k)?.div(&b.evaluate(k)?)?,
            Expr::Pow(a, e) => a.evaluate(k)?.pow(*e)?,
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// Parses and evaluates in one step.
pub fn parse_rat(text: &str, k: &FieldSpec) -> Result<RatFunc> {
    parse_expr(text)?.evaluate(k)
}
