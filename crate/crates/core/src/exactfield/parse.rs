//! Textual syntax: `GF(q)`, `GF(q)(t)`, and integer-coefficient expressions
//! such as `t^2+2*t+1` or `t/(t+1)`. The atom `g` denotes the fixed generator
//! of the coefficient field.

use super::ff::{make_field, prime_power, FiniteField};
use super::poly::Poly;
use super::ratfunc::RationalFunction;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    Gen,
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    offset: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn here(&self) -> usize {
        self.pos + self.offset
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                b'-' => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                // Implicit multiplication: `2t`, `(t+1)(t+2)`.
                Some(c) if c == b'(' || c.is_ascii_alphabetic() => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let start = self.here();
            let e = self.integer()?.ok_or_else(|| err(start, "expected exponent"))?;
            return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<Option<i64>> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        s.parse::<i64>()
            .map(Some)
            .map_err(|_| err(start + self.offset, "integer too large"))
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.here();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(err(self.here(), "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.integer()?.unwrap())),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "g" {
                    Ok(Expr::Gen)
                } else if name.len() == 1 {
                    Ok(Expr::Var(name.to_string()))
                } else {
                    Err(err(pos, format!("unknown identifier '{name}'")))
                }
            }
            Some(c) => Err(err(pos, format!("unexpected character '{}'", c as char))),
            None => Err(err(pos, "unexpected end of input")),
        }
    }
}

/// Parses an expression; `offset` is added to reported positions.
pub fn parse_expr_at(s: &str, offset: usize) -> Result<Expr> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
        offset,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(err(p.here(), "trailing input"));
    }
    Ok(e)
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    parse_expr_at(s, 0)
}

impl Expr {
    /// Evaluates to a rational function in the single variable `var`.
    pub fn to_rational(&self, field: &FiniteField, var: &str) -> Result<RationalFunction> {
        Ok(match self {
            Expr::Int(n) => RationalFunction::from_poly(Poly::constant(field, field.from_int(*n))),
            Expr::Gen => RationalFunction::from_poly(Poly::constant(field, field.generator())),
            Expr::Var(v) if v == var => RationalFunction::from_poly(Poly::x(field)),
            Expr::Var(v) => return Err(Error::Parse { pos: 0, msg: format!("unknown variable '{v}'") }),
            Expr::Neg(a) => a.to_rational(field, var)?.neg(),
            Expr::Add(a, b) => a.to_rational(field, var)?.add(&b.to_rational(field, var)?),
            Expr::Sub(a, b) => a.to_rational(field, var)?.sub(&b.to_rational(field, var)?),
            Expr::Mul(a, b) => a.to_rational(field, var)?.mul(&b.to_rational(field, var)?),
            Expr::Div(a, b) => {
                let d = b.to_rational(field, var)?;
                if d.is_zero() {
                    return Err(Error::ZeroElement);
                }
                a.to_rational(field, var)?.div(&d)?
            }
            Expr::Pow(a, e) => {
                let base = a.to_rational(field, var)?;
                if base.is_zero() && *e < 0 {
                    return Err(Error::ZeroElement);
                }
                base.pow(*e)?
            }
        })
    }
}

/// Parses a rational function in `var`.
pub fn parse_rational(s: &str, field: &FiniteField, var: &str) -> Result<RationalFunction> {
    parse_expr(s)?.to_rational(field, var)
}

/// Parses a polynomial in `var`.
pub fn parse_poly(s: &str, field: &FiniteField, var: &str) -> Result<Poly> {
    let r = parse_rational(s, field, var)?;
    if !r.den().is_one() {
        return Err(err(0, format!("'{s}' is not a polynomial")));
    }
    Ok(r.num().clone())
}

/// Parses a constant of the field.
pub fn parse_constant(s: &str, field: &FiniteField) -> Result<u32> {
    let r = parse_rational(s, field, "\u{0}")?;
    if r.num().deg() > 0 || !r.den().is_one() {
        return Err(err(0, format!("'{s}' is not a constant")));
    }
    Ok(r.num().coeff(0))
}

/// A field literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldLiteral {
    Finite(FiniteField),
    Rational(FiniteField, String),
}

/// Parses `GF(q)` or `GF(q)(t)`.
pub fn parse_field(s: &str) -> Result<FieldLiteral> {
    let s = s.trim();
    let rest = s
        .strip_prefix("GF(")
        .ok_or_else(|| err(0, "expected 'GF('"))?;
    let close = rest.find(')').ok_or_else(|| err(s.len(), "expected ')'"))?;
    let q: u64 = rest[..close]
        .trim()
        .parse()
        .map_err(|_| err(3, "expected field order"))?;
    let (p, m) = prime_power(q).ok_or_else(|| err(3, format!("{q} is not a prime power")))?;
    let field = make_field(p, m)?;
    let tail = rest[close + 1..].trim();
    if tail.is_empty() {
        return Ok(FieldLiteral::Finite(field));
    }
    let pos = 3 + close + 1;
    let var = tail
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .map(str::trim)
        .ok_or_else(|| err(pos, "expected '(variable)'"))?;
    if var.len() != 1 || !var.as_bytes()[0].is_ascii_alphabetic() || var == "g" {
        return Err(err(pos, format!("invalid variable '{var}'")));
    }
    Ok(FieldLiteral::Rational(field, var.to_string()))
}
