//! A small expression language for scalars, points and rational functions.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! sum     := ['+'|'-'] product (('+'|'-') product)*
//! product := power (('*'|'/')? power)*        -- juxtaposition multiplies
//! power   := atom ('^' ['-'] integer)?
//! atom    := number | ident | '(' sum ')'
//! ```
//!
//! Numbers are integers or decimals and are read exactly. The identifier
//! `i` is the imaginary unit; other identifiers are variables whose meaning
//! depends on the target type.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::p1::P1Point;
use super::poly::Polynomial;
use super::ratfunc::RationalFunction;
use super::scalar::Qi;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Imag,
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// Values an [`Expr`] can be evaluated into.
pub trait ExprTarget: Sized {
    fn constant(c: Qi) -> Self;
    fn variable(name: &str) -> Result<Self>;
    fn add(self, rhs: Self) -> Self;
    fn sub(self, rhs: Self) -> Self;
    fn mul(self, rhs: Self) -> Self;
    fn div(self, rhs: Self) -> Result<Self>;
    fn pow(self, e: i64) -> Result<Self>;
}

impl Expr {
    pub fn eval<T: ExprTarget>(&self) -> Result<T> {
        Ok(match self {
            Expr::Num(q) => T::constant(Qi::new(q.clone(), BigRational::zero())),
            Expr::Imag => T::constant(Qi::from_ints(0, 1)),
            Expr::Var(v) => T::variable(v)?,
            Expr::Neg(a) => T::constant(Qi::zero()).sub(a.eval()?),
            Expr::Add(a, b) => a.eval::<T>()?.add(b.eval()?),
            Expr::Sub(a, b) => a.eval::<T>()?.sub(b.eval()?),
            Expr::Mul(a, b) => a.eval::<T>()?.mul(b.eval()?),
            Expr::Div(a, b) => a.eval::<T>()?.div(b.eval()?)?,
            Expr::Pow(a, e) => a.eval::<T>()?.pow(*e)?,
        })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err(pos: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column: pos + 1,
        message: message.into(),
    }
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

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Expr::Neg(Box::new(self.product()?))
            }
            Some(b'+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.power()?));
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() || c == b'.' => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(self.pos, "expected an integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let e: i64 = text
            .parse()
            .map_err(|_| err(start, "exponent out of range"))?;
        Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(err(self.pos, "unexpected end of expression")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err(err(self.pos, "expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "i" {
                    Ok(Expr::Imag)
                } else {
                    Ok(Expr::Var(name.to_string()))
                }
            }
            Some(c) => Err(err(self.pos, format!("unexpected character `{}`", c as char))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let int_part = &self.src[start..self.pos];
        let mut frac_part: &[u8] = &[];
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            let fs = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            frac_part = &self.src[fs..self.pos];
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err(start, "malformed number"));
        }
        let digits: String = int_part
            .iter()
            .chain(frac_part.iter())
            .map(|&b| b as char)
            .collect();
        let n: BigInt = digits.parse().map_err(|_| err(start, "malformed number"))?;
        let den = num_traits::pow(BigInt::from(10), frac_part.len());
        Ok(Expr::Num(BigRational::new(n, den)))
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.sum()?;
    if p.peek().is_some() {
        return Err(err(p.pos, "trailing input"));
    }
    Ok(e)
}

impl ExprTarget for Qi {
    fn constant(c: Qi) -> Self {
        c
    }
    fn variable(name: &str) -> Result<Self> {
        Err(Error::InvalidArgument(format!(
            "unexpected variable `{name}` in a constant"
        )))
    }
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn sub(self, rhs: Self) -> Self {
        self - rhs
    }
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    fn div(self, rhs: Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }
    fn pow(self, e: i64) -> Result<Self> {
        if e < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.powi(e))
    }
}

/// Univariate rational functions; any one-letter variable among `z`, `t`,
/// `x`, `s` is accepted as the coordinate.
impl ExprTarget for RationalFunction<Qi> {
    fn constant(c: Qi) -> Self {
        RationalFunction::constant(c)
    }
    fn variable(name: &str) -> Result<Self> {
        match name {
            "z" | "t" | "x" | "s" => Ok(RationalFunction::identity()),
            _ => Err(Error::InvalidArgument(format!("unknown variable `{name}`"))),
        }
    }
    fn add(self, rhs: Self) -> Self {
        RationalFunction::add(&self, &rhs)
    }
    fn sub(self, rhs: Self) -> Self {
        RationalFunction::sub(&self, &rhs)
    }
    fn mul(self, rhs: Self) -> Self {
        RationalFunction::mul(&self, &rhs)
    }
    fn div(self, rhs: Self) -> Result<Self> {
        RationalFunction::div(&self, &rhs)
    }
    fn pow(self, e: i64) -> Result<Self> {
        RationalFunction::pow(&self, e)
    }
}

pub fn parse_scalar(text: &str) -> Result<Qi> {
    parse_expr(text)?.eval()
}

pub fn parse_function(text: &str) -> Result<RationalFunction<Qi>> {
    parse_expr(text)?.eval()
}

pub fn parse_point(text: &str) -> Result<P1Point<Qi>> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("inf") || t == "∞" {
        return Ok(P1Point::Infinity);
    }
    parse_scalar(t).map(P1Point::Finite)
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial<Qi>> {
    let f = parse_function(text)?;
    if !f.den().is_constant() {
        return Err(Error::InvalidArgument(format!("`{text}` is not a polynomial")));
    }
    Ok(f.numerator_with_lead().scale(&(Qi::one() / f.den().coeff(0))))
}
