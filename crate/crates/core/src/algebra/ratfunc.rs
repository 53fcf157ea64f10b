//! Rational functions in one variable, kept in a canonical form:
//! `lead * num / den` with `num`, `den` monic and coprime.

use std::fmt;

use super::p1::P1Point;
use super::poly::Polynomial;
use super::scalar::{Field, Qi};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction<K> {
    num: Polynomial<K>,
    den: Polynomial<K>,
    lead: K,
}

/// Outcome of evaluating a function at a point of P^1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evaluation<K> {
    Value(K),
    Zero { order: u32 },
    Pole { order: u32 },
}

impl<K> Evaluation<K> {
    pub fn value(self) -> Option<K> {
        match self {
            Evaluation::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl<K: Field> RationalFunction<K> {
    /// Normalizes `num / den`. The zero function is stored as `0 / 1` with a
    /// zero leading scalar; it is the only value with `lead == 0`.
    pub fn new(num: Polynomial<K>, den: Polynomial<K>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let (ln, num) = num.into_monic();
        let (ld, den) = den.into_monic();
        Ok(RationalFunction {
            num,
            den,
            lead: ln / ld,
        })
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
            lead: K::zero(),
        }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: Polynomial::one(),
            den: Polynomial::one(),
            lead: c,
        }
    }

    /// The coordinate function `z`.
    pub fn identity() -> Self {
        Self::from_poly(Polynomial::x())
    }

    pub fn from_poly(p: Polynomial<K>) -> Self {
        Self::new(p, Polynomial::one()).expect("unit denominator")
    }

    pub fn num(&self) -> &Polynomial<K> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<K> {
        &self.den
    }

    pub fn lead(&self) -> &K {
        &self.lead
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Degree as a map P^1 -> P^1.
    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    /// `lead * num` and `den`, the plain quotient representation.
    pub fn numerator_with_lead(&self) -> Polynomial<K> {
        self.num.scale(&self.lead)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            &self.numerator_with_lead() * &other.numerator_with_lead(),
            &self.den * &other.den,
        )
        .expect("product of nonzero denominators")
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(
            &self.numerator_with_lead() * &other.den,
            &self.den * &other.numerator_with_lead(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = &(&self.numerator_with_lead() * &other.den) + &(&other.numerator_with_lead() * &self.den);
        Self::new(n, &self.den * &other.den).expect("product of nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.clone(),
            den: self.den.clone(),
            lead: -self.lead.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction {
            num: self.den.clone(),
            den: self.num.clone(),
            lead: K::one() / self.lead.clone(),
        })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = u32::try_from(e).map_err(|_| Error::InvalidArgument("exponent too large".into()))?;
        if self.is_zero() {
            return Ok(if e == 0 { Self::one() } else { Self::zero() });
        }
        let mut lead = K::one();
        for _ in 0..e {
            lead = lead * self.lead.clone();
        }
        Ok(RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
            lead,
        })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let p = inner.numerator_with_lead();
        let q = inner.den.clone();
        let homogenize = |f: &Polynomial<K>| -> Polynomial<K> {
            let n = f.deg();
            let mut acc = Polynomial::zero();
            for (i, c) in f.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = (&p.pow(i as u32) * &q.pow((n - i) as u32)).scale(c);
                acc = &acc + &term;
            }
            acc
        };
        let n = self.num.deg();
        let m = self.den.deg();
        let top = &homogenize(&self.numerator_with_lead()) * &q.pow(m as u32);
        let bottom = &homogenize(&self.den) * &q.pow(n as u32);
        if bottom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(top, bottom)
    }

    /// Valuation at a point; `deg den - deg num` at infinity.
    pub fn ord(&self, p: &P1Point<K>) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(match p {
            P1Point::Finite(a) => {
                self.num.root_multiplicity(a) as i64 - self.den.root_multiplicity(a) as i64
            }
            P1Point::Infinity => self.den.deg() as i64 - self.num.deg() as i64,
        })
    }

    pub fn eval(&self, p: &P1Point<K>) -> Evaluation<K> {
        if self.is_zero() {
            return Evaluation::Zero { order: u32::MAX };
        }
        match p {
            P1Point::Finite(a) => {
                let n = self.num.eval(a);
                if n.is_zero() {
                    return Evaluation::Zero {
                        order: self.num.root_multiplicity(a),
                    };
                }
                let d = self.den.eval(a);
                if d.is_zero() {
                    return Evaluation::Pole {
                        order: self.den.root_multiplicity(a),
                    };
                }
                Evaluation::Value(self.lead.clone() * n / d)
            }
            P1Point::Infinity => {
                let (dn, dd) = (self.num.deg(), self.den.deg());
                match dn.cmp(&dd) {
                    std::cmp::Ordering::Equal => Evaluation::Value(self.lead.clone()),
                    std::cmp::Ordering::Less => Evaluation::Zero {
                        order: (dd - dn) as u32,
                    },
                    std::cmp::Ordering::Greater => Evaluation::Pole {
                        order: (dn - dd) as u32,
                    },
                }
            }
        }
    }

    /// Image of a point under the map `self: P^1 -> P^1`.
    pub fn map_point(&self, p: &P1Point<K>) -> P1Point<K> {
        match self.eval(p) {
            Evaluation::Value(v) => P1Point::Finite(v),
            Evaluation::Zero { .. } => P1Point::Finite(K::zero()),
            Evaluation::Pole { .. } => P1Point::Infinity,
        }
    }

    /// Re-expresses the function in the coordinate `s = 1/z`.
    pub fn in_inverse_coordinate(&self) -> Self {
        let n = self.degree();
        Self::new(
            self.numerator_with_lead().reversed(n),
            self.den.reversed(n),
        )
        .expect("reversal keeps the denominator nonzero")
    }
}

impl RationalFunction<Qi> {
    /// Canonical text in the given variable, parseable by
    /// [`crate::algebra::expr::parse_function`].
    pub fn to_expr_string(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let lead = self.lead.to_canonical_string();
        let num = format_poly(&self.num, var);
        let den = format_poly(&self.den, var);
        let mut out = String::new();
        let unit_lead = self.lead == Qi::from_ints(1, 0);
        let minus_lead = self.lead == Qi::from_ints(-1, 0);
        if self.num.is_constant() {
            let compound = lead[1..].contains(['+', '-']);
            if compound && !self.den.is_constant() {
                out.push_str(&format!("({lead})"));
            } else {
                out.push_str(&lead);
            }
        } else if unit_lead {
            out.push_str(&format!("({num})"));
        } else if minus_lead {
            out.push_str(&format!("-({num})"));
        } else {
            out.push_str(&format!("({lead})*({num})"));
        }
        if !self.den.is_constant() {
            out.push_str(&format!("/({den})"));
        }
        out
    }
}

impl fmt::Display for RationalFunction<Qi> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string("z"))
    }
}

/// Human-readable polynomial, highest degree first.
pub fn format_poly(p: &Polynomial<Qi>, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let one = Qi::from_ints(1, 0);
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c == &Qi::from_ints(0, 0) {
            continue;
        }
        let negative_real = c.im == num_rational::BigRational::from_integer(0.into())
            && c.re < num_rational::BigRational::from_integer(0.into());
        let (sign, mag) = if negative_real {
            ("-", -c.clone())
        } else {
            ("+", c.clone())
        };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let coeff = if mag.is_real() {
            mag.to_canonical_string()
        } else {
            format!("({})", mag.to_canonical_string())
        };
        if k == 0 {
            out.push_str(&coeff);
        } else if mag == one {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{coeff}*{mono}"));
        }
    }
    out
}
