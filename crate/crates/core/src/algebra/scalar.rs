//! Gaussian numbers `a + b i` over an arbitrary real field.
//!
//! With `T = BigRational` this is the exact field Q(i) that every m = 0
//! computation lives in; with `T = f64` it is an ordinary complex float.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The operations polynomial and rational-function code needs from its
/// coefficient ring. Blanket-implemented, so `Gaussian<BigRational>`,
/// `Complex<f64>` and plain floats all qualify.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Field for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Neg<Output = T>
{
}

/// Real scalars that a [`Gaussian`] can be built over.
pub trait RealField: Field + PartialOrd {}
impl<T: Field + PartialOrd> RealField for T {}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Gaussian<T> {
    pub re: T,
    pub im: T,
}

impl<T: RealField> Gaussian<T> {
    pub fn new(re: T, im: T) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: T) -> Self {
        Gaussian { re, im: T::zero() }
    }

    pub fn i() -> Self {
        Gaussian {
            re: T::zero(),
            im: T::one(),
        }
    }

    pub fn conj(&self) -> Self {
        Gaussian {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re^2 + im^2`.
    pub fn norm_sqr(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn powi(&self, e: i64) -> Self {
        let mut base = if e < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }
}

impl<T: RealField> Zero for Gaussian<T> {
    fn zero() -> Self {
        Gaussian {
            re: T::zero(),
            im: T::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<T: RealField> One for Gaussian<T> {
    fn one() -> Self {
        Gaussian {
            re: T::one(),
            im: T::zero(),
        }
    }
}

impl<T: RealField> Add for Gaussian<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Gaussian {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<T: RealField> Sub for Gaussian<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Gaussian {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl<T: RealField> Mul for Gaussian<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Gaussian {
            re: self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl<T: RealField> Div for Gaussian<T> {
    type Output = Self;
    /// Panics (through the underlying field) when `rhs` is zero.
    fn div(self, rhs: Self) -> Self {
        let n = rhs.norm_sqr();
        let c = self * rhs.conj();
        Gaussian {
            re: c.re / n.clone(),
            im: c.im / n,
        }
    }
}

impl<T: RealField> Neg for Gaussian<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Gaussian {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl<T: RealField + Ord> PartialOrd for Gaussian<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on `(re, im)`. Only used to give maps a deterministic
/// iteration order; it is not a field ordering.
impl<T: RealField + Ord> Ord for Gaussian<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.re
            .cmp(&other.re)
            .then_with(|| self.im.cmp(&other.im))
    }
}

pub type Qi = Gaussian<BigRational>;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Gaussian<BigRational> {
    pub fn from_ints(re: i64, im: i64) -> Self {
        Gaussian {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn from_fracs(re: (i64, i64), im: (i64, i64)) -> Self {
        Gaussian {
            re: rat(re.0, re.1),
            im: rat(im.0, im.1),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// The canonical text form: `a/b`, `c/d*i` or `a/b+c/d*i`, reduced, with
    /// signs on numerators and unit denominators omitted.
    pub fn to_canonical_string(&self) -> String {
        let re = fmt_rational(&self.re);
        if self.im.is_zero() {
            return re;
        }
        let im_abs = fmt_rational(&self.im.abs());
        let im_part = if self.im.abs().is_one() {
            "i".to_string()
        } else {
            format!("{im_abs}*i")
        };
        if self.re.is_zero() {
            if self.im.is_negative() {
                format!("-{im_part}")
            } else {
                im_part
            }
        } else if self.im.is_negative() {
            format!("{re}-{im_part}")
        } else {
            format!("{re}+{im_part}")
        }
    }
}

impl fmt::Display for Gaussian<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Natural log of a positive big integer without overflowing `f64`.
pub fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.to_f64().map(f64::ln).unwrap_or(f64::NAN)
    } else {
        let shift = bits - 64;
        let mantissa: BigInt = x >> shift;
        mantissa.to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Natural log of a positive rational.
pub fn ln_rational(q: &BigRational) -> f64 {
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

/// Best-effort conversion that survives numerators and denominators beyond
/// the `f64` range as long as their quotient is representable.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    if q.is_zero() {
        return 0.0;
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * (ln_bigint(&q.numer().abs()) - ln_bigint(q.denom())).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_matches_componentwise_definition() {
        let a = Qi::from_fracs((1, 2), (3, 4));
        let b = Qi::from_ints(2, -1);
        let p = a.clone() * b.clone();
        assert_eq!(p, Qi::from_fracs((7, 4), (1, 1)));
        assert_eq!(p / b, a);
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(Qi::from_fracs((1, 2), (0, 1)).to_string(), "1/2");
        assert_eq!(Qi::from_fracs((-1, 2), (3, 4)).to_string(), "-1/2+3/4*i");
        assert_eq!(Qi::from_fracs((1, 2), (-3, 4)).to_string(), "1/2-3/4*i");
        assert_eq!(Qi::from_ints(0, -1).to_string(), "-i");
        assert_eq!(Qi::from_ints(0, 0).to_string(), "0");
        // reduced on construction
        assert_eq!(Qi::from_fracs((2, 4), (6, -8)).to_string(), "1/2-3/4*i");
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigInt::from(10).pow(400u32);
        let q = BigRational::new(big.clone() * 3, big);
        assert!((rational_to_f64(&q) - 3.0).abs() < 1e-12);
        assert!((ln_rational(&q) - 3f64.ln()).abs() < 1e-12);
    }
}
