//! Dense univariate polynomials over a field, constant term first.

use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<K> {
    coeffs: Vec<K>,
}

impl<K: Field> Polynomial<K> {
    /// Builds a polynomial from coefficients (constant first), dropping
    /// trailing zeros so the leading coefficient is nonzero.
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z`.
    pub fn x() -> Self {
        Polynomial {
            coeffs: vec![K::zero(), K::one()],
        }
    }

    /// `z - a`.
    pub fn linear(a: K) -> Self {
        Polynomial {
            coeffs: vec![-a, K::one()],
        }
    }

    /// `prod (z - r)` over the given roots.
    pub fn from_roots<'a, I>(roots: I) -> Self
    where
        I: IntoIterator<Item = &'a K>,
        K: 'a,
    {
        roots
            .into_iter()
            .fold(Self::one(), |acc, r| &acc * &Self::linear(r.clone()))
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Splits off the leading coefficient: `self = lead * monic`.
    pub fn into_monic(self) -> (K, Self) {
        match self.leading().cloned() {
            None => (K::zero(), self),
            Some(lc) if lc.is_one() => (lc, self),
            Some(lc) => {
                let monic = self.scale(&(K::one() / lc.clone()));
                (lc, monic)
            }
        }
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &K) -> K {
        self.coeffs
            .iter()
            .rev()
            .fold(K::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let out: Vec<K> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.clone() * nat::<K>(i))
            .collect();
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// `z^n * p(1/z)` for `n >= deg p`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut c = vec![K::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[n - i] = a.clone();
        }
        Self::new(c)
    }

    /// Euclidean division. Panics when `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("polynomial division by zero");
        let lc = d.leading().cloned().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![K::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lc.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "exact_div left a remainder");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            // monic remainder sequence
            a = b;
            b = r.into_monic().1;
        }
        a.into_monic().1
    }

    /// Number of times `z - a` divides `self` (0 for the zero polynomial).
    pub fn root_multiplicity(&self, a: &K) -> u32 {
        if self.is_zero() {
            return 0;
        }
        let lin = Self::linear(a.clone());
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.div_rem(&lin);
            if !r.is_zero() {
                return m;
            }
            p = q;
            m += 1;
        }
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Polynomial<L> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }
}

/// The integer `n` as a field element.
pub(crate) fn nat<K: Field>(n: usize) -> K {
    let mut acc = K::zero();
    let mut base = K::one();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc + base.clone();
        }
        base = base.clone() + base;
        k >>= 1;
    }
    acc
}

impl<K: Field> Add for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn add(self, rhs: Self) -> Polynomial<K> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<K: Field> Sub for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn sub(self, rhs: Self) -> Polynomial<K> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<K: Field> Mul for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn mul(self, rhs: Self) -> Polynomial<K> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<K: Field> Neg for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn neg(self) -> Polynomial<K> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::Qi;

    fn qp(cs: &[i64]) -> Polynomial<Qi> {
        Polynomial::new(cs.iter().map(|&c| Qi::from_ints(c, 0)).collect())
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = qp(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(qp(&[0, 0]).degree(), None);
    }

    #[test]
    fn division_and_gcd() {
        // (z-1)(z-2) and (z-1)(z+3)
        let a = Polynomial::from_roots(&[Qi::from_ints(1, 0), Qi::from_ints(2, 0)]);
        let b = Polynomial::from_roots(&[Qi::from_ints(1, 0), Qi::from_ints(-3, 0)]);
        assert_eq!(a.gcd(&b), qp(&[-1, 1]));
        let (q, r) = a.div_rem(&qp(&[-2, 1]));
        assert!(r.is_zero());
        assert_eq!(q, qp(&[-1, 1]));
    }

    #[test]
    fn derivative_and_multiplicity() {
        let p = Polynomial::from_roots(&[Qi::from_ints(0, 1), Qi::from_ints(0, 1), Qi::from_ints(2, 0)]);
        assert_eq!(p.root_multiplicity(&Qi::from_ints(0, 1)), 2);
        assert_eq!(p.root_multiplicity(&Qi::from_ints(2, 0)), 1);
        assert_eq!(p.root_multiplicity(&Qi::from_ints(5, 0)), 0);
        assert_eq!(qp(&[1, 2, 3]).derivative(), qp(&[2, 6]));
    }

    #[test]
    fn reversal() {
        assert_eq!(qp(&[1, 2]).reversed(3), qp(&[0, 0, 2, 1]));
    }
}
