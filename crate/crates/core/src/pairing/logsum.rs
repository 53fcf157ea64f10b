//! Exact formal sums `sum n_k log|alpha_k|` with Gaussian-rational `alpha_k`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::scalar::{fmt_rational, ln_rational};
use crate::algebra::Qi;

/// Stored as squared moduli with integer weights; the value is
/// `1/2 sum n_k log |alpha_k|^2`.
#[derive(Clone, Debug, Default)]
pub struct LogSum {
    terms: BTreeMap<BigRational, i64>,
    witnesses: Vec<(Qi, i64)>,
}

impl LogSum {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `n log|alpha|`. Panics on `alpha = 0`; callers check for zeros first.
    pub fn term(alpha: &Qi, n: i64) -> Self {
        let mut s = Self::zero();
        s.push(alpha, n);
        s
    }

    pub fn push(&mut self, alpha: &Qi, n: i64) {
        assert!(!alpha.is_zero(), "log of zero");
        if n == 0 {
            return;
        }
        self.witnesses.push((alpha.clone(), n));
        self.push_key(alpha.norm_sqr(), n);
    }

    fn push_key(&mut self, key: BigRational, n: i64) {
        if key.is_one() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, n) in &other.terms {
            out.push_key(k.clone(), *n);
        }
        out.witnesses.extend(other.witnesses.iter().cloned());
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        LogSum {
            terms: self.terms.iter().map(|(a, n)| (a.clone(), n * k)).collect(),
            witnesses: self.witnesses.iter().map(|(a, n)| (a.clone(), n * k)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `prod |alpha_k|^{2 n_k}`; the sum vanishes iff this equals 1.
    pub fn modulus_sq_product(&self) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (a, n) in &self.terms {
            let e = n.unsigned_abs() as usize;
            let (p, q) = (
                num_traits::pow(a.numer().clone(), e),
                num_traits::pow(a.denom().clone(), e),
            );
            if *n > 0 {
                num *= p;
                den *= q;
            } else {
                num *= q;
                den *= p;
            }
        }
        BigRational::new(num, den)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() || self.modulus_sq_product().is_one()
    }

    /// Exact equality of the represented real numbers.
    pub fn equals(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        0.5 * self
            .terms
            .iter()
            .map(|(a, n)| *n as f64 * ln_rational(a))
            .sum::<f64>()
    }

    /// Squared moduli with their weights, sorted by modulus.
    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, i64)> {
        self.terms.iter().map(|(a, n)| (a, *n))
    }

    /// The arguments `alpha_k` as they were pushed, with weights.
    pub fn witnesses(&self) -> &[(Qi, i64)] {
        &self.witnesses
    }

    /// `1/2 log(P)` with `P` the exact squared-modulus product.
    pub fn exact_string(&self) -> String {
        let p = self.modulus_sq_product();
        if p.is_one() {
            "0".into()
        } else {
            format!("1/2 log({})", fmt_rational(&p))
        }
    }
}

impl PartialEq for LogSum {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for LogSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ {:.12}", self.exact_string(), self.to_f64())
    }
}
