//! Divisors on P^1 and the divisor/function dictionary.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::poly::Polynomial;
use crate::algebra::roots::split;
use crate::algebra::{Field, P1Point, Qi, RationalFunction};
use crate::error::{Error, Result};

/// A finite integer combination of points. Zero multiplicities are never
/// stored, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor<K: Ord> {
    terms: BTreeMap<P1Point<K>, i64>,
}

impl<K: Field + Ord> Default for Divisor<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Field + Ord> Divisor<K> {
    pub fn zero() -> Self {
        Divisor {
            terms: BTreeMap::new(),
        }
    }

    pub fn point(p: P1Point<K>) -> Self {
        Self::from_terms([(p, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (P1Point<K>, i64)>) -> Self {
        let mut d = Self::zero();
        for (p, m) in terms {
            d.add_point(p, m);
        }
        d
    }

    pub fn add_point(&mut self, p: P1Point<K>, m: i64) {
        match self.terms.entry(p) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += m;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                if m != 0 {
                    e.insert(m);
                }
            }
        }
    }

    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn multiplicity(&self, p: &P1Point<K>) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = &P1Point<K>> {
        self.terms.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P1Point<K>, i64)> {
        self.terms.iter().map(|(p, m)| (p, *m))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut d = self.clone();
        for (p, m) in other.iter() {
            d.add_point(p.clone(), m);
        }
        d
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        Divisor {
            terms: self.terms.iter().map(|(p, m)| (p.clone(), m * k)).collect(),
        }
    }

    /// Positive and negative parts, as `(D+, D-)` with `D = D+ - D-`.
    pub fn split_signs(&self) -> (Self, Self) {
        let pos = self.iter().filter(|(_, m)| *m > 0).map(|(p, m)| (p.clone(), m));
        let neg = self.iter().filter(|(_, m)| *m < 0).map(|(p, m)| (p.clone(), -m));
        (Self::from_terms(pos), Self::from_terms(neg))
    }

    pub fn disjoint_from(&self, other: &Self) -> bool {
        self.support().all(|p| other.multiplicity(p) == 0)
    }
}

impl fmt::Display for Divisor<Qi> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (p, m)) in self.iter().enumerate() {
            match (k, m < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.abs() != 1 {
                write!(f, "{}", m.abs())?;
            }
            write!(f, "({p})")?;
        }
        Ok(())
    }
}

/// Zero-cycle with multiplicative nonzero scalar coefficients; merging two
/// entries at the same point multiplies them. Entries equal to 1 are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCycleC {
    terms: BTreeMap<P1Point<Qi>, Qi>,
}

impl Default for ZeroCycleC {
    fn default() -> Self {
        Self::new()
    }
}

impl ZeroCycleC {
    pub fn new() -> Self {
        ZeroCycleC {
            terms: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, p: P1Point<Qi>, c: Qi) -> Result<()> {
        if c.is_zero() {
            return Err(Error::InvalidArgument("zero coefficient in a zero-cycle".into()));
        }
        match self.terms.get_mut(&p) {
            Some(v) => *v = v.clone() * c,
            None => {
                self.terms.insert(p, c);
            }
        }
        Ok(())
    }

    pub fn get(&self, p: &P1Point<Qi>) -> Option<&Qi> {
        self.terms.get(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P1Point<Qi>, &Qi)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Product of all coefficients.
    pub fn product(&self) -> Qi {
        self.terms.values().fold(Qi::one(), |acc, c| acc * c.clone())
    }
}

/// `sum ord_p(f) (p)` over P^1, including the point at infinity.
pub fn principal_divisor(f: &RationalFunction<Qi>) -> Result<Divisor<Qi>> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let mut d = Divisor::zero();
    for (r, m) in split(f.num())? {
        d.add_point(P1Point::Finite(r), m as i64);
    }
    for (r, m) in split(f.den())? {
        d.add_point(P1Point::Finite(r), -(m as i64));
    }
    d.add_point(P1Point::Infinity, f.ord(&P1Point::Infinity)?);
    Ok(d)
}

/// The monic function `prod (z - a)^m` over the finite part of `d`.
pub fn function_from_divisor(d: &Divisor<Qi>) -> Result<RationalFunction<Qi>> {
    if d.degree() != 0 {
        return Err(Error::NonzeroDegree(d.degree()));
    }
    let mut num = Polynomial::one();
    let mut den = Polynomial::one();
    for (p, m) in d.iter() {
        if let P1Point::Finite(a) = p {
            let f = Polynomial::linear(a.clone()).pow(m.unsigned_abs() as u32);
            if m > 0 {
                num = &num * &f;
            } else {
                den = &den * &f;
            }
        }
    }
    RationalFunction::new(num, den)
}

fn require_nonconstant(pi: &RationalFunction<Qi>) -> Result<()> {
    if pi.is_constant() {
        Err(Error::ConstantMap)
    } else {
        Ok(())
    }
}

/// `pi_* D`: every point moves to its image with the same multiplicity.
pub fn pushforward(pi: &RationalFunction<Qi>, d: &Divisor<Qi>) -> Result<Divisor<Qi>> {
    require_nonconstant(pi)?;
    Ok(Divisor::from_terms(d.iter().map(|(p, m)| (pi.map_point(p), m))))
}

/// The fiber `pi^{-1}(q)` with ramification indices.
pub fn fiber(pi: &RationalFunction<Qi>, q: &P1Point<Qi>) -> Result<Divisor<Qi>> {
    require_nonconstant(pi)?;
    let n = pi.numerator_with_lead();
    let dpoly = pi.den().clone();
    let total = pi.degree() as i64;
    let eq = match q {
        P1Point::Finite(c) => &n - &dpoly.scale(c),
        P1Point::Infinity => dpoly,
    };
    let roots = split(&eq).map_err(|e| match e {
        Error::NotSplit { .. } => Error::IrrationalFiber {
            point: q.to_string(),
        },
        other => other,
    })?;
    let mut out = Divisor::from_terms(roots.into_iter().map(|(r, m)| (P1Point::Finite(r), m as i64)));
    let at_inf = total - eq.deg() as i64;
    if at_inf > 0 {
        out.add_point(P1Point::Infinity, at_inf);
    }
    Ok(out)
}

/// `pi^* D`: each point is replaced by its fiber counted with ramification.
pub fn pullback(pi: &RationalFunction<Qi>, d: &Divisor<Qi>) -> Result<Divisor<Qi>> {
    require_nonconstant(pi)?;
    let mut out = Divisor::zero();
    for (q, m) in d.iter() {
        out = out.add(&fiber(pi, q)?.scale(m));
    }
    Ok(out)
}
