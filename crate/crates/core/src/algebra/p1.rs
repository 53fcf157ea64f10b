//! Points of the projective line, Moebius maps and the cross-ratio.

use std::fmt;

use super::scalar::{Field, Qi};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum P1Point<K> {
    Finite(K),
    Infinity,
}

impl<K: Field> P1Point<K> {
    pub fn finite(&self) -> Option<&K> {
        match self {
            P1Point::Finite(a) => Some(a),
            P1Point::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, P1Point::Infinity)
    }
}

impl From<Qi> for P1Point<Qi> {
    fn from(a: Qi) -> Self {
        P1Point::Finite(a)
    }
}

impl fmt::Display for P1Point<Qi> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Finite(a) => write!(f, "{a}"),
            P1Point::Infinity => f.write_str("inf"),
        }
    }
}

/// `z -> (a z + b) / (c z + d)` with `ad - bc != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusMap<K> {
    a: K,
    b: K,
    c: K,
    d: K,
}

impl<K: Field> MobiusMap<K> {
    pub fn new(a: K, b: K, c: K, d: K) -> Result<Self> {
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        if det.is_zero() {
            return Err(Error::DegenerateMobius);
        }
        Ok(MobiusMap { a, b, c, d })
    }

    pub fn identity() -> Self {
        MobiusMap {
            a: K::one(),
            b: K::zero(),
            c: K::zero(),
            d: K::one(),
        }
    }

    pub fn coefficients(&self) -> (&K, &K, &K, &K) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn apply(&self, p: &P1Point<K>) -> P1Point<K> {
        match p {
            P1Point::Finite(z) => {
                let den = self.c.clone() * z.clone() + self.d.clone();
                if den.is_zero() {
                    P1Point::Infinity
                } else {
                    P1Point::Finite((self.a.clone() * z.clone() + self.b.clone()) / den)
                }
            }
            P1Point::Infinity => {
                if self.c.is_zero() {
                    P1Point::Infinity
                } else {
                    P1Point::Finite(self.a.clone() / self.c.clone())
                }
            }
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        let m = |x: &K, y: &K, z: &K, w: &K| x.clone() * y.clone() + z.clone() * w.clone();
        MobiusMap {
            a: m(&self.a, &inner.a, &self.b, &inner.c),
            b: m(&self.a, &inner.b, &self.b, &inner.d),
            c: m(&self.c, &inner.a, &self.d, &inner.c),
            d: m(&self.c, &inner.b, &self.d, &inner.d),
        }
    }

    pub fn inverse(&self) -> Self {
        MobiusMap {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }
}

/// `[z1, z2; z3, z4] = ((z1 - z3)(z2 - z4)) / ((z2 - z3)(z1 - z4))`.
///
/// Each point occurs in exactly one numerator and one denominator factor, so a
/// point at infinity is handled by dropping both of its factors.
pub fn cross_ratio<K: Field>(
    z1: &P1Point<K>,
    z2: &P1Point<K>,
    z3: &P1Point<K>,
    z4: &P1Point<K>,
) -> Result<K> {
    let pts = [z1, z2, z3, z4];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if pts[i] == pts[j] {
                return Err(Error::RepeatedPoints);
            }
        }
    }
    let diff = |p: &P1Point<K>, q: &P1Point<K>| -> Option<K> {
        match (p, q) {
            (P1Point::Finite(a), P1Point::Finite(b)) => Some(a.clone() - b.clone()),
            _ => None,
        }
    };
    let factor = |f: Option<K>| f.unwrap_or_else(K::one);
    let num = factor(diff(z1, z3)) * factor(diff(z2, z4));
    let den = factor(diff(z2, z3)) * factor(diff(z1, z4));
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn pt(re: i64, im: i64) -> P1Point<Qi> {
        P1Point::Finite(Qi::from_ints(re, im))
    }

    #[test]
    fn cross_ratio_examples() {
        let inf = P1Point::Infinity;
        assert_eq!(
            cross_ratio(&pt(5, 0), &pt(1, 0), &pt(0, 0), &inf).unwrap(),
            Qi::from_ints(5, 0)
        );
        assert_eq!(
            cross_ratio(&pt(0, 0), &pt(1, 0), &pt(2, 0), &pt(3, 0)).unwrap(),
            Qi::from_fracs((4, 3), (0, 1))
        );
        assert_eq!(
            cross_ratio(&pt(0, 0), &pt(0, 0), &pt(2, 0), &pt(3, 0)),
            Err(Error::RepeatedPoints)
        );
    }

    #[test]
    fn inversion_preserves_cross_ratio() {
        let inv = MobiusMap::new(Qi::zero(), Qi::one(), Qi::one(), Qi::zero()).unwrap();
        let pts = [pt(0, 0), pt(1, 0), pt(2, 0), pt(3, 0)];
        let moved: Vec<_> = pts.iter().map(|p| inv.apply(p)).collect();
        assert_eq!(moved[0], P1Point::Infinity);
        assert_eq!(
            cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap(),
            cross_ratio(&moved[0], &moved[1], &moved[2], &moved[3]).unwrap()
        );
    }

    #[test]
    fn inverse_round_trips() {
        let m = MobiusMap::new(
            Qi::from_ints(2, 1),
            Qi::from_ints(-1, 0),
            Qi::from_ints(1, 0),
            Qi::from_ints(3, 0),
        )
        .unwrap();
        let id = m.compose(&m.inverse());
        for p in [pt(0, 0), pt(7, -2), P1Point::Infinity, pt(-3, 0)] {
            assert_eq!(m.inverse().apply(&m.apply(&p)), p);
            assert_eq!(id.apply(&p), p);
        }
    }
}
