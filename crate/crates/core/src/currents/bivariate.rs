//! Rational functions of `(z, w)` on P^1 x P^1 and their restriction to
//! parametrized rational curves.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::expr::{parse_expr, parse_function, ExprTarget};
use crate::algebra::ratfunc::format_poly;
use crate::algebra::{Polynomial, Qi, RationalFunction};
use crate::error::{Error, Result};

/// Sparse polynomial `sum c_ij z^i w^j`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Qi>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Qi) -> Self {
        let mut p = Self::zero();
        p.add_term((0, 0), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(Qi::one())
    }

    pub fn monomial(i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term((i, j), Qi::one());
        p
    }

    fn add_term(&mut self, key: (u32, u32), c: Qi) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Qi::zero);
        *e = e.clone() + c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == (0, 0))
    }

    pub fn deg_z(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn deg_w(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Qi)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        BiPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((i1, j1), a) in &self.terms {
            for ((i2, j2), b) in &other.terms {
                out.add_term((i1 + i2, j1 + j2), a.clone() * b.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Exact quotient by `d`, or `None` if `d` does not divide `self`.
    /// Lexicographic division with `z` before `w`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (&(di, dj), dc) = d.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut q = Self::zero();
        while let Some((&(ri, rj), rc)) = rem.terms.iter().next_back() {
            if ri < di || rj < dj {
                return None;
            }
            let mut t = Self::zero();
            t.add_term((ri - di, rj - dj), rc.clone() / dc.clone());
            rem = rem.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Largest `k` with `phi^k | self`.
    pub fn order_along(&self, phi: &Self) -> u32 {
        if self.is_zero() || phi.is_constant() {
            return 0;
        }
        let mut k = 0;
        let mut p = self.clone();
        while let Some(q) = p.div_exact(phi) {
            p = q;
            k += 1;
        }
        k
    }

    /// `z^{deg_z} P(1/z, w)`.
    pub fn reverse_z(&self) -> Self {
        let n = self.deg_z();
        BiPoly {
            terms: self.terms.iter().map(|(&(i, j), c)| ((n - i, j), c.clone())).collect(),
        }
    }

    /// `w^{deg_w} P(z, 1/w)`.
    pub fn reverse_w(&self) -> Self {
        let n = self.deg_w();
        BiPoly {
            terms: self.terms.iter().map(|(&(i, j), c)| ((i, n - j), c.clone())).collect(),
        }
    }

    /// `P(z(t), w(t))`.
    pub fn restrict(&self, z: &RationalFunction<Qi>, w: &RationalFunction<Qi>) -> Result<RationalFunction<Qi>> {
        let mut zp = vec![RationalFunction::one()];
        for _ in 0..self.deg_z() {
            zp.push(RationalFunction::mul(zp.last().unwrap(), z));
        }
        let mut wp = vec![RationalFunction::one()];
        for _ in 0..self.deg_w() {
            wp.push(RationalFunction::mul(wp.last().unwrap(), w));
        }
        let mut out = RationalFunction::zero();
        for (&(i, j), c) in &self.terms {
            let term = RationalFunction::mul(&zp[i as usize], &wp[j as usize]);
            let term = RationalFunction::mul(&term, &RationalFunction::constant(c.clone()));
            out = RationalFunction::add(&out, &term);
        }
        Ok(out)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // group by the power of w, coefficients are polynomials in z
        let mut by_w: BTreeMap<u32, Vec<Qi>> = BTreeMap::new();
        for (&(i, j), c) in &self.terms {
            let row = by_w.entry(j).or_default();
            if row.len() <= i as usize {
                row.resize(i as usize + 1, Qi::zero());
            }
            row[i as usize] = c.clone();
        }
        let parts: Vec<String> = by_w
            .into_iter()
            .rev()
            .map(|(j, row)| {
                let p = format_poly(&Polynomial::new(row), "z");
                match j {
                    0 => format!("({p})"),
                    1 => format!("({p})*w"),
                    _ => format!("({p})*w^{j}"),
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `num / den` with `den != 0`; not reduced.
#[derive(Clone, Debug)]
pub struct BiRational {
    pub num: BiPoly,
    pub den: BiPoly,
}

impl PartialEq for BiRational {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl BiRational {
    pub fn new(num: BiPoly, den: BiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BiRational { num, den })
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_expr(text)?.eval()
    }

    pub fn from_poly(p: BiPoly) -> Self {
        BiRational { num: p, den: BiPoly::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn mul(&self, other: &Self) -> Self {
        BiRational {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return BiRational {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            };
        }
        BiRational {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn neg(&self) -> Self {
        BiRational {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        BiRational::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(BiRational {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Order of vanishing along the irreducible curve `phi = 0`.
    pub fn order_along(&self, phi: &BiPoly) -> i64 {
        self.num.order_along(phi) as i64 - self.den.order_along(phi) as i64
    }

    /// `self / phi^k`.
    pub fn strip(&self, phi: &BiPoly, k: i64) -> Result<Self> {
        let p = phi.pow(k.unsigned_abs() as u32);
        let fail = || Error::GeneralPosition(format!("{phi} does not divide exactly"));
        Ok(if k >= 0 {
            BiRational {
                num: self.num.div_exact(&p).ok_or_else(fail)?,
                den: self.den.clone(),
            }
        } else {
            BiRational {
                num: self.num.clone(),
                den: self.den.div_exact(&p).ok_or_else(fail)?,
            }
        })
    }

    /// Order along the line `z = infinity`.
    pub fn order_at_z_infinity(&self) -> i64 {
        self.den.deg_z() as i64 - self.num.deg_z() as i64
    }

    pub fn order_at_w_infinity(&self) -> i64 {
        self.den.deg_w() as i64 - self.num.deg_w() as i64
    }

    /// The same function in the coordinates `(1/z, w)`.
    pub fn invert_z(&self) -> Self {
        let shift = self.order_at_z_infinity();
        let mut num = self.num.reverse_z();
        let mut den = self.den.reverse_z();
        if shift > 0 {
            num = num.mul(&BiPoly::monomial(shift as u32, 0));
        } else if shift < 0 {
            den = den.mul(&BiPoly::monomial((-shift) as u32, 0));
        }
        BiRational { num, den }
    }

    /// The same function in the coordinates `(z, 1/w)`.
    pub fn invert_w(&self) -> Self {
        let shift = self.order_at_w_infinity();
        let mut num = self.num.reverse_w();
        let mut den = self.den.reverse_w();
        if shift > 0 {
            num = num.mul(&BiPoly::monomial(0, shift as u32));
        } else if shift < 0 {
            den = den.mul(&BiPoly::monomial(0, (-shift) as u32));
        }
        BiRational { num, den }
    }

    /// Restriction to a curve not contained in the zero or polar locus.
    pub fn restrict(&self, z: &RationalFunction<Qi>, w: &RationalFunction<Qi>) -> Result<Option<RationalFunction<Qi>>> {
        let n = self.num.restrict(z, w)?;
        let d = self.den.restrict(z, w)?;
        if n.is_zero() || d.is_zero() {
            return Ok(None);
        }
        Ok(Some(RationalFunction::div(&n, &d)?))
    }
}

impl fmt::Display for BiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl ExprTarget for BiRational {
    fn constant(c: Qi) -> Self {
        BiRational::from_poly(BiPoly::constant(c))
    }
    fn variable(name: &str) -> Result<Self> {
        match name {
            "z" => Ok(BiRational::from_poly(BiPoly::monomial(1, 0))),
            "w" => Ok(BiRational::from_poly(BiPoly::monomial(0, 1))),
            _ => Err(Error::InvalidArgument(format!("unknown variable `{name}` (expected z or w)"))),
        }
    }
    fn add(self, rhs: Self) -> Self {
        BiRational::add(&self, &rhs)
    }
    fn sub(self, rhs: Self) -> Self {
        BiRational::add(&self, &rhs.neg())
    }
    fn mul(self, rhs: Self) -> Self {
        BiRational::mul(&self, &rhs)
    }
    fn div(self, rhs: Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BiRational::mul(&self, &rhs.inv()?))
    }
    fn pow(self, e: i64) -> Result<Self> {
        BiRational::pow(&self, e)
    }
}

/// Where a curve sits in P^1 x P^1.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveShape {
    /// `phi(z, w) = 0` with `phi` irreducible.
    Affine { equation: BiPoly },
    /// The line `z = infinity`, parametrized by `w = t`.
    ZInfinity,
    /// The line `w = infinity`, parametrized by `z = t`.
    WInfinity,
}

/// A rational curve `t -> (z(t), w(t))` in P^1 x P^1.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametrizedCurve {
    pub name: String,
    pub z: RationalFunction<Qi>,
    pub w: RationalFunction<Qi>,
    pub shape: CurveShape,
}

impl ParametrizedCurve {
    /// Builds a curve from text; `z = "inf"` or `w = "inf"` selects a line
    /// at infinity, otherwise `equation` is required.
    pub fn parse(name: &str, z: &str, w: &str, equation: Option<&str>) -> Result<Self> {
        let t = RationalFunction::identity();
        let zero = RationalFunction::zero();
        let is_inf = |s: &str| s.trim().eq_ignore_ascii_case("inf") || s.trim() == "∞";
        let curve = if is_inf(z) {
            ParametrizedCurve { name: name.into(), z: zero, w: t, shape: CurveShape::ZInfinity }
        } else if is_inf(w) {
            ParametrizedCurve { name: name.into(), z: t, w: zero, shape: CurveShape::WInfinity }
        } else {
            let eq = equation.ok_or_else(|| Error::Configuration(format!("curve {name} needs an equation")))?;
            let phi = BiRational::parse(eq)?;
            if !phi.den.is_constant() {
                return Err(Error::Configuration(format!("equation of {name} must be a polynomial")));
            }
            let c = phi.den.terms().next().map(|(_, c)| c.clone()).unwrap_or_else(Qi::one);
            let num = phi.num.mul(&BiPoly::constant(Qi::one() / c));
            ParametrizedCurve {
                name: name.into(),
                z: parse_function(z)?,
                w: parse_function(w)?,
                shape: CurveShape::Affine { equation: num },
            }
        };
        curve.validate()?;
        Ok(curve)
    }

    /// The local equation in the chart containing the curve.
    pub fn equation(&self) -> BiPoly {
        match &self.shape {
            CurveShape::Affine { equation } => equation.clone(),
            CurveShape::ZInfinity => BiPoly::monomial(1, 0),
            CurveShape::WInfinity => BiPoly::monomial(0, 1),
        }
    }

    /// `f` written in the chart containing the curve.
    pub fn to_chart(&self, f: &BiRational) -> BiRational {
        match self.shape {
            CurveShape::Affine { .. } => f.clone(),
            CurveShape::ZInfinity => f.invert_z(),
            CurveShape::WInfinity => f.invert_w(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.z.is_constant() && self.w.is_constant() {
            return Err(Error::Configuration(format!("curve {} is a point", self.name)));
        }
        let on = self.equation().restrict(&self.z, &self.w)?;
        if !on.is_zero() {
            return Err(Error::Configuration(format!(
                "parametrization of {} does not satisfy its equation",
                self.name
            )));
        }
        Ok(())
    }

    /// `nu_E(f)`.
    pub fn order_of(&self, f: &BiRational) -> i64 {
        match self.shape {
            CurveShape::Affine { ref equation } => f.order_along(equation),
            CurveShape::ZInfinity => f.order_at_z_infinity(),
            CurveShape::WInfinity => f.order_at_w_infinity(),
        }
    }

    /// `f` restricted to the curve, or `None` if the curve lies in its
    /// zero or polar locus.
    pub fn restrict(&self, f: &BiRational) -> Result<Option<RationalFunction<Qi>>> {
        self.to_chart(f).restrict(&self.z, &self.w)
    }

    /// `(f / phi^{nu_E(f)})` restricted to the curve; never zero.
    pub fn leading_coefficient(&self, f: &BiRational) -> Result<RationalFunction<Qi>> {
        let g = self.to_chart(f);
        let phi = self.equation();
        let k = g.order_along(&phi);
        let u = g.strip(&phi, k)?;
        u.restrict(&self.z, &self.w)?
            .ok_or_else(|| Error::GeneralPosition(format!("leading coefficient along {} vanishes", self.name)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> BiRational {
        BiRational::parse(s).unwrap()
    }

    fn f(s: &str) -> RationalFunction<Qi> {
        parse_function(s).unwrap()
    }

    #[test]
    fn exact_division_and_orders() {
        let phi = b("w*z - 1").num;
        let p = phi.mul(&phi).mul(&b("z + w").num);
        assert_eq!(p.order_along(&phi), 2);
        assert!(p.div_exact(&b("z - 3").num).is_none());
        let g = b("(w*z-1)^2/(z+w)");
        assert_eq!(g.order_along(&phi), 2);
        assert_eq!(g.order_along(&b("z+w").num), -1);
        assert_eq!(b("w/(w-2*z)").order_at_z_infinity(), 1);
        assert_eq!(b("w/(w-2*z)").order_at_w_infinity(), 0);
    }

    #[test]
    fn restriction_to_curves() {
        let c = ParametrizedCurve::parse("E", "t", "(3-t)/(t-5)", Some("w*(z-5)+z-3")).unwrap();
        let g = b("(w*(z-5)+z-3)/(w*(z+4)-3*z-2)");
        assert_eq!(c.order_of(&g), 1);
        assert_eq!(c.restrict(&g).unwrap(), None);
        let u = c.leading_coefficient(&g).unwrap();
        assert!(!u.is_zero());
        let h = c.restrict(&b("z*w")).unwrap().unwrap();
        assert_eq!(h, f("t(3-t)/(t-5)"));
        assert!(ParametrizedCurve::parse("bad", "t", "t", Some("w - 2*z")).is_err());
    }

    #[test]
    fn lines_at_infinity() {
        let c = ParametrizedCurve::parse("Zinf", "inf", "t", None).unwrap();
        // w / (w - 2z) has a zero of order one along z = infinity
        let g = b("w/(w-2*z)");
        assert_eq!(c.order_of(&g), 1);
        assert_eq!(c.leading_coefficient(&g).unwrap(), f("-t/2"));
        let h = c.restrict(&b("(z-1)/(z+1)")).unwrap().unwrap();
        assert_eq!(h, f("1"));
    }
}
