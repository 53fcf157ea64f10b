//! Splitting polynomials into linear factors over Q(i).
//!
//! Roots are located in binary64 (Aberth iteration), snapped to the
//! lattice `Z[i] / a_n` where `a_n` is the leading coefficient after
//! clearing denominators, and then verified exactly. If floats are not
//! accurate enough the approximation is refined by exact Newton steps.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

use super::poly::Polynomial;
use super::scalar::Qi;
use crate::error::{Error, Result};

/// Distinct roots with multiplicities, sorted. Fails with
/// [`Error::NotSplit`] if any irreducible factor has degree above one.
pub fn split(p: &Polynomial<Qi>) -> Result<Vec<(Qi, u32)>> {
    if p.is_zero() {
        return Err(Error::ZeroFunction);
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let g = p.gcd(&p.derivative());
    let sqfree = p.exact_div(&g).into_monic().1;
    let roots = squarefree_roots(&sqfree).ok_or_else(|| Error::NotSplit {
        poly: super::ratfunc::format_poly(p, "z"),
    })?;
    let mut out: Vec<(Qi, u32)> = roots
        .into_iter()
        .map(|r| {
            let m = p.root_multiplicity(&r);
            (r, m)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Distinct roots in binary64, for polynomials that need not split.
pub fn approximate_roots(p: &Polynomial<Qi>) -> Vec<Complex64> {
    if p.is_zero() || p.is_constant() {
        return Vec::new();
    }
    let g = p.gcd(&p.derivative());
    let sqfree = p.exact_div(&g).into_monic().1;
    aberth(&sqfree.map(|c| c.to_c64())).unwrap_or_default()
}

/// Roots of a monic square-free polynomial, or `None` if it does not split.
fn squarefree_roots(p: &Polynomial<Qi>) -> Option<Vec<Qi>> {
    let n = p.deg();
    let mut rest = p.clone();
    let mut found = Vec::with_capacity(n);
    // the root 0, exactly
    if rest.coeff(0).is_zero() {
        found.push(Qi::zero());
        rest = rest.exact_div(&Polynomial::linear(Qi::zero()));
    }
    while rest.deg() > 0 {
        if rest.deg() == 1 {
            let c = rest.coeffs();
            found.push(-c[0].clone() / c[1].clone());
            break;
        }
        let approx = aberth(&rest.map(|c| c.to_c64()))?;
        let lattice = lattice_scale(&rest);
        let mut progress = false;
        for z in approx {
            if let Some(r) = snap_and_verify(&rest, z, &lattice) {
                if !found.contains(&r) && rest.eval(&r).is_zero() {
                    rest = rest.exact_div(&Polynomial::linear(r.clone()));
                    found.push(r);
                    progress = true;
                }
            }
            if rest.deg() <= 1 {
                break;
            }
        }
        if !progress {
            return None;
        }
    }
    Some(found)
}

/// Leading coefficient of `p` after scaling to Gaussian-integer coefficients.
fn lattice_scale(p: &Polynomial<Qi>) -> Qi {
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.re.denom()).lcm(c.im.denom());
    }
    let lead = p.leading().cloned().unwrap_or_else(Qi::one);
    let scale = BigRational::from_integer(l);
    Qi::new(lead.re * scale.clone(), lead.im * scale)
}

fn round_rational_f64(x: f64) -> Option<BigRational> {
    BigInt::from_f64(x.round()).map(BigRational::from_integer)
}

fn round_gaussian(z: &Qi) -> Qi {
    Qi::new(z.re.round(), z.im.round())
}

fn to_dyadic(x: f64, bits: i32) -> Option<BigRational> {
    let scaled = x * 2f64.powi(bits);
    let n = BigInt::from_f64(scaled.round())?;
    Some(BigRational::new(n, BigInt::one() << bits as usize))
}

fn snap(z: &Qi, lattice: &Qi) -> Qi {
    round_gaussian(&(lattice.clone() * z.clone())) / lattice.clone()
}

fn snap_and_verify(p: &Polynomial<Qi>, z: Complex64, lattice: &Qi) -> Option<Qi> {
    let lf = lattice.to_c64();
    let w = lf * z;
    let guess = Qi::new(round_rational_f64(w.re)?, round_rational_f64(w.im)?) / lattice.clone();
    if p.eval(&guess).is_zero() {
        return Some(guess);
    }
    // exact Newton from a dyadic start, snapping after each step
    let dp = p.derivative();
    let mut x = Qi::new(to_dyadic(z.re, 52)?, to_dyadic(z.im, 52)?);
    for _ in 0..6 {
        let d = dp.eval(&x);
        if d.is_zero() {
            return None;
        }
        x = x.clone() - p.eval(&x) / d;
        let c = snap(&x, lattice);
        if p.eval(&c).is_zero() {
            return Some(c);
        }
        // truncate to a dyadic grid
        let xf = x.to_c64();
        if !(xf.re.is_finite() && xf.im.is_finite()) {
            return None;
        }
        let bits = 200;
        x = Qi::new(
            truncate(&x.re, bits),
            truncate(&x.im, bits),
        );
    }
    None
}

fn truncate(q: &BigRational, bits: usize) -> BigRational {
    let den = BigInt::one() << bits;
    let n = (q * BigRational::from_integer(den.clone())).round();
    BigRational::new(n.to_integer(), den)
}

/// Simultaneous Aberth-Ehrlich iteration for all roots of `p`.
fn aberth(p: &Polynomial<Complex64>) -> Option<Vec<Complex64>> {
    let n = p.deg();
    let c = p.coeffs();
    let lead = c[n];
    let dp = p.derivative();
    // Cauchy-type bound for the initial circle
    let radius = 1.0
        + c[..n]
            .iter()
            .map(|a| (a / lead).norm())
            .fold(0.0f64, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(0.5 * radius, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let pk = p.eval(&z[k]);
            if pk.norm() == 0.0 {
                continue;
            }
            let ratio = pk / dp.eval(&z[k]);
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !(w.re.is_finite() && w.im.is_finite()) {
                continue;
            }
            z[k] -= w;
            moved = moved.max(w.norm() / (1.0 + z[k].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    if z.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Some(z)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(re: i64, im: i64) -> Qi {
        Qi::from_ints(re, im)
    }

    #[test]
    fn splits_gaussian_roots_with_multiplicity() {
        let roots = [q(0, 1), q(0, 1), q(0, -1), Qi::from_fracs((2, 3), (-1, 5)), q(7, 0)];
        let p = Polynomial::from_roots(&roots).scale(&q(3, 2));
        let got = split(&p).unwrap();
        let mut expect = vec![
            (q(0, 1), 2),
            (q(0, -1), 1),
            (Qi::from_fracs((2, 3), (-1, 5)), 1),
            (q(7, 0), 1),
        ];
        expect.sort();
        assert_eq!(got, expect);
    }

    #[test]
    fn irreducible_quadratic_is_rejected() {
        // z^2 - 2
        let p = Polynomial::new(vec![q(-2, 0), q(0, 0), q(1, 0)]);
        assert!(matches!(split(&p), Err(Error::NotSplit { .. })));
        // z^2 - i has roots (1+i)/sqrt 2
        let p = Polynomial::new(vec![q(0, -1), q(0, 0), q(1, 0)]);
        assert!(split(&p).is_err());
    }

    #[test]
    fn large_and_tiny_roots() {
        let roots = [q(100_000, -3), Qi::from_fracs((1, 997), (1, 1009)), q(-5, 0)];
        let p = Polynomial::from_roots(&roots);
        assert_eq!(split(&p).unwrap().len(), 3);
    }
}
