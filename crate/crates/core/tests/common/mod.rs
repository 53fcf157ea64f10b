#![allow(dead_code)]

use archpair::algebra::{P1Point, Polynomial, RationalFunction};
use archpair::divisor::Divisor;
use archpair::{Qi, QiFunction, QiPoint};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `(a + b i) / d` with small `a`, `b` and `d` in 1..=3.
pub fn gaussian(rng: &mut ChaCha8Rng) -> Qi {
    let d = rng.gen_range(1..=3);
    Qi::from_fracs((rng.gen_range(-9..=9), d), (rng.gen_range(-9..=9), d))
}

pub fn nonzero_gaussian(rng: &mut ChaCha8Rng) -> Qi {
    loop {
        let a = gaussian(rng);
        if a != Qi::from_ints(0, 0) {
            return a;
        }
    }
}

/// `n` distinct Gaussian rationals outside `avoid`.
pub fn distinct(rng: &mut ChaCha8Rng, n: usize, avoid: &[Qi]) -> Vec<Qi> {
    let mut out: Vec<Qi> = Vec::with_capacity(n);
    while out.len() < n {
        let a = gaussian(rng);
        if !out.contains(&a) && !avoid.contains(&a) {
            out.push(a);
        }
    }
    out
}

fn from_roots_with_mult(roots: &[(Qi, u32)]) -> Polynomial<Qi> {
    let mut p = Polynomial::one();
    for (r, m) in roots {
        for _ in 0..*m {
            p = &p * &Polynomial::linear(r.clone());
        }
    }
    p
}

/// A nonconstant function whose numerator and denominator split over Q(i),
/// both of degree at most `max_deg`.
pub fn split_function(rng: &mut ChaCha8Rng, max_deg: u32) -> QiFunction {
    loop {
        let dn = rng.gen_range(0..=max_deg);
        let dd = rng.gen_range(0..=max_deg);
        if dn + dd == 0 {
            continue;
        }
        let mut pts = Vec::new();
        let take = |deg: u32, pts: &mut Vec<Qi>, rng: &mut ChaCha8Rng| {
            let mut roots = Vec::new();
            let mut left = deg;
            while left > 0 {
                let m = rng.gen_range(1..=left.min(2));
                let r = distinct(rng, 1, pts).remove(0);
                pts.push(r.clone());
                roots.push((r, m));
                left -= m;
            }
            roots
        };
        let num = take(dn, &mut pts, rng);
        let den = take(dd, &mut pts, rng);
        let lead = nonzero_gaussian(rng);
        let f = RationalFunction::new(from_roots_with_mult(&num).scale(&lead), from_roots_with_mult(&den))
            .expect("denominator is monic");
        if !f.is_constant() {
            return f;
        }
    }
}

/// A degree-zero divisor with `support` finite points (plus, optionally,
/// infinity) and small nonzero multiplicities.
pub fn degree_zero_divisor(rng: &mut ChaCha8Rng, support: usize, with_infinity: bool, avoid: &[Qi]) -> Divisor<Qi> {
    assert!(support >= if with_infinity { 1 } else { 2 });
    let pts = distinct(rng, support, avoid);
    let mut d = Divisor::zero();
    let mut total = 0;
    let finite = if with_infinity { support } else { support - 1 };
    for p in &pts[..finite] {
        let mut m = rng.gen_range(-3..=3);
        if m == 0 {
            m = 1;
        }
        total += m;
        d.add_point(P1Point::Finite(p.clone()), m);
    }
    let last = if with_infinity { P1Point::Infinity } else { P1Point::Finite(pts[support - 1].clone()) };
    if total == 0 {
        d.add_point(pts[0].clone().into(), 1);
        total = 1;
    }
    d.add_point(last, -total);
    d
}

pub fn finite_points(d: &Divisor<Qi>) -> Vec<Qi> {
    d.support().filter_map(|p| p.finite().cloned()).collect()
}

pub fn point(a: Qi) -> QiPoint {
    P1Point::Finite(a)
}

pub fn pick<'a, T>(rng: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    xs.choose(rng).expect("nonempty")
}
