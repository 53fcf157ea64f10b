//! Pointwise values of the currents `R_m`, `Omega_m` and the projections
//! `pi_p` on a curve with coordinate `t = x + i y`.
//!
//! For a function `f` with logarithmic derivative `L = f'/f`,
//! `d log|f| = Re L dx - Im L dy` and `d arg f = Im L dx + Re L dy`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::roots::{approximate_roots, split};
use crate::algebra::{Polynomial, Qi, RationalFunction};
use crate::error::{Error, Result};

use super::quadrature::FloatPoint;

pub type ComplexSample = Complex64;

/// Component of `c` in `R(p) = (2 pi i)^p R`.
pub fn pi_p(c: ComplexSample, p: i64) -> ComplexSample {
    if p.rem_euclid(2) == 0 {
        Complex64::new(c.re, 0.0)
    } else {
        Complex64::new(0.0, c.im)
    }
}

/// Coefficients in the basis `1`, `(dx, dy)` or `dx ^ dy`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormSample<T = f64> {
    pub degree: u8,
    pub coefficients: Vec<T>,
}

impl<T: Clone + num_traits::Zero> FormSample<T> {
    pub fn zero(degree: u8) -> Self {
        let n = if degree == 1 { 2 } else { 1 };
        FormSample {
            degree,
            coefficients: vec![T::zero(); n],
        }
    }

    pub fn function(v: T) -> Self {
        FormSample {
            degree: 0,
            coefficients: vec![v],
        }
    }

    pub fn one_form(dx: T, dy: T) -> Self {
        FormSample {
            degree: 1,
            coefficients: vec![dx, dy],
        }
    }

    pub fn two_form(v: T) -> Self {
        FormSample {
            degree: 2,
            coefficients: vec![v],
        }
    }
}

impl FormSample<ComplexSample> {
    /// Coefficientwise `pi_p`.
    pub fn project(&self, p: i64) -> Self {
        FormSample {
            degree: self.degree,
            coefficients: self.coefficients.iter().map(|c| pi_p(*c, p)).collect(),
        }
    }
}

/// A rational function with binary64 coefficients, evaluated together with
/// its logarithmic derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatFunction {
    num: Polynomial<Complex64>,
    den: Polynomial<Complex64>,
    ln_lead: f64,
    constant: bool,
}

/// `log|f|` and `f'/f` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogJet {
    pub log_abs: f64,
    pub dlog: Complex64,
}

impl LogJet {
    pub fn darg(&self) -> [f64; 2] {
        [self.dlog.im, self.dlog.re]
    }

    pub fn dlog_abs(&self) -> [f64; 2] {
        [self.dlog.re, -self.dlog.im]
    }
}

impl FloatFunction {
    pub fn new(f: &RationalFunction<Qi>) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(FloatFunction {
            num: f.num().map(|c| c.to_c64()),
            den: f.den().map(|c| c.to_c64()),
            ln_lead: f.lead().to_c64().norm().ln(),
            constant: f.is_constant(),
        })
    }

    pub fn is_constant(&self) -> bool {
        self.constant
    }

    pub fn jet(&self, t: Complex64) -> Result<LogJet> {
        if self.constant {
            return Ok(LogJet {
                log_abs: self.ln_lead,
                dlog: Complex64::new(0.0, 0.0),
            });
        }
        let n = self.num.eval(&t);
        let d = self.den.eval(&t);
        if n.norm() == 0.0 || d.norm() == 0.0 || !(n.is_finite() && d.is_finite()) {
            return Err(Error::SingularPoint(format!("{t}")));
        }
        let dlog = self.num.derivative().eval(&t) / n - self.den.derivative().eval(&t) / d;
        Ok(LogJet {
            log_abs: self.ln_lead + n.norm().ln() - d.norm().ln(),
            dlog,
        })
    }
}

/// Zeros and poles of `f` on P^1. Exact when numerator and denominator
/// split over Q(i); otherwise located in binary64 and `fallback` is set.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SingularSet {
    pub points: Vec<FloatPoint<f64>>,
    pub fallback: bool,
}

impl SingularSet {
    pub fn of(f: &RationalFunction<Qi>) -> Self {
        let mut out = SingularSet::default();
        if f.is_zero() || f.is_constant() {
            return out;
        }
        for p in [f.num(), f.den()] {
            match split(p) {
                Ok(roots) => out.points.extend(roots.iter().map(|(r, _)| Some(r.to_c64()))),
                Err(_) => {
                    out.fallback = true;
                    out.points.extend(approximate_roots(p).into_iter().map(Some));
                }
            }
        }
        if f.num().deg() != f.den().deg() {
            out.points.push(None);
        }
        out
    }

    pub fn merge(&mut self, other: &SingularSet) {
        for p in &other.points {
            let dup = self.points.iter().any(|q| match (p, q) {
                (None, None) => true,
                (Some(a), Some(b)) => (a - b).norm() <= 1e-14 * (1.0 + a.norm()),
                _ => false,
            });
            if !dup {
                self.points.push(*p);
            }
        }
        self.fallback |= other.fallback;
    }

    /// Distance from `t0` to the nearest finite singular point.
    pub fn distance(&self, t0: Complex64) -> f64 {
        self.points
            .iter()
            .flatten()
            .map(|p| (p - t0).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

fn float_functions(fs: &[RationalFunction<Qi>]) -> Result<Vec<FloatFunction>> {
    if fs.is_empty() || fs.len() > 3 {
        return Err(Error::InvalidArgument(format!(
            "expected 1 to 3 functions, got {}",
            fs.len()
        )));
    }
    fs.iter().map(FloatFunction::new).collect()
}

fn wedge(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// `R_2 = log|f1| d arg f2 - log|f2| d arg f1` from jets.
pub fn r2_from_jets(j1: &LogJet, j2: &LogJet) -> [f64; 2] {
    let (a1, a2) = (j1.darg(), j2.darg());
    [
        j1.log_abs * a2[0] - j2.log_abs * a1[0],
        j1.log_abs * a2[1] - j2.log_abs * a1[1],
    ]
}

const PERMUTATIONS_3: [([usize; 3], f64); 6] = [
    ([0, 1, 2], 1.0),
    ([1, 2, 0], 1.0),
    ([2, 0, 1], 1.0),
    ([1, 0, 2], -1.0),
    ([0, 2, 1], -1.0),
    ([2, 1, 0], -1.0),
];

fn r3_from_jets(j: &[LogJet]) -> f64 {
    PERMUTATIONS_3
        .iter()
        .map(|(s, sign)| {
            let (a, b, c) = (&j[s[0]], &j[s[1]], &j[s[2]]);
            let arg = wedge(b.darg(), c.darg());
            let abs = wedge(b.dlog_abs(), c.dlog_abs());
            sign * a.log_abs * (-0.5 * arg + abs / 6.0)
        })
        .sum()
}

/// `(2 pi i)^m R_m(f_1, ..., f_m)` at `t0`, with the powers of `i` dropped.
pub fn r_current_eval(fs: &[RationalFunction<Qi>], t0: ComplexSample) -> Result<FormSample> {
    let ff = float_functions(fs)?;
    let jets = ff.iter().map(|f| f.jet(t0)).collect::<Result<Vec<_>>>()?;
    Ok(match jets.len() {
        1 => FormSample::function(jets[0].log_abs),
        2 => {
            let w = r2_from_jets(&jets[0], &jets[1]);
            FormSample::one_form(w[0], w[1])
        }
        _ => FormSample::two_form(r3_from_jets(&jets)),
    })
}

/// `d log f_1 ^ ... ^ d log f_m` pulled back to the `t` chart. Forms of
/// degree above one vanish on a curve and are reported as the zero
/// 2-form.
pub fn omega_eval(fs: &[RationalFunction<Qi>], t0: ComplexSample) -> Result<FormSample<ComplexSample>> {
    let ff = float_functions(fs)?;
    let jets = ff.iter().map(|f| f.jet(t0)).collect::<Result<Vec<_>>>()?;
    if jets.len() == 1 {
        let l = jets[0].dlog;
        Ok(FormSample::one_form(l, l * Complex64::i()))
    } else {
        Ok(FormSample::two_form(Complex64::new(0.0, 0.0)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DRelation {
    pub residual: f64,
    pub h: f64,
    /// `residual / h^2`.
    pub constant: f64,
}

/// Finite-difference check of `(2 pi i)^m dR_m = pi_{m-1}(Omega_m)` at `t0`.
/// For `m = 1` the gradient of `log|f|` is compared with `Re d log f`; for
/// `m = 2` the circulation of `R_2` around the square of side `2h` is
/// divided by its area.
pub fn d_relation_check(fs: &[RationalFunction<Qi>], t0: ComplexSample, h: f64) -> Result<DRelation> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    let ff = float_functions(fs)?;
    let mut sing = SingularSet::default();
    for f in fs {
        sing.merge(&SingularSet::of(f));
    }
    if sing.distance(t0) <= 2.0 * h {
        return Err(Error::SingularPoint(format!(
            "{t0} is within {} of a zero or pole",
            2.0 * h
        )));
    }
    let jets_at = |t: Complex64| ff.iter().map(|f| f.jet(t)).collect::<Result<Vec<_>>>();
    let (ex, ey) = (Complex64::new(h, 0.0), Complex64::new(0.0, h));
    let residual = match ff.len() {
        1 => {
            let f = &ff[0];
            let gx = (f.jet(t0 + ex)?.log_abs - f.jet(t0 - ex)?.log_abs) / (2.0 * h);
            let gy = (f.jet(t0 + ey)?.log_abs - f.jet(t0 - ey)?.log_abs) / (2.0 * h);
            let expect = f.jet(t0)?.dlog_abs();
            (gx - expect[0]).hypot(gy - expect[1])
        }
        2 => {
            let w = |t: Complex64| -> Result<[f64; 2]> {
                let j = jets_at(t)?;
                Ok(r2_from_jets(&j[0], &j[1]))
            };
            let circulation = (w(t0 - ey)?[0] + w(t0 + ex)?[1] - w(t0 + ey)?[0] - w(t0 - ex)?[1]) * (2.0 * h);
            (circulation / (4.0 * h * h)).abs()
        }
        _ => {
            return Err(Error::InvalidArgument(
                "the relation is checked for m = 1 and m = 2".into(),
            ))
        }
    };
    Ok(DRelation {
        residual,
        h,
        constant: residual / (h * h),
    })
}
