//! The m = 1 pairing of symbols `{f1, f2}`, `{g1, g2}` on P^1 x P^1:
//!
//! `P = (2 pi)^{-2} sum_j int_{E_j} R_2(F1, F2) ^ d arg H_j`,
//!
//! where `E_j` runs over the components of the tame boundary of `{g1, g2}`,
//! `F_i` are the restrictions of `f_i` and `H_j = g1^{nu_j(g2)} / g2^{nu_j(g1)}`
//! (a unit along `E_j`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{Qi, RationalFunction};
use crate::error::{Error, Result};

use super::bivariate::{BiRational, CurveShape, ParametrizedCurve};
use super::forms::{r2_from_jets, FloatFunction, SingularSet};
use super::quadrature::{integrate_sphere, Chart, Density, FloatPoint, QuadratureOptions, QuadratureResult};

/// `{f1, f2}` on the surface.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceSymbol {
    pub f1: BiRational,
    pub f2: BiRational,
}

impl SurfaceSymbol {
    pub fn parse(f1: &str, f2: &str) -> Result<Self> {
        let s = SurfaceSymbol {
            f1: BiRational::parse(f1)?,
            f2: BiRational::parse(f2)?,
        };
        if s.f1.is_zero() || s.f2.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(s)
    }

    pub fn swap(&self) -> Self {
        SurfaceSymbol {
            f1: self.f2.clone(),
            f2: self.f1.clone(),
        }
    }
}

/// A curve of the tame boundary with `(nu_E(g1), nu_E(g2))`.
#[derive(Clone, Debug, PartialEq)]
pub struct TameComponent {
    pub curve: ParametrizedCurve,
    pub nu: [i64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveContribution {
    pub curve: String,
    /// The integral over the curve, before the `(2 pi)^{-2}` factor.
    pub integral: f64,
    pub error_estimate: f64,
    pub cells_used: usize,
    pub excision_levels: usize,
    pub short_circuit: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pair1Result {
    pub value: f64,
    pub error_estimate: f64,
    pub contributions: Vec<CurveContribution>,
    /// Some singular points were only located numerically.
    pub root_fallback: bool,
}

impl Pair1Result {
    fn zero() -> Self {
        Pair1Result {
            value: 0.0,
            error_estimate: 0.0,
            contributions: Vec::new(),
            root_fallback: false,
        }
    }
}

/// Checks the supplied multiplicities and that the components exhaust
/// the divisors of `g1` and `g2`.
pub fn validate_components(g: &SurfaceSymbol, comps: &[TameComponent]) -> Result<()> {
    for c in comps {
        for (k, gi) in [&g.f1, &g.f2].into_iter().enumerate() {
            let nu = c.curve.order_of(gi);
            if nu != c.nu[k] {
                return Err(Error::Multiplicity {
                    curve: c.curve.name.clone(),
                    detail: format!("nu(g{}) is {nu}, scenario says {}", k + 1, c.nu[k]),
                });
            }
        }
    }
    for (k, gi) in [&g.f1, &g.f2].into_iter().enumerate() {
        let mut rest = gi.clone();
        let mut at_z = 0;
        let mut at_w = 0;
        for c in comps {
            match &c.curve.shape {
                CurveShape::Affine { equation } => rest = rest.strip(equation, c.nu[k])?,
                CurveShape::ZInfinity => at_z = c.nu[k],
                CurveShape::WInfinity => at_w = c.nu[k],
            }
        }
        if !(rest.num.is_constant() && rest.den.is_constant()) {
            return Err(Error::Multiplicity {
                curve: "(missing)".into(),
                detail: format!("divisor of g{} has components not in the list: {rest}", k + 1),
            });
        }
        if gi.order_at_z_infinity() != at_z || gi.order_at_w_infinity() != at_w {
            return Err(Error::Multiplicity {
                curve: "(infinity)".into(),
                detail: format!("orders of g{} along the lines at infinity are not all listed", k + 1),
            });
        }
    }
    Ok(())
}

/// Float data for one chart of one curve.
struct ChartFunctions {
    f1: FloatFunction,
    f2: FloatFunction,
    h: FloatFunction,
}

impl ChartFunctions {
    fn new(f1: &RationalFunction<Qi>, f2: &RationalFunction<Qi>, h: &RationalFunction<Qi>) -> Result<Self> {
        Ok(ChartFunctions {
            f1: FloatFunction::new(f1)?,
            f2: FloatFunction::new(f2)?,
            h: FloatFunction::new(h)?,
        })
    }

    fn density(&self, u: Complex64) -> f64 {
        let (Ok(j1), Ok(j2), Ok(jh)) = (self.f1.jet(u), self.f2.jet(u), self.h.jet(u)) else {
            return 0.0;
        };
        let w = r2_from_jets(&j1, &j2);
        let a = jh.darg();
        w[0] * a[1] - w[1] * a[0]
    }
}

struct CurveDensity {
    t: ChartFunctions,
    s: ChartFunctions,
    singular: Vec<FloatPoint<f64>>,
}

impl Density<f64> for CurveDensity {
    fn density(&self, chart: Chart, u: Complex64) -> f64 {
        match chart {
            Chart::T => self.t.density(u),
            Chart::S => self.s.density(u),
        }
    }

    fn singular_points(&self) -> Vec<FloatPoint<f64>> {
        self.singular.clone()
    }
}

fn restrict_f(curve: &ParametrizedCurve, f: &BiRational, which: &str) -> Result<RationalFunction<Qi>> {
    curve.restrict(f)?.ok_or_else(|| {
        Error::GeneralPosition(format!("{which} vanishes or has a pole along {}", curve.name))
    })
}

/// `H_j` restricted to the component.
pub fn tame_unit(g: &SurfaceSymbol, comp: &TameComponent) -> Result<RationalFunction<Qi>> {
    let u1 = comp.curve.leading_coefficient(&g.f1)?;
    let u2 = comp.curve.leading_coefficient(&g.f2)?;
    Ok(RationalFunction::mul(&u1.pow(comp.nu[1])?, &u2.pow(-comp.nu[0])?))
}

/// `P(xi1, xi2)` with `xi2`'s tame components supplied. `opts.tol` bounds
/// the error of `P` itself.
pub fn pair1(
    xi1: &SurfaceSymbol,
    xi2: &SurfaceSymbol,
    comps2: &[TameComponent],
    opts: &QuadratureOptions<f64>,
) -> Result<Pair1Result> {
    if xi1.f1 == xi1.f2 {
        return Ok(Pair1Result::zero());
    }
    validate_components(xi2, comps2)?;
    let scale = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    let mut out = Pair1Result::zero();
    let mut work = Vec::new();
    for comp in comps2 {
        let f1 = restrict_f(&comp.curve, &xi1.f1, "f1")?;
        let f2 = restrict_f(&comp.curve, &xi1.f2, "f2")?;
        let h = tame_unit(xi2, comp)?;
        let trivial = h.is_constant() || f1 == f2 || (f1.is_constant() && f2.is_constant());
        work.push((comp, f1, f2, h, trivial));
    }
    let active = work.iter().filter(|w| !w.4).count().max(1);
    let mut curve_opts = opts.clone();
    curve_opts.tol = opts.tol * scale / active as f64;
    for (comp, f1, f2, h, trivial) in work {
        if trivial {
            out.contributions.push(CurveContribution {
                curve: comp.curve.name.clone(),
                integral: 0.0,
                error_estimate: 0.0,
                cells_used: 0,
                excision_levels: 0,
                short_circuit: true,
            });
            continue;
        }
        let mut sing = SingularSet::default();
        for f in [&f1, &f2, &h] {
            sing.merge(&SingularSet::of(f));
        }
        out.root_fallback |= sing.fallback;
        let density = CurveDensity {
            t: ChartFunctions::new(&f1, &f2, &h)?,
            s: ChartFunctions::new(
                &f1.in_inverse_coordinate(),
                &f2.in_inverse_coordinate(),
                &h.in_inverse_coordinate(),
            )?,
            singular: sing.points,
        };
        curve_opts.max_cells = opts.max_cells.saturating_sub(out.contributions.iter().map(|c| c.cells_used).sum());
        let r: QuadratureResult<f64> = integrate_sphere(&density, &curve_opts).map_err(|e| match e {
            Error::NonConvergence { best, error_estimate } => Error::NonConvergence {
                best: (out.value * scale + best) / scale,
                error_estimate: error_estimate / scale,
            },
            other => other,
        })?;
        out.value += r.value / scale;
        out.error_estimate += r.error_estimate / scale;
        out.contributions.push(CurveContribution {
            curve: comp.curve.name.clone(),
            integral: r.value,
            error_estimate: r.error_estimate,
            cells_used: r.cells_used,
            excision_levels: r.excision_levels,
            short_circuit: false,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(name: &str, z: &str, w: &str, eq: Option<&str>, nu: [i64; 2]) -> TameComponent {
        TameComponent {
            curve: ParametrizedCurve::parse(name, z, w, eq).unwrap(),
            nu,
        }
    }

    #[test]
    fn equal_functions_give_exact_zero() {
        let xi1 = SurfaceSymbol::parse("(z-1)/(z+1)", "(z-1)/(z+1)").unwrap();
        let xi2 = SurfaceSymbol::parse("(w-4)/(w+5)", "w-2").unwrap();
        let r = pair1(&xi1, &xi2, &[], &QuadratureOptions::new(1e-5)).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn constant_g1_gives_exact_zero() {
        let xi1 = SurfaceSymbol::parse("(z-1)/(z+1)", "(w-3)/(w+2)").unwrap();
        let xi2 = SurfaceSymbol::parse("3", "(w-z)/(w+z-1)").unwrap();
        let comps = [
            comp("w=z", "t", "t", Some("w-z"), [0, 1]),
            comp("w=1-z", "t", "1-t", Some("w+z-1"), [0, -1]),
        ];
        let r = pair1(&xi1, &xi2, &comps, &QuadratureOptions::new(1e-5)).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.contributions.iter().all(|c| c.short_circuit));
    }

    #[test]
    fn multiplicities_are_checked() {
        let xi2 = SurfaceSymbol::parse("(w-4)/(w+5)", "3").unwrap();
        let bad = [comp("w=4", "t", "4", Some("w-4"), [2, 0]), comp("w=-5", "t", "-5", Some("w+5"), [-1, 0])];
        assert!(matches!(validate_components(&xi2, &bad), Err(Error::Multiplicity { .. })));
        let missing = [comp("w=4", "t", "4", Some("w-4"), [1, 0])];
        assert!(matches!(validate_components(&xi2, &missing), Err(Error::Multiplicity { .. })));
        let good = [comp("w=4", "t", "4", Some("w-4"), [1, 0]), comp("w=-5", "t", "-5", Some("w+5"), [-1, 0])];
        assert!(validate_components(&xi2, &good).is_ok());
    }

    #[test]
    fn general_position_is_enforced() {
        let xi1 = SurfaceSymbol::parse("w-4", "z-2").unwrap();
        let xi2 = SurfaceSymbol::parse("(w-4)/(w+5)", "(w*(z-5)+z-3)/(w*(z+4)-3*z-2)").unwrap();
        let comps = [
            comp("w=4", "t", "4", Some("w-4"), [1, 0]),
            comp("w=-5", "t", "-5", Some("w+5"), [-1, 0]),
            comp("A", "t", "(3-t)/(t-5)", Some("w*(z-5)+z-3"), [0, 1]),
            comp("B", "t", "(3*t+2)/(t+4)", Some("w*(z+4)-3*z-2"), [0, -1]),
        ];
        assert!(matches!(
            pair1(&xi1, &xi2, &comps, &QuadratureOptions::new(1e-5)),
            Err(Error::GeneralPosition(_))
        ));
    }
}
