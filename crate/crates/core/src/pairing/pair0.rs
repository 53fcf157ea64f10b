//! The m = 0 pairing `<eta, eps> = sum_i sum_{p in eps} mult(p) log|f_i(p)|`
//! on configurations of rational curves, and its exact checks.

use std::collections::BTreeMap;

use crate::algebra::{Evaluation, P1Point, Qi, RationalFunction};
use crate::divisor::{function_from_divisor, principal_divisor, pullback, pushforward, Divisor};
use crate::error::{Error, Result};

use super::logsum::LogSum;

/// Name used for the single component when a scenario does not name one.
pub const DEFAULT_COMPONENT: &str = "P1";

/// `beta = sum (f_i, D_i)`: functions attached to named components.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PrecycleCurve {
    pub terms: Vec<(RationalFunction<Qi>, String)>,
}

impl PrecycleCurve {
    pub fn single(f: RationalFunction<Qi>) -> Self {
        PrecycleCurve {
            terms: vec![(f, DEFAULT_COMPONENT.to_string())],
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        PrecycleCurve { terms }
    }

    /// `DIV(beta)`, per component.
    pub fn boundary(&self) -> Result<ComponentDivisors> {
        let mut out = ComponentDivisors::new();
        for (f, c) in &self.terms {
            let d = principal_divisor(f)?;
            let e = out.entry(c.clone()).or_default();
            *e = e.add(&d);
        }
        Ok(out)
    }
}

pub type ComponentDivisors = BTreeMap<String, Divisor<Qi>>;

pub fn on_default(d: Divisor<Qi>) -> ComponentDivisors {
    BTreeMap::from([(DEFAULT_COMPONENT.to_string(), d)])
}

/// `log|f|` integrated against a divisor, exactly.
pub fn log_pair(f: &RationalFunction<Qi>, eps: &Divisor<Qi>) -> Result<LogSum> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let mut out = LogSum::zero();
    for (p, m) in eps.iter() {
        match f.eval(p) {
            Evaluation::Value(v) => out.push(&v, m),
            _ => {
                return Err(Error::SupportCollision {
                    point: p.to_string(),
                })
            }
        }
    }
    Ok(out)
}

pub fn pair0(beta: &PrecycleCurve, eps: &ComponentDivisors) -> Result<LogSum> {
    let mut out = LogSum::zero();
    for (f, c) in &beta.terms {
        if let Some(d) = eps.get(c) {
            out = out.add(&log_pair(f, d)?);
        } else if f.is_zero() {
            return Err(Error::ZeroFunction);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactComparison {
    pub lhs: LogSum,
    pub rhs: LogSum,
    pub equal: bool,
}

impl ExactComparison {
    fn new(lhs: LogSum, rhs: LogSum) -> Self {
        let equal = lhs.equals(&rhs);
        ExactComparison { lhs, rhs, equal }
    }
}

/// `<div f, div g>` computed as `sum_{div g} log|f|` and as `sum_{div f} log|g|`.
pub fn reciprocity_check0(f: &RationalFunction<Qi>, g: &RationalFunction<Qi>) -> Result<ExactComparison> {
    let df = principal_divisor(f)?;
    let dg = principal_divisor(g)?;
    if let Some(p) = df.support().find(|p| dg.multiplicity(p) != 0) {
        return Err(Error::SupportCollision {
            point: p.to_string(),
        });
    }
    Ok(ExactComparison::new(log_pair(f, &dg)?, log_pair(g, &df)?))
}

/// `<eta, pi^* eps>` on the source against `<pi_* eta, eps>` on the target.
pub fn projection_check0(
    pi: &RationalFunction<Qi>,
    eta: &Divisor<Qi>,
    eps: &Divisor<Qi>,
) -> Result<ExactComparison> {
    if eps.degree() != 0 {
        return Err(Error::NonzeroDegree(eps.degree()));
    }
    let push = pushforward(pi, eta)?;
    if let Some(p) = push.support().find(|p| eps.multiplicity(p) != 0) {
        return Err(Error::SupportCollision {
            point: p.to_string(),
        });
    }
    let f_src = function_from_divisor(eta)?;
    let f_tgt = function_from_divisor(&push)?;
    let lhs = log_pair(&f_src, &pullback(pi, eps)?)?;
    let rhs = log_pair(&f_tgt, eps)?;
    Ok(ExactComparison::new(lhs, rhs))
}

pub const WITNESS_BUDGET: usize = 200;

/// Gaussian integers `x + y i` with `x >= 2`, `y >= 0`, ordered by `x + y`
/// then by decreasing `x`: 2, 3, 2+i, 4, 3+i, 2+2i, ...
pub fn witness_grid() -> impl Iterator<Item = Qi> {
    (0i64..).flat_map(|s| (0..=s).map(move |y| Qi::from_ints(2 + s - y, y)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub g: RationalFunction<Qi>,
    pub value: LogSum,
    pub candidates_tried: usize,
}

/// Finds `g = z - a`, or `(z - a)/(z - b)` when infinity is in the support,
/// with `sum_{p in eta} mult(p) log|g(p)| != 0`. The seed rotates the start
/// of the candidate grid.
pub fn nondegeneracy_witness(eta: &Divisor<Qi>, seed: u64) -> Result<Witness> {
    if eta.is_zero() {
        return Err(Error::EmptyCycle);
    }
    if eta.degree() != 0 {
        return Err(Error::NonzeroDegree(eta.degree()));
    }
    let offset = (seed % 64) as usize;
    let avoid = |a: &Qi| eta.multiplicity(&P1Point::Finite(a.clone())) == 0;
    let needs_pole = eta.multiplicity(&P1Point::Infinity) != 0;
    let pole = if needs_pole {
        (1..).map(|k| Qi::from_ints(-k, 0)).find(avoid)
    } else {
        None
    };
    let candidates = witness_grid()
        .skip(offset)
        .filter(avoid)
        .take(WITNESS_BUDGET);
    for (k, a) in candidates.enumerate() {
        let mut d = Divisor::from_terms([(P1Point::Finite(a), 1)]);
        match &pole {
            Some(b) => d.add_point(P1Point::Finite(b.clone()), -1),
            None => d.add_point(P1Point::Infinity, -1),
        }
        let g = function_from_divisor(&d)?;
        let value = log_pair(&g, eta)?;
        if !value.is_zero() {
            return Ok(Witness {
                g,
                value,
                candidates_tried: k + 1,
            });
        }
    }
    Err(Error::WitnessBudgetExhausted {
        budget: WITNESS_BUDGET,
    })
}
