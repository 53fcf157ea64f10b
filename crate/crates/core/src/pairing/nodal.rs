//! Two rational components glued at two nodes, the ratio map
//! `h : Pic^{0,0} -> C^*` and its log identity.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{cross_ratio, Evaluation, P1Point, Qi, RationalFunction};
use crate::divisor::{function_from_divisor, principal_divisor, Divisor};
use crate::error::{Error, Result};

use super::logsum::LogSum;
use super::pair0::log_pair;

/// A node identifies `points[component]` across the two components.
#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub name: String,
    pub points: BTreeMap<String, P1Point<Qi>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveConfiguration {
    pub components: Vec<String>,
    pub nodes: Vec<Node>,
    pub marked: BTreeMap<String, (String, P1Point<Qi>)>,
}

/// Degree-zero divisors per component, away from the nodes.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Pic00Element {
    pub parts: BTreeMap<String, Divisor<Qi>>,
}

impl Pic00Element {
    pub fn part(&self, component: &str) -> Divisor<Qi> {
        self.parts.get(component).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut parts = self.parts.clone();
        for (c, d) in &other.parts {
            let e = parts.entry(c.clone()).or_default();
            *e = e.add(d);
        }
        Pic00Element { parts }
    }

    pub fn scale(&self, k: i64) -> Self {
        Pic00Element {
            parts: self.parts.iter().map(|(c, d)| (c.clone(), d.scale(k))).collect(),
        }
    }
}

/// The resolved data `(M, N, r1 on M, r2 on M, r1 on N, r2 on N)`.
struct Glued<'a> {
    m: &'a str,
    n: &'a str,
    r1m: &'a P1Point<Qi>,
    r2m: &'a P1Point<Qi>,
    r1n: &'a P1Point<Qi>,
    r2n: &'a P1Point<Qi>,
}

impl CurveConfiguration {
    /// The standard configuration `M`, `N` glued at `r1`, `r2` (same
    /// coordinates on both sides).
    pub fn two_component(r1: P1Point<Qi>, r2: P1Point<Qi>) -> Self {
        let node = |name: &str, p: &P1Point<Qi>| Node {
            name: name.to_string(),
            points: BTreeMap::from([("M".to_string(), p.clone()), ("N".to_string(), p.clone())]),
        };
        CurveConfiguration {
            components: vec!["M".into(), "N".into()],
            nodes: vec![node("r1", &r1), node("r2", &r2)],
            marked: BTreeMap::new(),
        }
    }

    fn glued(&self) -> Result<Glued<'_>> {
        if self.components.len() != 2 {
            return Err(Error::Configuration(format!(
                "expected 2 components, found {}",
                self.components.len()
            )));
        }
        if self.nodes.len() != 2 {
            return Err(Error::Configuration(format!(
                "expected 2 nodes, found {}",
                self.nodes.len()
            )));
        }
        let (m, n) = (self.components[0].as_str(), self.components[1].as_str());
        if m == n {
            return Err(Error::Configuration("component names must differ".into()));
        }
        let look = |k: usize, c: &str| -> Result<&P1Point<Qi>> {
            self.nodes[k].points.get(c).ok_or_else(|| {
                Error::Configuration(format!("node {} has no point on {c}", self.nodes[k].name))
            })
        };
        let g = Glued {
            m,
            n,
            r1m: look(0, m)?,
            r2m: look(1, m)?,
            r1n: look(0, n)?,
            r2n: look(1, n)?,
        };
        if g.r1m == g.r2m || g.r1n == g.r2n {
            return Err(Error::Configuration("node points must be distinct on each component".into()));
        }
        for node in &self.nodes {
            if node.points.keys().any(|c| c != m && c != n) {
                return Err(Error::Configuration(format!("node {} names an unknown component", node.name)));
            }
        }
        for (name, (c, _)) in &self.marked {
            if c != m && c != n {
                return Err(Error::Configuration(format!("marked point {name} is on unknown component {c}")));
            }
        }
        Ok(g)
    }

    fn validate_gamma(&self, g: &Glued<'_>, gamma: &Pic00Element) -> Result<()> {
        for c in gamma.parts.keys() {
            if c != g.m && c != g.n {
                return Err(Error::Configuration(format!("divisor on unknown component {c}")));
            }
        }
        for (c, r1, r2) in [(g.m, g.r1m, g.r2m), (g.n, g.r1n, g.r2n)] {
            let d = gamma.part(c);
            if d.degree() != 0 {
                return Err(Error::NonzeroDegree(d.degree()));
            }
            for r in [r1, r2] {
                if d.multiplicity(r) != 0 {
                    return Err(Error::SupportCollision {
                        point: format!("{r} on {c}"),
                    });
                }
            }
        }
        Ok(())
    }
}

fn value_at(f: &RationalFunction<Qi>, p: &P1Point<Qi>) -> Result<Qi> {
    match f.eval(p) {
        Evaluation::Value(v) => Ok(v),
        _ => Err(Error::SupportCollision {
            point: p.to_string(),
        }),
    }
}

/// `(phi_M(r1)/phi_M(r2)) / (phi_N(r1)/phi_N(r2))`.
pub fn pic00_h(config: &CurveConfiguration, gamma: &Pic00Element) -> Result<Qi> {
    let g = config.glued()?;
    config.validate_gamma(&g, gamma)?;
    let phi_m = function_from_divisor(&gamma.part(g.m))?;
    let phi_n = function_from_divisor(&gamma.part(g.n))?;
    let ratio_m = value_at(&phi_m, g.r1m)? / value_at(&phi_m, g.r2m)?;
    let ratio_n = value_at(&phi_n, g.r1n)? / value_at(&phi_n, g.r2n)?;
    Ok(ratio_m / ratio_n)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HmapIdentity {
    pub h: Qi,
    pub lhs: LogSum,
    /// `<r1 - r2, gamma>_M + <r2 - r1, gamma>_N` with `log|phi|` summed
    /// over the node divisors.
    pub rhs: LogSum,
    /// The same pairings evaluated the other way round: `log|psi|` over
    /// `gamma`, where `div psi` is the node divisor.
    pub rhs_dual: LogSum,
    pub equal: bool,
}

fn node_divisor(a: &P1Point<Qi>, b: &P1Point<Qi>) -> Divisor<Qi> {
    Divisor::from_terms([(a.clone(), 1), (b.clone(), -1)])
}

pub fn hmap_log_identity(config: &CurveConfiguration, gamma: &Pic00Element) -> Result<HmapIdentity> {
    let h = pic00_h(config, gamma)?;
    let g = config.glued()?;
    let lhs = LogSum::term(&h, 1);
    let gm = gamma.part(g.m);
    let gn = gamma.part(g.n);
    let phi_m = function_from_divisor(&gm)?;
    let phi_n = function_from_divisor(&gn)?;
    let dm = node_divisor(g.r1m, g.r2m);
    let dn = node_divisor(g.r2n, g.r1n);
    let rhs = log_pair(&phi_m, &dm)?.add(&log_pair(&phi_n, &dn)?);
    let psi_m = function_from_divisor(&dm)?;
    let psi_n = function_from_divisor(&dn)?;
    let rhs_dual = log_pair(&psi_m, &gm)?.add(&log_pair(&psi_n, &gn)?);
    let equal = lhs.equals(&rhs) && lhs.equals(&rhs_dual);
    Ok(HmapIdentity {
        h,
        lhs,
        rhs,
        rhs_dual,
        equal,
    })
}

/// `deg(delta . N) * (<r1 - r2, gamma>_M + <r2 - r1, gamma>_N)`.
pub fn nodal_regulator(config: &CurveConfiguration, gamma: &Pic00Element, deg_delta_n: i64) -> Result<LogSum> {
    Ok(hmap_log_identity(config, gamma)?.rhs.scale(deg_delta_n))
}

/// `h(gamma)` against `[r1, r2; q2, q1]` for `gamma = 0` on `M` and
/// `(q1) - (q2)` on `N`.
pub fn cross_ratio_link(
    r1: &P1Point<Qi>,
    r2: &P1Point<Qi>,
    q1: &P1Point<Qi>,
    q2: &P1Point<Qi>,
) -> Result<(Qi, Qi)> {
    let config = CurveConfiguration::two_component(r1.clone(), r2.clone());
    let gamma = Pic00Element {
        parts: BTreeMap::from([("N".to_string(), node_divisor(q1, q2))]),
    };
    Ok((pic00_h(&config, &gamma)?, cross_ratio(r1, r2, q2, q1)?))
}

/// Builds a principal class: `gamma_M = div phi_M`, and `gamma_N = div phi_N`
/// with `phi_N = psi (z - alpha)/(z - beta)` rescaled so that `phi_M` and
/// `phi_N` agree at both nodes. `alpha` is solved for exactly.
pub fn principal_class(
    config: &CurveConfiguration,
    phi_m: &RationalFunction<Qi>,
    psi: &RationalFunction<Qi>,
    beta: &Qi,
) -> Result<Pic00Element> {
    let g = config.glued()?;
    let (r1, r2) = match (g.r1n, g.r2n) {
        (P1Point::Finite(a), P1Point::Finite(b)) => (a.clone(), b.clone()),
        _ => return Err(Error::Configuration("node points on N must be finite".into())),
    };
    let k = value_at(phi_m, g.r1m)? / value_at(phi_m, g.r2m)?;
    let psi_ratio = value_at(psi, g.r1n)? / value_at(psi, g.r2n)?;
    let beta_ratio = (r1.clone() - beta.clone()) / (r2.clone() - beta.clone());
    if beta_ratio.is_zero() {
        return Err(Error::InvalidArgument("beta sits on a node".into()));
    }
    // (r1 - alpha)/(r2 - alpha) must equal l
    let l = k / psi_ratio * beta_ratio;
    if l.is_one() {
        return Err(Error::InvalidArgument("degenerate node ratio".into()));
    }
    let alpha = (l.clone() * r2 - r1) / (l - Qi::one());
    let mobius = RationalFunction::new(
        crate::algebra::Polynomial::linear(alpha),
        crate::algebra::Polynomial::linear(beta.clone()),
    )?;
    let phi_n = psi.mul(&mobius);
    Ok(Pic00Element {
        parts: BTreeMap::from([
            (g.m.to_string(), principal_divisor(phi_m)?),
            (g.n.to_string(), principal_divisor(&phi_n)?),
        ]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::expr::{parse_function, parse_point};

    fn pt(s: &str) -> P1Point<Qi> {
        parse_point(s).unwrap()
    }

    fn div(terms: &[(&str, i64)]) -> Divisor<Qi> {
        Divisor::from_terms(terms.iter().map(|(p, m)| (pt(p), *m)))
    }

    fn reference() -> (CurveConfiguration, Pic00Element) {
        let config = CurveConfiguration::two_component(pt("0"), pt("1"));
        let gamma = Pic00Element {
            parts: BTreeMap::from([("N".to_string(), div(&[("2", 1), ("3", -1)]))]),
        };
        (config, gamma)
    }

    #[test]
    fn h_examples() {
        let (config, gamma) = reference();
        assert_eq!(pic00_h(&config, &Pic00Element::default()).unwrap(), Qi::one());
        let h = pic00_h(&config, &gamma).unwrap();
        assert_eq!(h, Qi::from_fracs((3, 4), (0, 1)));
        assert_eq!(pic00_h(&config, &gamma.scale(2)).unwrap(), h.clone() * h);
    }

    #[test]
    fn log_identity_and_regulator() {
        let (config, gamma) = reference();
        let id = hmap_log_identity(&config, &gamma).unwrap();
        assert!(id.equal);
        assert!(id.lhs.equals(&LogSum::term(&Qi::from_fracs((3, 4), (0, 1)), 1)));
        assert!(hmap_log_identity(&config, &Pic00Element::default()).unwrap().lhs.is_zero());
        let reg = nodal_regulator(&config, &gamma, 2).unwrap();
        assert!(reg.equals(&LogSum::term(&Qi::from_fracs((3, 4), (0, 1)), 2)));
        assert!(nodal_regulator(&config, &gamma, 0).unwrap().is_zero());
    }

    #[test]
    fn principal_classes_vanish() {
        let config = CurveConfiguration::two_component(pt("0"), pt("1"));
        let phi_m = parse_function("(z-2)(z+i)/((z-5)(z-3i))").unwrap();
        let psi = parse_function("(z+2)/(z-7)").unwrap();
        let gamma = principal_class(&config, &phi_m, &psi, &Qi::from_ints(4, 1)).unwrap();
        let id = hmap_log_identity(&config, &gamma).unwrap();
        assert!(id.equal && id.lhs.is_zero());
        assert_eq!(id.h, Qi::one());
        for d in [0, 1, 5] {
            assert!(nodal_regulator(&config, &gamma, d).unwrap().is_zero());
        }
    }

    #[test]
    fn cross_ratio_orientation() {
        let (h, cr) = cross_ratio_link(&pt("0"), &pt("1"), &pt("2"), &pt("3")).unwrap();
        assert_eq!(h, cr);
        assert_eq!(h, Qi::from_fracs((3, 4), (0, 1)));
    }

    #[test]
    fn configuration_errors() {
        let (mut config, gamma) = reference();
        config.nodes.pop();
        assert!(matches!(pic00_h(&config, &gamma), Err(Error::Configuration(_))));
        let (config, _) = reference();
        let touching = Pic00Element {
            parts: BTreeMap::from([("M".to_string(), div(&[("0", 1), ("3", -1)]))]),
        };
        assert!(pic00_h(&config, &touching).is_err());
    }
}
