//! Tame symbols on P^1 and Weil reciprocity.

use num_traits::One;

use crate::algebra::{P1Point, Polynomial, Qi, RationalFunction};
use crate::divisor::{principal_divisor, ZeroCycleC};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameSymbolValue {
    pub at: P1Point<Qi>,
    pub value: Qi,
}

/// `ord_p f` and the value at `p` of `f / t^ord`, where `t` is the local
/// parameter `z - a`, or `1/z` at infinity.
fn order_and_unit(f: &RationalFunction<Qi>, p: &P1Point<Qi>) -> Result<(i64, Qi)> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    match p {
        P1Point::Finite(a) => {
            let strip = |q: &Polynomial<Qi>| -> (i64, Polynomial<Qi>) {
                let m = q.root_multiplicity(a);
                (m as i64, q.exact_div(&Polynomial::linear(a.clone()).pow(m)))
            };
            let (mn, num) = strip(f.num());
            let (md, den) = strip(f.den());
            Ok((mn - md, f.lead().clone() * num.eval(a) / den.eval(a)))
        }
        // monic numerator and denominator: f = lead * z^(deg num - deg den) * (1 + O(1/z))
        P1Point::Infinity => Ok((f.ord(p)?, f.lead().clone())),
    }
}

/// `T_p{f, g} = (-1)^{ab} (f^b / g^a)(p)` with `a = ord_p f`, `b = ord_p g`.
pub fn tame_symbol(
    f: &RationalFunction<Qi>,
    g: &RationalFunction<Qi>,
    p: &P1Point<Qi>,
) -> Result<TameSymbolValue> {
    let (a, uf) = order_and_unit(f, p)?;
    let (b, ug) = order_and_unit(g, p)?;
    let mut value = uf.powi(b) / ug.powi(a);
    if (a * b) % 2 != 0 {
        value = -value;
    }
    Ok(TameSymbolValue {
        at: p.clone(),
        value,
    })
}

/// Union of the supports of `div f` and `div g`.
pub fn joint_support(f: &RationalFunction<Qi>, g: &RationalFunction<Qi>) -> Result<Vec<P1Point<Qi>>> {
    let df = principal_divisor(f)?;
    let dg = principal_divisor(g)?;
    let mut pts: Vec<P1Point<Qi>> = df.support().chain(dg.support()).cloned().collect();
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// `sum_p (T_p{f, g}, p)` over the joint support.
pub fn tame_boundary_curve(f: &RationalFunction<Qi>, g: &RationalFunction<Qi>) -> Result<ZeroCycleC> {
    let mut out = ZeroCycleC::new();
    for p in joint_support(f, g)? {
        let t = tame_symbol(f, g, &p)?;
        out.insert(t.at, t.value)?;
    }
    Ok(out)
}

/// `prod_p T_p{f, g}`; equal to 1 by Weil reciprocity.
pub fn weil_product(f: &RationalFunction<Qi>, g: &RationalFunction<Qi>) -> Result<Qi> {
    Ok(tame_boundary_curve(f, g)?.product())
}

/// Whether the tame symbols of `f` and `g` multiply to 1.
pub fn weil_holds(f: &RationalFunction<Qi>, g: &RationalFunction<Qi>) -> Result<bool> {
    Ok(weil_product(f, g)?.is_one())
}
