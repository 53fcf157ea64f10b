//! Formal bookkeeping of precycle boundaries over named generators.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Integer combination of named codimension-two cycles.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormalCycle {
    terms: BTreeMap<String, i64>,
}

impl FormalCycle {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<S: Into<String>>(terms: impl IntoIterator<Item = (S, i64)>) -> Self {
        let mut c = Self::zero();
        for (g, k) in terms {
            c.add_term(g.into(), k);
        }
        c
    }

    pub fn add_term(&mut self, generator: String, k: i64) {
        let e = self.terms.entry(generator.clone()).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.remove(&generator);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, k) in &other.terms {
            out.add_term(g.clone(), *k);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, generator: &str) -> i64 {
        self.terms.get(generator).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i64)> {
        self.terms.iter().map(|(g, k)| (g.as_str(), *k))
    }
}

impl fmt::Display for FormalCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (g, k)) in self.iter().enumerate() {
            let sign = if k < 0 { "-" } else { "+" };
            if i == 0 {
                if k < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if k.abs() != 1 {
                write!(f, "{}", k.abs())?;
            }
            write!(f, "[{g}]")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerTerm {
    pub label: String,
    pub boundary: FormalCycle,
}

impl LedgerTerm {
    pub fn new<S: Into<String>>(label: &str, boundary: impl IntoIterator<Item = (S, i64)>) -> Self {
        LedgerTerm {
            label: label.to_string(),
            boundary: FormalCycle::from_terms(boundary),
        }
    }
}

/// `DIV(xi)`: the sum of all boundaries.
pub fn precycle_div(terms: &[LedgerTerm]) -> FormalCycle {
    terms
        .iter()
        .fold(FormalCycle::zero(), |acc, t| acc.add(&t.boundary))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Template {
    SingleK3,
    Family,
}

impl Template {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "single-K3" | "single-k3" | "single" => Ok(Template::SingleK3),
            "family" => Ok(Template::Family),
            other => Err(Error::Template(format!("unknown template `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Template::SingleK3 => "single-K3",
            Template::Family => "family",
        }
    }
}

/// The term list of the chosen construction. For the single surface the
/// `eta` boundary is `(mC - nD) x p + p x (mC - nD)`.
pub fn ledger_template(template: Template, m: i64, n: i64) -> Result<Vec<LedgerTerm>> {
    if m < 1 || n < 1 {
        return Err(Error::Template(format!("m and n must be positive (got {m}, {n})")));
    }
    Ok(match template {
        Template::SingleK3 => vec![
            LedgerTerm::new("f_C on CxC", [("Delta_C", m), ("pxC", -m), ("Cxp", -m)]),
            LedgerTerm::new("f_D on DxD", [("pxD", n), ("Dxp", n), ("Delta_D", -n)]),
            LedgerTerm::new("f_Delta on Delta_X", [("Delta_D", n), ("Delta_C", -m)]),
            LedgerTerm::new("eta", [("Cxp", m), ("pxC", m), ("Dxp", -n), ("pxD", -n)]),
        ],
        Template::Family => {
            if m != n {
                return Err(Error::FamilyRequiresEqual { m, n });
            }
            vec![
                LedgerTerm::new(
                    "f_C on CxC",
                    [("Delta_C", m), ("PxC", -m), ("CxP", -m), ("NxN", m)],
                ),
                LedgerTerm::new(
                    "f_D on DxD",
                    [("PxD", m), ("DxP", m), ("Delta_D", -m), ("NxN", -m)],
                ),
                LedgerTerm::new("f_Delta on Delta_W", [("Delta_D", m), ("Delta_C", -m)]),
                LedgerTerm::new("eta", [("CxP", m), ("PxC", m), ("DxP", -m), ("PxD", -m)]),
            ]
        }
    })
}

/// `DIV(xi)` for the single-surface template when `eta` is built from a
/// function with divisor `nD - mC` instead; nonzero unless `m = n = 0`.
pub fn stated_sign_residual(m: i64, n: i64) -> Result<FormalCycle> {
    let mut terms = ledger_template(Template::SingleK3, m, n)?;
    terms.pop();
    terms.push(LedgerTerm::new(
        "eta (divisor nD - mC)",
        [("Dxp", n), ("Cxp", -m), ("pxD", n), ("pxC", -m)],
    ));
    Ok(precycle_div(&terms))
}
