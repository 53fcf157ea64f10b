//! Dispatch of scenario cases to the computational modules.

use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::currents::pair1::pair1;
use crate::currents::{d_relation_check, omega_eval, r_current_eval, QuadratureOptions};
use crate::error::{Error, Result};
use crate::ledger::{ledger_template, precycle_div, Template};
use crate::pairing::nodal::{cross_ratio_link, principal_class};
use crate::pairing::{
    hmap_log_identity, nodal_regulator, nondegeneracy_witness, pair0, projection_check0, reciprocity_check0,
    CurveConfiguration, ExactComparison,
};
use crate::tame::{tame_boundary_curve, tame_symbol};
use crate::{Qi, QiPoint};

use super::model::*;
use super::report::{CaseReport, NumericValue, Report, Verdict};

pub const DEFAULT_TOL: f64 = 1e-5;
pub const DEFAULT_MAX_CELLS: usize = 2_000_000;
pub const DEFAULT_STEP: f64 = 1e-2;

/// Command-line overrides.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunOptions {
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub max_cells: Option<usize>,
}

type Outcome = (Verdict, Vec<NumericValue>, Vec<String>);

/// Runs a scenario; suites run their cases in parallel, reported in input
/// order. Errors inside a case become that case's verdict.
pub fn run(scenario: &Scenario, opts: &RunOptions) -> Report {
    let start = Instant::now();
    let seed = opts.seed.unwrap_or(scenario.seed);
    let tol = opts.tol.or(scenario.tol);
    let cases = match &scenario.payload {
        Payload::Suite(cases) => cases
            .par_iter()
            .enumerate()
            .map(|(k, c)| run_case(k, c, opts, tol))
            .collect(),
        _ => vec![run_case(0, scenario, opts, tol)],
    };
    let tol = if scenario.kind().is_numeric() { Some(tol.unwrap_or(DEFAULT_TOL)) } else { None };
    Report::new(
        scenario.kind(),
        seed,
        tol,
        scenario.to_value(),
        cases,
        start.elapsed().as_secs_f64() * 1e3,
    )
}

fn run_case(index: usize, s: &Scenario, opts: &RunOptions, inherited_tol: Option<f64>) -> CaseReport {
    let start = Instant::now();
    let seed = opts.seed.unwrap_or(s.seed);
    let tol = if s.kind().is_numeric() {
        Some(opts.tol.or(s.tol).or(inherited_tol).unwrap_or(DEFAULT_TOL))
    } else {
        None
    };
    let max_cells = opts.max_cells.unwrap_or(DEFAULT_MAX_CELLS);
    let outcome = dispatch(s, seed, tol.unwrap_or(DEFAULT_TOL), max_cells);
    let (verdict, values, notes, error) = match outcome {
        Ok((v, values, notes)) => (v, values, notes, None),
        Err(e) => (Verdict::Error, Vec::new(), Vec::new(), Some(e.to_string())),
    };
    CaseReport {
        index,
        kind: s.kind(),
        label: s.label.clone(),
        seed,
        tol,
        verdict,
        values,
        notes,
        error,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn dispatch(s: &Scenario, seed: u64, tol: f64, max_cells: usize) -> Result<Outcome> {
    match &s.payload {
        Payload::Weil(c) => weil(c),
        Payload::Tame(c) => tame(c),
        Payload::Pair0(c) => run_pair0(c),
        Payload::Reciprocity0(c) => {
            let r = reciprocity_check0(&function(&c.f, "f")?, &function(&c.g, "g")?)?;
            Ok(comparison(&r, "sum over div g of log|f|", "sum over div f of log|g|"))
        }
        Payload::Projection0(c) => {
            let r = projection_check0(&function(&c.pi, "pi")?, &divisor(&c.eta, "eta")?, &divisor(&c.eps, "eps")?)?;
            Ok(comparison(&r, "<eta, pi^* eps>", "<pi_* eta, eps>"))
        }
        Payload::Witness(c) => {
            let w = nondegeneracy_witness(&divisor(&c.eta, "eta")?, seed)?;
            Ok((
                Verdict::from_bool(!w.value.is_zero()),
                vec![
                    NumericValue::exact("g", w.g.to_expr_string("z")),
                    NumericValue::log_sum("<eta, div g>", &w.value),
                ],
                vec![format!("{} candidates tried", w.candidates_tried)],
            ))
        }
        Payload::Hmap(c) => hmap(c),
        Payload::Ledger(c) => {
            let terms = ledger_template(Template::parse(&c.template)?, c.m, c.n)?;
            let div = precycle_div(&terms);
            let notes = terms.iter().map(|t| format!("{}: {}", t.label, t.boundary)).collect();
            Ok((
                Verdict::from_bool(div.is_zero()),
                vec![NumericValue::exact("DIV", div.to_string())],
                notes,
            ))
        }
        Payload::Currents(c) => currents(c),
        Payload::Pair1(c) => run_pair1(c, tol, max_cells),
        Payload::Suite(_) => Err(Error::InvalidArgument("suites do not nest".into())),
    }
}

fn comparison(r: &ExactComparison, lhs: &str, rhs: &str) -> Outcome {
    (
        Verdict::from_bool(r.equal),
        vec![NumericValue::log_sum(lhs, &r.lhs), NumericValue::log_sum(rhs, &r.rhs)],
        Vec::new(),
    )
}

fn weil(c: &WeilCase) -> Result<Outcome> {
    let f = function(&c.f, "f")?;
    let g = function(&c.g, "g")?;
    let symbols = tame_boundary_curve(&f, &g)?;
    let mut values: Vec<NumericValue> = symbols
        .iter()
        .map(|(p, v)| NumericValue::exact(&format!("T_{p}"), v.to_canonical_string()))
        .collect();
    let product = symbols.product();
    values.push(NumericValue::exact("product", product.to_canonical_string()));
    Ok((Verdict::from_bool(product.is_one()), values, Vec::new()))
}

fn tame(c: &TameCase) -> Result<Outcome> {
    let t = tame_symbol(&function(&c.f, "f")?, &function(&c.g, "g")?, &point(&c.at, "at")?)?;
    let ok = match &c.expect {
        Some(e) => scalar(e, "expect")? == t.value,
        None => true,
    };
    Ok((
        Verdict::from_bool(ok),
        vec![NumericValue::exact(&format!("T_{}", t.at), t.value.to_canonical_string())],
        Vec::new(),
    ))
}

fn run_pair0(c: &Pair0Case) -> Result<Outcome> {
    let beta = precycle(&c.beta, "beta")?;
    let eps = component_divisors(&c.eps, "eps")?;
    let v = pair0(&beta, &eps)?;
    let ok = match &c.expect_product {
        Some(e) => scalar(e, "expect_product")? == Qi::new(v.modulus_sq_product(), Zero::zero()),
        None => true,
    };
    let mut notes = Vec::new();
    for (comp, d) in beta.boundary()? {
        notes.push(format!("DIV(beta) on {comp}: {d}"));
    }
    Ok((Verdict::from_bool(ok), vec![NumericValue::log_sum("<eta, eps>", &v)], notes))
}

fn hmap(c: &HmapCase) -> Result<Outcome> {
    let r1 = point(&c.r1, "r1")?;
    let r2 = point(&c.r2, "r2")?;
    let config = CurveConfiguration::two_component(r1.clone(), r2.clone());
    let principal = c.principal.is_some();
    let gamma = match (&c.gamma, &c.principal) {
        (Some(g), _) => pic00(g, "gamma")?,
        (None, Some(p)) => principal_class(
            &config,
            &function(&p.phi_m, "principal.phi_m")?,
            &function(&p.psi, "principal.psi")?,
            &scalar(&p.beta, "principal.beta")?,
        )?,
        (None, None) => return Err(Error::Schema { field: "gamma".into(), message: "missing".into() }),
    };
    let id = hmap_log_identity(&config, &gamma)?;
    let mut ok = id.equal;
    let mut values = vec![
        NumericValue::exact("h(gamma)", id.h.to_canonical_string()),
        NumericValue::log_sum("log|h(gamma)|", &id.lhs),
        NumericValue::log_sum("pairing sum", &id.rhs),
        NumericValue::log_sum("pairing sum (dual)", &id.rhs_dual),
    ];
    let mut notes = Vec::new();
    if principal {
        ok &= id.lhs.is_zero() && id.h.is_one();
        for (comp, d) in &gamma.parts {
            notes.push(format!("principal class on {comp}: {d}"));
        }
    }
    if let Some((q1, q2)) = cross_ratio_shape(&gamma) {
        let (h, cr) = cross_ratio_link(&r1, &r2, &q1, &q2)?;
        values.push(NumericValue::exact("[r1, r2; q2, q1]", cr.to_canonical_string()));
        ok &= h == cr && h == id.h;
    }
    if let Some(d) = c.deg_delta_n {
        values.push(NumericValue::log_sum("regulator", &nodal_regulator(&config, &gamma, d)?));
    }
    Ok((Verdict::from_bool(ok), values, notes))
}

/// `(q1, q2)` when `gamma` is zero on `M` and `(q1) - (q2)` on `N`.
fn cross_ratio_shape(gamma: &crate::pairing::Pic00Element) -> Option<(QiPoint, QiPoint)> {
    if !gamma.part("M").is_zero() {
        return None;
    }
    let n = gamma.part("N");
    if n.len() != 2 {
        return None;
    }
    let q1 = n.iter().find(|(_, m)| *m == 1)?.0.clone();
    let q2 = n.iter().find(|(_, m)| *m == -1)?.0.clone();
    Some((q1, q2))
}

fn currents(c: &CurrentsCase) -> Result<Outcome> {
    let fs = c
        .functions
        .iter()
        .enumerate()
        .map(|(k, f)| function(f, &format!("functions[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    let t0 = scalar(&c.t0, "t0")?.to_c64();
    let r = r_current_eval(&fs, t0)?;
    let omega = omega_eval(&fs, t0)?;
    let mut values = vec![
        NumericValue::pointwise(&format!("(2 pi i)^{} R_{}", fs.len(), fs.len()), r.coefficients.clone()),
        NumericValue::pointwise(
            &format!("Omega_{} (re, im)", fs.len()),
            omega.coefficients.iter().flat_map(|z| [z.re, z.im]).collect(),
        ),
    ];
    if fs.len() == 3 {
        return Ok((Verdict::Pass, values, vec!["evaluation only for m = 3".into()]));
    }
    let h = c.h.unwrap_or(DEFAULT_STEP);
    let a = d_relation_check(&fs, t0, h)?;
    let b = d_relation_check(&fs, t0, h / 2.0)?;
    values.push(NumericValue::pointwise("residual at h, h/2", vec![a.residual, b.residual]));
    values.push(NumericValue::pointwise("residual / h^2", vec![a.constant]));
    let ok = if a.residual == 0.0 && b.residual == 0.0 {
        true
    } else {
        let ratio = a.residual / b.residual;
        values.push(NumericValue::pointwise("halving ratio", vec![ratio]));
        (3.5..=4.5).contains(&ratio)
    };
    Ok((Verdict::from_bool(ok), values, Vec::new()))
}

fn run_pair1(c: &Pair1Case, tol: f64, max_cells: usize) -> Result<Outcome> {
    let (xi1, comps1) = symbol(&c.xi1, "xi1")?;
    let (xi2, comps2) = symbol(&c.xi2, "xi2")?;
    let mut opts = QuadratureOptions::new(tol);
    opts.max_cells = max_cells;
    let p12 = pair1(&xi1, &xi2, &comps2, &opts)?;
    let p21 = pair1(&xi2, &xi1, &comps1, &opts)?;
    let quad = |name: &str, r: &crate::currents::pair1::Pair1Result| NumericValue::Quadrature {
        name: name.into(),
        value: r.value,
        error_estimate: r.error_estimate,
        cells_used: r.contributions.iter().map(|c| c.cells_used).sum(),
        excision_levels: r.contributions.iter().map(|c| c.excision_levels).max().unwrap_or(0),
    };
    let sum = p12.value + p21.value;
    let bound = (10.0 * tol).max(1e-4 * p12.value.abs().max(1.0));
    let mut notes = Vec::new();
    if p12.root_fallback || p21.root_fallback {
        notes.push("some singular points were located numerically".into());
    }
    for (side, r) in [("P(xi1, xi2)", &p12), ("P(xi2, xi1)", &p21)] {
        for k in &r.contributions {
            let how = if k.short_circuit { " (vanishes identically)" } else { "" };
            notes.push(format!("{side} on {}: {:.12e}{how}", k.curve, k.integral));
        }
    }
    Ok((
        Verdict::from_bool(sum.abs() < bound),
        vec![
            quad("P(xi1, xi2)", &p12),
            quad("P(xi2, xi1)", &p21),
            NumericValue::pointwise("sum, bound", vec![sum, bound]),
        ],
        notes,
    ))
}
