mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use archpair::algebra::{cross_ratio, MobiusMap, P1Point, Polynomial, RationalFunction};
use archpair::currents::pair1::{pair1, SurfaceSymbol};
use archpair::currents::{d_relation_check, integrate_unit_disk, QuadratureOptions};
use archpair::divisor::{principal_divisor, Divisor};
use archpair::ledger::{ledger_template, precycle_div, Template};
use archpair::pairing::nodal::{cross_ratio_link, principal_class};
use archpair::pairing::{
    hmap_log_identity, nondegeneracy_witness, projection_check0, reciprocity_check0, CurveConfiguration,
    Pic00Element,
};
use archpair::scenario::{bundled_suite, run, Kind, NumericValue, RunOptions, Scenario, Verdict};
use archpair::tame::weil_product;
use archpair::{Error, Qi, QiFunction};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;

use common::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn disjoint(f: &QiFunction, g: &QiFunction) -> bool {
    let (df, dg) = (principal_divisor(f).unwrap(), principal_divisor(g).unwrap());
    df.disjoint_from(&dg)
}

fn weil_reciprocity() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    for k in 0..100 {
        let f = split_function(&mut r, 5);
        let g = split_function(&mut r, 5);
        let p = weil_product(&f, &g).map_err(|e| format!("pair {k}: {e}"))?;
        ensure(p.is_one(), || format!("pair {k}: product {p} for f = {f:?}, g = {g:?}"))?;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("100 pairs, product exactly 1, {:?}", start.elapsed()))
}

fn reciprocity_m0() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let mut done = 0;
    while done < 100 {
        let f = split_function(&mut r, 4);
        let g = split_function(&mut r, 4);
        if !disjoint(&f, &g) {
            continue;
        }
        let c = reciprocity_check0(&f, &g).map_err(|e| e.to_string())?;
        ensure(c.equal && c.lhs.sub(&c.rhs).is_zero(), || format!("case {done}: {:?}", c))?;
        // floating cross-check of the exact comparison
        let (a, b) = (c.lhs.to_f64(), c.rhs.to_f64());
        ensure((a - b).abs() <= 1e-9 * (1.0 + a.abs()), || format!("case {done}: {a} vs {b}"))?;
        done += 1;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("100 admissible pairs, exact equality, {:?}", start.elapsed()))
}

fn power_map(k: u32) -> QiFunction {
    RationalFunction::from_poly(Polynomial::x().pow(k))
}

fn projection_formula() -> Outcome {
    let mut r = rng(3);
    let mut report = Vec::new();
    for k in [2u32, 3, 4] {
        let pi = power_map(k);
        let mut done = 0;
        let mut rejected = 0;
        while done < 20 {
            let with_inf = r.gen_bool(0.3);
            let size = r.gen_range(2..=5);
            let eta = if k == 3 {
                degree_zero_divisor(&mut r, size, with_inf, &[Qi::zero()])
            } else {
                degree_zero_divisor(&mut r, size, with_inf, &[])
            };
            let eps = if k == 3 {
                let m = r.gen_range(1..=3);
                Divisor::from_terms([(point(Qi::zero()), m), (P1Point::Infinity, -m)])
            } else {
                let roots = distinct(&mut r, 2, &[]);
                let m = r.gen_range(1..=3);
                Divisor::from_terms([(point(roots[0].powi(k as i64)), m), (point(roots[1].powi(k as i64)), -m)])
            };
            if eta.is_zero() || eps.is_zero() {
                continue;
            }
            match projection_check0(&pi, &eta, &eps) {
                Ok(c) => {
                    ensure(c.equal, || format!("k = {k}: eta {eta:?}, eps {eps:?}"))?;
                    done += 1;
                }
                Err(Error::SupportCollision { .. }) => rejected += 1,
                Err(e) => return Err(format!("k = {k}: {e}")),
            }
        }
        report.push(format!("k={k}: 20 ({rejected} inadmissible redrawn)"));
    }
    Ok(report.join(", "))
}

fn nondegeneracy() -> Outcome {
    let mut r = rng(4);
    let mut worst = 0;
    for k in 0..50u64 {
        let with_inf = r.gen_bool(0.3);
        let size = r.gen_range(2..=if with_inf { 7 } else { 8 });
        let eta = degree_zero_divisor(&mut r, size, with_inf, &[]);
        if eta.is_zero() {
            return Err(format!("generator produced an empty divisor at {k}"));
        }
        let w = nondegeneracy_witness(&eta, k).map_err(|e| format!("eta {k}: {e}"))?;
        ensure(!w.value.is_zero(), || format!("eta {k}: zero value"))?;
        ensure(w.candidates_tried <= 200, || format!("eta {k}: {} candidates", w.candidates_tried))?;
        // independent check: prod |g(p)|^(2 m) != 1
        let mut prod = Qi::one();
        for (p, m) in eta.iter() {
            let v = match w.g.eval(p) {
                archpair::algebra::Evaluation::Value(v) => v,
                other => return Err(format!("eta {k}: witness singular at {p}: {other:?}")),
            };
            prod = prod * Qi::real(v.norm_sqr()).powi(m);
        }
        ensure(!prod.is_one(), || format!("eta {k}: witness product is 1"))?;
        worst = worst.max(w.candidates_tried);
    }
    Ok(format!("50 cycles, at most {worst} candidates"))
}

fn random_gamma_part(r: &mut rand_chacha::ChaCha8Rng, avoid: &[Qi]) -> Divisor<Qi> {
    let with_inf = r.gen_bool(0.25);
    let size = r.gen_range(2..=4);
    degree_zero_divisor(r, size, with_inf, avoid)
}

fn hmap_identity() -> Outcome {
    let mut r = rng(5);
    for k in 0..25 {
        let nodes = distinct(&mut r, 2, &[]);
        let config = CurveConfiguration::two_component(point(nodes[0].clone()), point(nodes[1].clone()));
        let gamma = Pic00Element {
            parts: BTreeMap::from([
                ("M".to_string(), random_gamma_part(&mut r, &nodes)),
                ("N".to_string(), random_gamma_part(&mut r, &nodes)),
            ]),
        };
        let id = hmap_log_identity(&config, &gamma).map_err(|e| format!("config {k}: {e}"))?;
        ensure(id.equal && id.lhs.sub(&id.rhs).is_zero(), || format!("config {k}: {id:?}"))?;
    }
    let mut principal = 0;
    while principal < 25 {
        let nodes = distinct(&mut r, 2, &[]);
        let config = CurveConfiguration::two_component(point(nodes[0].clone()), point(nodes[1].clone()));
        let phi_m = split_function(&mut r, 3);
        let psi = split_function(&mut r, 3);
        let beta = gaussian(&mut r);
        let singular = |f: &QiFunction| {
            let d = principal_divisor(f).unwrap();
            nodes.iter().any(|a| d.multiplicity(&point(a.clone())) != 0)
        };
        if singular(&phi_m) || singular(&psi) || nodes.contains(&beta) {
            continue;
        }
        let Ok(gamma) = principal_class(&config, &phi_m, &psi, &beta) else {
            continue;
        };
        let id = hmap_log_identity(&config, &gamma).map_err(|e| format!("principal {principal}: {e}"))?;
        ensure(id.lhs.is_zero() && id.rhs.is_zero() && id.h.is_one(), || {
            format!("principal {principal}: {id:?}")
        })?;
        principal += 1;
    }
    Ok("25 random configurations equal, 25 principal classes give 0".into())
}

fn random_p1(r: &mut rand_chacha::ChaCha8Rng) -> P1Point<Qi> {
    if r.gen_bool(0.15) {
        P1Point::Infinity
    } else {
        point(gaussian(r))
    }
}

fn cross_ratio_and_mobius() -> Outcome {
    let q = |s: &str| archpair::algebra::expr::parse_point(s).unwrap();
    let (h, cr) = cross_ratio_link(&q("0"), &q("1"), &q("2"), &q("3")).map_err(|e| e.to_string())?;
    ensure(h == cr && h == Qi::from_fracs((3, 4), (0, 1)), || format!("h = {h}, cross-ratio = {cr}"))?;
    let mut r = rng(6);
    let mut done = 0;
    while done < 50 {
        let pts: Vec<_> = (0..4).map(|_| random_p1(&mut r)).collect();
        let distinct_pts = (0..4).all(|i| (i + 1..4).all(|j| pts[i] != pts[j]));
        if !distinct_pts {
            continue;
        }
        let (a, b, c, d) = (gaussian(&mut r), gaussian(&mut r), gaussian(&mut r), gaussian(&mut r));
        let Ok(m) = MobiusMap::new(a, b, c, d) else {
            continue;
        };
        let before = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).map_err(|e| e.to_string())?;
        let img: Vec<_> = pts.iter().map(|p| m.apply(p)).collect();
        let after = cross_ratio(&img[0], &img[1], &img[2], &img[3]).map_err(|e| e.to_string())?;
        ensure(before == after, || format!("{pts:?} under {m:?}: {before} vs {after}"))?;
        done += 1;
    }
    Ok(format!("h = cross-ratio = {h}, 50 Moebius instances invariant"))
}

fn ledger_cancels() -> Outcome {
    let mut count = 0;
    for m in 1..=5 {
        for n in 1..=5 {
            let terms = ledger_template(Template::SingleK3, m, n).map_err(|e| e.to_string())?;
            let div = precycle_div(&terms);
            ensure(div.is_zero(), || format!("single-K3 ({m}, {n}): {div}"))?;
            count += 1;
        }
        let terms = ledger_template(Template::Family, m, m).map_err(|e| e.to_string())?;
        let nxn: i64 = terms.iter().map(|t| t.boundary.coefficient("NxN")).filter(|c| *c != 0).count() as i64;
        ensure(nxn == 2, || format!("family ({m}, {m}): NxN appears in {nxn} terms"))?;
        let div = precycle_div(&terms);
        ensure(div.is_zero(), || format!("family ({m}, {m}): {div}"))?;
        count += 1;
    }
    Ok(format!("{count} parameter choices sum to 0"))
}

fn smooth_point(r: &mut rand_chacha::ChaCha8Rng, fs: &[QiFunction], min_dist: f64) -> Complex64 {
    let sing: Vec<Complex64> = fs
        .iter()
        .flat_map(|f| finite_points(&principal_divisor(f).unwrap()))
        .map(|a| a.to_c64())
        .collect();
    loop {
        let t = Complex64::new(r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0));
        if sing.iter().all(|s| (s - t).norm() > min_dist) {
            return t;
        }
    }
}

fn current_relation() -> Outcome {
    let mut r = rng(8);
    let h = 1e-2;
    let mut ratios = Vec::new();
    for m in [1usize, 2] {
        for k in 0..20 {
            let fs: Vec<_> = (0..m).map(|_| split_function(&mut r, 3)).collect();
            let t0 = smooth_point(&mut r, &fs, 0.3);
            let a = d_relation_check(&fs, t0, h).map_err(|e| e.to_string())?;
            let b = d_relation_check(&fs, t0, h / 2.0).map_err(|e| e.to_string())?;
            let ratio = a.residual / b.residual;
            ensure((3.5..=4.5).contains(&ratio), || format!("m = {m}, point {k} at {t0}: ratio {ratio}"))?;
            ratios.push(ratio);
        }
    }
    let t0 = Complex64::new(0.7, -0.4);
    let constant = archpair::algebra::expr::parse_function("5/3+2*i").unwrap();
    let f = archpair::algebra::expr::parse_function("(z-2)/(z+i)").unwrap();
    let c = d_relation_check(&[constant], t0, h).map_err(|e| e.to_string())?;
    let same = d_relation_check(&[f.clone(), f], t0, h).map_err(|e| e.to_string())?;
    ensure(c.residual == 0.0 && same.residual == 0.0, || {
        format!("exact-zero cases: {} and {}", c.residual, same.residual)
    })?;
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(format!("40 points, halving ratios in [{lo:.3}, {hi:.3}], exact zeros hold"))
}

fn quadrature_calibration() -> Outcome {
    let pi = std::f64::consts::PI;
    let start = Instant::now();
    let area = integrate_unit_disk(|_| 1.0, vec![], 1e-8).map_err(|e| e.to_string())?;
    let t_area = start.elapsed();
    let start = Instant::now();
    let log = integrate_unit_disk(|t: Complex64| t.norm().ln(), vec![Complex64::new(0.0, 0.0)], 1e-8)
        .map_err(|e| e.to_string())?;
    let t_log = start.elapsed();
    let (e1, e2) = ((area.value - pi).abs(), (log.value + pi / 2.0).abs());
    ensure(e1 < 1e-6, || format!("area error {e1:e}"))?;
    ensure(e2 < 1e-6, || format!("log error {e2:e}"))?;
    within(t_area, Duration::from_secs(30))?;
    within(t_log, Duration::from_secs(30))?;
    Ok(format!("|area - pi| = {e1:.1e} ({t_area:?}), |log + pi/2| = {e2:.1e} ({t_log:?})"))
}

fn quadrature_value(v: &NumericValue) -> Option<f64> {
    match v {
        NumericValue::Quadrature { value, .. } => Some(*value),
        _ => None,
    }
}

fn reciprocity_m1() -> Outcome {
    let start = Instant::now();
    let tol = 1e-5;
    let cases: Vec<Scenario> = bundled_suite("reference")
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|c| c.kind() == Kind::Pair1)
        .collect();
    ensure(cases.len() == 3, || format!("{} pair1 scenarios", cases.len()))?;
    let opts = RunOptions {
        tol: Some(tol),
        ..RunOptions::default()
    };
    let mut sums = Vec::new();
    for s in &cases {
        let report = run(s, &opts);
        let case = &report.cases[0];
        ensure(case.verdict != Verdict::Error, || format!("{:?}", case.error))?;
        let p: Vec<f64> = case.values.iter().filter_map(quadrature_value).collect();
        let bound = (10.0 * tol).max(1e-4 * p[0].abs().max(1.0));
        let sum = p[0] + p[1];
        ensure(sum.abs() < bound, || format!("{:?}: |{} + {}| >= {bound}", s.label, p[0], p[1]))?;
        sums.push(format!("{sum:.1e}"));
    }
    let opts = QuadratureOptions::new(tol);
    let xi2 = SurfaceSymbol::parse("(w-4)/(w+5*i)", "(z-2)/(z+3)").map_err(|e| e.to_string())?;
    let equal = SurfaceSymbol::parse("(z-1)/(z+2*i)", "(z-1)/(z+2*i)").map_err(|e| e.to_string())?;
    let v = pair1(&equal, &xi2, &[], &opts).map_err(|e| e.to_string())?.value;
    ensure(v == 0.0, || format!("f1 = f2 gives {v}"))?;
    let xi1 = SurfaceSymbol::parse("(z-1)/(z+2*i)", "(w-3)/(w+2)").map_err(|e| e.to_string())?;
    let constant = SurfaceSymbol::parse("7", "(w-z-i)/(w+z)").map_err(|e| e.to_string())?;
    let comps = [
        archpair::currents::pair1::TameComponent {
            curve: archpair::currents::bivariate::ParametrizedCurve::parse("w=z+i", "t", "t+i", Some("w-z-i"))
                .map_err(|e| e.to_string())?,
            nu: [0, 1],
        },
        archpair::currents::pair1::TameComponent {
            curve: archpair::currents::bivariate::ParametrizedCurve::parse("w=-z", "t", "-t", Some("w+z"))
                .map_err(|e| e.to_string())?,
            nu: [0, -1],
        },
    ];
    let v = pair1(&xi1, &constant, &comps, &opts).map_err(|e| e.to_string())?.value;
    ensure(v == 0.0, || format!("constant g1 gives {v}"))?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("sums [{}], trivial cases exactly 0, {:?}", sums.join(", "), start.elapsed()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Weil reciprocity", weil_reciprocity),
        ("m=0 reciprocity", reciprocity_m0),
        ("projection formula", projection_formula),
        ("nondegeneracy", nondegeneracy),
        ("h-map log identity", hmap_identity),
        ("cross-ratio link", cross_ratio_and_mobius),
        ("ledger cancellation", ledger_cancels),
        ("current relation", current_relation),
        ("quadrature calibration", quadrature_calibration),
        ("m=1 reciprocity", reciprocity_m1),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
