//! Scenario records: strict JSON, one object per case, `kind` selecting
//! the payload. Scalars and functions are always strings.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::algebra::expr::{parse_function, parse_point, parse_scalar};
use crate::currents::bivariate::{BiRational, ParametrizedCurve};
use crate::currents::pair1::{SurfaceSymbol, TameComponent};
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::ledger::Template;
use crate::pairing::nodal::Pic00Element;
use crate::pairing::pair0::{ComponentDivisors, PrecycleCurve};
use crate::Qi;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Weil,
    Tame,
    Pair0,
    Reciprocity0,
    Projection0,
    Witness,
    Hmap,
    Ledger,
    Currents,
    Pair1,
    Suite,
}

impl Kind {
    pub const ALL: [Kind; 11] = [
        Kind::Weil,
        Kind::Tame,
        Kind::Pair0,
        Kind::Reciprocity0,
        Kind::Projection0,
        Kind::Witness,
        Kind::Hmap,
        Kind::Ledger,
        Kind::Currents,
        Kind::Pair1,
        Kind::Suite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Weil => "weil",
            Kind::Tame => "tame",
            Kind::Pair0 => "pair0",
            Kind::Reciprocity0 => "reciprocity0",
            Kind::Projection0 => "projection0",
            Kind::Witness => "witness",
            Kind::Hmap => "hmap",
            Kind::Ledger => "ledger",
            Kind::Currents => "currents",
            Kind::Pair1 => "pair1",
            Kind::Suite => "suite",
        }
    }

    pub fn parse(name: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Kinds that accept `tol`.
    pub fn is_numeric(self) -> bool {
        matches!(self, Kind::Currents | Kind::Pair1 | Kind::Suite)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `[point, multiplicity]` pairs.
pub type DivisorRecord = Vec<(String, i64)>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeilCase {
    pub f: String,
    pub g: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TameCase {
    pub f: String,
    pub g: String,
    pub at: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentFunction {
    pub f: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pair0Case {
    pub beta: Vec<ComponentFunction>,
    /// Divisors keyed by component name.
    pub eps: BTreeMap<String, DivisorRecord>,
    /// Expected `prod |alpha|^{2n}` of the result, e.g. `"4/9"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_product: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reciprocity0Case {
    pub f: String,
    pub g: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Projection0Case {
    pub pi: String,
    pub eta: DivisorRecord,
    pub eps: DivisorRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessCase {
    pub eta: DivisorRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrincipalRecord {
    pub phi_m: String,
    pub psi: String,
    pub beta: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HmapCase {
    pub r1: String,
    pub r2: String,
    /// Divisors on `M` and `N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<BTreeMap<String, DivisorRecord>>,
    /// Builds a principal class instead of taking `gamma`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<PrincipalRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg_delta_n: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerCase {
    pub template: String,
    pub m: i64,
    pub n: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurrentsCase {
    pub functions: Vec<String>,
    pub t0: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveRecord {
    pub name: String,
    pub z: String,
    pub w: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<String>,
    pub nu: [i64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolRecord {
    pub f1: String,
    pub f2: String,
    /// Components of the tame boundary of `{f1, f2}`.
    pub curves: Vec<CurveRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pair1Case {
    pub xi1: SymbolRecord,
    pub xi2: SymbolRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteRecord {
    /// Name of a bundled suite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundled: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Weil(WeilCase),
    Tame(TameCase),
    Pair0(Pair0Case),
    Reciprocity0(Reciprocity0Case),
    Projection0(Projection0Case),
    Witness(WitnessCase),
    Hmap(HmapCase),
    Ledger(LedgerCase),
    Currents(CurrentsCase),
    Pair1(Pair1Case),
    Suite(Vec<Scenario>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub seed: u64,
    pub tol: Option<f64>,
    pub label: Option<String>,
    pub payload: Payload,
}

pub const BUNDLED_REFERENCE: &str = include_str!("../../suite/reference.json");

fn schema(field: impl Into<String>, message: impl fmt::Display) -> Error {
    Error::Schema {
        field: field.into(),
        message: message.to_string(),
    }
}

fn join(prefix: &str, field: &str) -> String {
    if prefix.is_empty() {
        field.to_string()
    } else if field.is_empty() {
        prefix.to_string()
    } else {
        format!("{prefix}.{field}")
    }
}

fn backticked(message: &str, lead: &str) -> Option<String> {
    let rest = &message[message.find(lead)? + lead.len()..];
    let end = rest.find('`')?;
    Some(rest[..end].to_string())
}

fn decode<T: DeserializeOwned>(obj: Map<String, Value>, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(Value::Object(obj)).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { String::new() } else { path };
        let message = e.inner().to_string();
        let field = backticked(&message, "missing field `")
            .map(|f| join(&path, &f))
            .unwrap_or(path);
        schema(join(prefix, &field), message)
    })
}

impl Scenario {
    pub fn kind(&self) -> Kind {
        match &self.payload {
            Payload::Weil(_) => Kind::Weil,
            Payload::Tame(_) => Kind::Tame,
            Payload::Pair0(_) => Kind::Pair0,
            Payload::Reciprocity0(_) => Kind::Reciprocity0,
            Payload::Projection0(_) => Kind::Projection0,
            Payload::Witness(_) => Kind::Witness,
            Payload::Hmap(_) => Kind::Hmap,
            Payload::Ledger(_) => Kind::Ledger,
            Payload::Currents(_) => Kind::Currents,
            Payload::Pair1(_) => Kind::Pair1,
            Payload::Suite(_) => Kind::Suite,
        }
    }

    /// Parses JSON text; syntax errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_value(value, "")
    }

    pub fn from_value(value: Value, prefix: &str) -> Result<Self> {
        let Value::Object(mut obj) = value else {
            return Err(schema(join(prefix, ""), "scenario must be a JSON object"));
        };
        let kind = match obj.remove("kind") {
            Some(Value::String(k)) => {
                Kind::parse(&k).ok_or_else(|| schema(join(prefix, "kind"), format!("unknown kind `{k}`")))?
            }
            Some(_) => return Err(schema(join(prefix, "kind"), "kind must be a string")),
            None => return Err(schema(join(prefix, "kind"), "missing field `kind`")),
        };
        let seed = match obj.remove("seed") {
            None => 0,
            Some(v) => v
                .as_u64()
                .ok_or_else(|| schema(join(prefix, "seed"), "seed must be an unsigned integer"))?,
        };
        let tol = match obj.remove("tol") {
            None => None,
            Some(v) => {
                if !kind.is_numeric() {
                    return Err(schema(join(prefix, "tol"), format!("kind `{kind}` takes no tolerance")));
                }
                let t = v
                    .as_f64()
                    .ok_or_else(|| schema(join(prefix, "tol"), "tol must be a number"))?;
                if !(t > 0.0 && t.is_finite()) {
                    return Err(schema(join(prefix, "tol"), "tol must be positive"));
                }
                Some(t)
            }
        };
        let label = match obj.remove("label") {
            None => None,
            Some(Value::String(s)) => Some(s),
            Some(_) => return Err(schema(join(prefix, "label"), "label must be a string")),
        };
        let payload = match kind {
            Kind::Weil => Payload::Weil(decode(obj, prefix)?),
            Kind::Tame => Payload::Tame(decode(obj, prefix)?),
            Kind::Pair0 => Payload::Pair0(decode(obj, prefix)?),
            Kind::Reciprocity0 => Payload::Reciprocity0(decode(obj, prefix)?),
            Kind::Projection0 => Payload::Projection0(decode(obj, prefix)?),
            Kind::Witness => Payload::Witness(decode(obj, prefix)?),
            Kind::Hmap => Payload::Hmap(decode(obj, prefix)?),
            Kind::Ledger => Payload::Ledger(decode(obj, prefix)?),
            Kind::Currents => Payload::Currents(decode(obj, prefix)?),
            Kind::Pair1 => Payload::Pair1(decode(obj, prefix)?),
            Kind::Suite => {
                let rec: SuiteRecord = decode(obj, prefix)?;
                Payload::Suite(expand_suite(rec, prefix)?)
            }
        };
        let scenario = Scenario {
            seed,
            tol,
            label,
            payload,
        };
        scenario.validate(prefix)?;
        Ok(scenario)
    }

    pub fn to_value(&self) -> Value {
        let mut obj = match &self.payload {
            Payload::Weil(c) => to_object(c),
            Payload::Tame(c) => to_object(c),
            Payload::Pair0(c) => to_object(c),
            Payload::Reciprocity0(c) => to_object(c),
            Payload::Projection0(c) => to_object(c),
            Payload::Witness(c) => to_object(c),
            Payload::Hmap(c) => to_object(c),
            Payload::Ledger(c) => to_object(c),
            Payload::Currents(c) => to_object(c),
            Payload::Pair1(c) => to_object(c),
            Payload::Suite(cases) => {
                let mut m = Map::new();
                m.insert("cases".into(), Value::Array(cases.iter().map(Scenario::to_value).collect()));
                m
            }
        };
        let mut out = Map::new();
        out.insert("kind".into(), Value::String(self.kind().name().into()));
        if let Some(l) = &self.label {
            out.insert("label".into(), Value::String(l.clone()));
        }
        out.insert("seed".into(), Value::from(self.seed));
        if let Some(t) = self.tol {
            out.insert("tol".into(), Value::from(t));
        }
        out.append(&mut obj);
        Value::Object(out)
    }

    /// Parses every expression in the payload.
    fn validate(&self, prefix: &str) -> Result<()> {
        let at = |field: &str| join(prefix, field);
        match &self.payload {
            Payload::Weil(c) => {
                function(&c.f, &at("f"))?;
                function(&c.g, &at("g"))?;
            }
            Payload::Tame(c) => {
                function(&c.f, &at("f"))?;
                function(&c.g, &at("g"))?;
                point(&c.at, &at("at"))?;
                if let Some(e) = &c.expect {
                    scalar(e, &at("expect"))?;
                }
            }
            Payload::Pair0(c) => {
                precycle(&c.beta, &at("beta"))?;
                component_divisors(&c.eps, &at("eps"))?;
                if let Some(e) = &c.expect_product {
                    scalar(e, &at("expect_product"))?;
                }
            }
            Payload::Reciprocity0(c) => {
                function(&c.f, &at("f"))?;
                function(&c.g, &at("g"))?;
            }
            Payload::Projection0(c) => {
                function(&c.pi, &at("pi"))?;
                divisor(&c.eta, &at("eta"))?;
                divisor(&c.eps, &at("eps"))?;
            }
            Payload::Witness(c) => {
                divisor(&c.eta, &at("eta"))?;
            }
            Payload::Hmap(c) => {
                point(&c.r1, &at("r1"))?;
                point(&c.r2, &at("r2"))?;
                match (&c.gamma, &c.principal) {
                    (Some(g), None) => {
                        component_divisors(g, &at("gamma"))?;
                    }
                    (None, Some(p)) => {
                        function(&p.phi_m, &at("principal.phi_m"))?;
                        function(&p.psi, &at("principal.psi"))?;
                        scalar(&p.beta, &at("principal.beta"))?;
                    }
                    _ => return Err(schema(at("gamma"), "exactly one of `gamma` and `principal` is required")),
                }
            }
            Payload::Ledger(c) => {
                Template::parse(&c.template).map_err(|e| schema(at("template"), e))?;
            }
            Payload::Currents(c) => {
                if c.functions.is_empty() || c.functions.len() > 3 {
                    return Err(schema(at("functions"), "expected 1 to 3 functions"));
                }
                for (k, f) in c.functions.iter().enumerate() {
                    function(f, &at(&format!("functions[{k}]")))?;
                }
                scalar(&c.t0, &at("t0"))?;
                if let Some(h) = c.h {
                    if !(h > 0.0 && h.is_finite()) {
                        return Err(schema(at("h"), "step must be positive"));
                    }
                }
            }
            Payload::Pair1(c) => {
                symbol(&c.xi1, &at("xi1"))?;
                symbol(&c.xi2, &at("xi2"))?;
            }
            Payload::Suite(_) => {}
        }
        Ok(())
    }
}

fn to_object<T: Serialize>(c: &T) -> Map<String, Value> {
    match serde_json::to_value(c) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    }
}

fn expand_suite(rec: SuiteRecord, prefix: &str) -> Result<Vec<Scenario>> {
    let cases = match (rec.bundled, rec.cases) {
        (Some(name), None) => return bundled_suite(&name),
        (None, Some(cases)) => cases,
        _ => return Err(schema(join(prefix, "cases"), "exactly one of `bundled` and `cases` is required")),
    };
    let mut out = Vec::with_capacity(cases.len());
    for (k, v) in cases.into_iter().enumerate() {
        let p = join(prefix, &format!("cases[{k}]"));
        let s = Scenario::from_value(v, &p)?;
        if s.kind() == Kind::Suite {
            return Err(schema(join(&p, "kind"), "suites do not nest"));
        }
        out.push(s);
    }
    Ok(out)
}

/// The cases of a suite shipped with the crate.
pub fn bundled_suite(name: &str) -> Result<Vec<Scenario>> {
    match name {
        "reference" => match Scenario::parse(BUNDLED_REFERENCE)?.payload {
            Payload::Suite(cases) => Ok(cases),
            _ => Err(schema("bundled", "bundled suite is not a suite")),
        },
        other => Err(schema("bundled", format!("no bundled suite named `{other}`"))),
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Scenario::parse(&text)
}

fn field_error(field: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| schema(field, e)
}

pub(crate) fn function(text: &str, field: &str) -> Result<crate::QiFunction> {
    parse_function(text).map_err(field_error(field))
}

pub(crate) fn scalar(text: &str, field: &str) -> Result<Qi> {
    parse_scalar(text).map_err(field_error(field))
}

pub(crate) fn point(text: &str, field: &str) -> Result<crate::QiPoint> {
    parse_point(text).map_err(field_error(field))
}

pub(crate) fn divisor(rec: &DivisorRecord, field: &str) -> Result<Divisor<Qi>> {
    let mut d = Divisor::zero();
    for (k, (p, m)) in rec.iter().enumerate() {
        d.add_point(point(p, &format!("{field}[{k}]"))?, *m);
    }
    Ok(d)
}

pub(crate) fn component_divisors(rec: &BTreeMap<String, DivisorRecord>, field: &str) -> Result<ComponentDivisors> {
    rec.iter()
        .map(|(c, d)| Ok((c.clone(), divisor(d, &join(field, c))?)))
        .collect()
}

pub(crate) fn pic00(rec: &BTreeMap<String, DivisorRecord>, field: &str) -> Result<Pic00Element> {
    Ok(Pic00Element {
        parts: component_divisors(rec, field)?,
    })
}

pub(crate) fn precycle(beta: &[ComponentFunction], field: &str) -> Result<PrecycleCurve> {
    let mut terms = Vec::with_capacity(beta.len());
    for (k, t) in beta.iter().enumerate() {
        let f = function(&t.f, &format!("{field}[{k}].f"))?;
        let c = t
            .component
            .clone()
            .unwrap_or_else(|| crate::pairing::pair0::DEFAULT_COMPONENT.to_string());
        terms.push((f, c));
    }
    Ok(PrecycleCurve { terms })
}

pub(crate) fn symbol(rec: &SymbolRecord, field: &str) -> Result<(SurfaceSymbol, Vec<TameComponent>)> {
    let f1 = BiRational::parse(&rec.f1).map_err(field_error(&join(field, "f1")))?;
    let f2 = BiRational::parse(&rec.f2).map_err(field_error(&join(field, "f2")))?;
    if f1.is_zero() || f2.is_zero() {
        return Err(schema(join(field, "f1"), "functions must be nonzero"));
    }
    let mut comps = Vec::with_capacity(rec.curves.len());
    for (k, c) in rec.curves.iter().enumerate() {
        let curve = ParametrizedCurve::parse(&c.name, &c.z, &c.w, c.equation.as_deref())
            .map_err(field_error(&format!("{}[{k}]", join(field, "curves"))))?;
        comps.push(TameComponent { curve, nu: c.nu });
    }
    Ok((SurfaceSymbol { f1, f2 }, comps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_weil() {
        let s = Scenario::parse(r#"{"kind": "weil", "f": "z", "g": "1-z"}"#).unwrap();
        assert_eq!(s.kind(), Kind::Weil);
        assert_eq!(s.seed, 0);
        assert_eq!(Scenario::from_value(s.to_value(), "").unwrap(), s);
    }

    #[test]
    fn parse_errors_have_positions() {
        assert!(matches!(Scenario::parse(""), Err(Error::Parse { line: 1, .. })));
        match Scenario::parse("{\n  \"kind\": \"weil\",\n  \"f\": }") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 8)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn schema_errors_name_fields() {
        let field = |text: &str| match Scenario::parse(text) {
            Err(Error::Schema { field, .. }) => field,
            other => panic!("{other:?}"),
        };
        let pair1 = r#"{"kind":"pair1","xi1":{"f1":"z","f2":"w"},"xi2":{"f1":"z","f2":"w","curves":[]}}"#;
        assert_eq!(field(pair1), "xi1.curves");
        assert_eq!(field(r#"{"kind":"weil","f":"z","g":"1-z","h":"2"}"#), "h");
        assert_eq!(field(r#"{"kind":"weil","f":"z"}"#), "g");
        assert_eq!(field(r#"{"kind":"weil","f":"z+","g":"z"}"#), "f");
        assert_eq!(field(r#"{"kind":"weil","f":"z","g":"z","tol":1e-3}"#), "tol");
        assert_eq!(field(r#"{"kind":"nope"}"#), "kind");
        assert_eq!(field(r#"{"f":"z"}"#), "kind");
        assert_eq!(field(r#"{"kind":"suite","cases":[{"kind":"weil","f":"z","g":3}]}"#), "cases[0].g");
    }

    #[test]
    fn bundled_suite_loads() {
        let cases = bundled_suite("reference").unwrap();
        assert!(cases.len() >= 10);
        assert_eq!(cases.iter().filter(|c| c.kind() == Kind::Pair1).count(), 3);
    }
}
