//! JSON file formats for models, classes, bundles and product specs, and
//! JSON rendering of results.
//!
//! Rationals are strings `"p/q"` or `"p"` (bare JSON integers are also
//! accepted on input). Matrix entries are `[re, im]` pairs; a bare rational
//! stands for a real entry.
//!
//! ```text
//! model:   {"dim": g, "basis": [{"name": "D1", "matrix": [[["1","0"], ...], ...]}, ...]}
//! class:   {"coeffs": ["1/2", "-3", ...]}
//! bundle:  {"rank": r, "c1": {"coeffs": [...]}, "label": "optional"}
//! product: {"factors": [{"model": MODEL, "bundle": BUNDLE, "polarization": CLASS}, ...]}
//! ```

use std::fmt;
use std::marker::PhantomData;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use serde::de::value::MapAccessDeserializer;
use serde::de::{self, Deserialize, Deserializer, MapAccess, SeqAccess, Visitor};
use serde_json::{json, Value};

use crate::bundles::BoundsReport;
use crate::catalogs::{ProductFactor, ProductSpec};
use crate::linalg::{Gaussian, HermitianMatrix, Inertia, Matrix, Polynomial};
use crate::nsmodel::{self, ChamberReport, NsClass};
use crate::regularity::RhoCertificate;
use crate::{BundleDescriptor, Rational};

type Model = nsmodel::AbelianModel<Rational>;

/// A problem with an input file.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
}

impl InputError {
    fn parse(path: &Path, e: serde_json::Error) -> Self {
        // serde_json appends " at line L column C"; the position is reported
        // separately.
        let full = e.to_string();
        let message = match full.rfind(" at line ") {
            Some(k) if e.line() > 0 => full[..k].to_string(),
            _ => full,
        };
        InputError::Parse { path: path.to_path_buf(), line: e.line(), column: e.column(), message }
    }
}

/// Parses a rational from `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let p = num_bigint::BigInt::from_str(p.trim()).ok()?;
            let q = num_bigint::BigInt::from_str(q.trim()).ok()?;
            if q == num_bigint::BigInt::from(0) {
                return None;
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(num_bigint::BigInt::from_str(s).ok()?),
    };
    Some(r)
}

/// `"p/q"`, or `"p"` for integers.
pub fn rat(r: &Rational) -> String {
    r.to_string()
}

struct Q(Rational);

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(QVisitor)
    }
}

struct QVisitor;

impl<'de> Visitor<'de> for QVisitor {
    type Value = Q;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as a string \"p/q\" or an integer")
    }

    fn visit_str<E: de::Error>(self, s: &str) -> Result<Q, E> {
        parse_rational(s).map(Q).ok_or_else(|| E::custom(format!("invalid rational {s:?}")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
        Ok(Q(Rational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
        Ok(Q(Rational::from_integer(v.into())))
    }
}

struct Entry(Gaussian<Rational>);

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(EntryVisitor)
    }
}

struct EntryVisitor;

impl<'de> Visitor<'de> for EntryVisitor {
    type Value = Entry;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a matrix entry [re, im] or a real rational")
    }

    fn visit_str<E: de::Error>(self, s: &str) -> Result<Entry, E> {
        QVisitor.visit_str(s).map(|q| Entry(Gaussian::real(q.0)))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Entry, E> {
        QVisitor.visit_i64(v).map(|q| Entry(Gaussian::real(q.0)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Entry, E> {
        QVisitor.visit_u64(v).map(|q| Entry(Gaussian::real(q.0)))
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Entry, A::Error> {
        let re: Q = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let im: Q = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
        if seq.next_element::<de::IgnoredAny>()?.is_some() {
            return Err(de::Error::invalid_length(3, &self));
        }
        Ok(Entry(Gaussian::new(re.0, im.0)))
    }
}

/// Deserializes a JSON object as `R`, then converts it with `f`; errors
/// from `f` carry the position of the object.
fn checked<'de, D, R, V, F>(d: D, f: F) -> Result<V, D::Error>
where
    D: Deserializer<'de>,
    R: Deserialize<'de>,
    F: FnOnce(R) -> crate::Result<V>,
{
    struct CheckedVisitor<R, F>(F, PhantomData<fn() -> R>);

    impl<'de, R, V, F> Visitor<'de> for CheckedVisitor<R, F>
    where
        R: Deserialize<'de>,
        F: FnOnce(R) -> crate::Result<V>,
    {
        type Value = V;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a JSON object")
        }

        fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<V, A::Error> {
            let raw = R::deserialize(MapAccessDeserializer::new(map))?;
            (self.0)(raw).map_err(de::Error::custom)
        }
    }

    d.deserialize_map(CheckedVisitor(f, PhantomData))
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    name: String,
    matrix: Vec<Vec<Entry>>,
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    dim: usize,
    basis: Vec<RawGenerator>,
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClass {
    coeffs: Vec<Q>,
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    rank: u64,
    c1: RawClass,
    #[serde(default)]
    label: Option<String>,
}

fn build_model(raw: RawModel) -> crate::Result<Arc<Model>> {
    let mut basis = Vec::with_capacity(raw.basis.len());
    for gen in raw.basis {
        let rows = gen.matrix.into_iter().map(|r| r.into_iter().map(|e| e.0).collect()).collect();
        let h = Matrix::from_rows(rows).and_then(HermitianMatrix::new).map_err(|e| {
            crate::Error::InvalidModel(format!("generator {:?}: {e}", gen.name))
        })?;
        basis.push((gen.name, h));
    }
    Model::new(raw.dim, basis)
}

fn build_class(model: &Arc<Model>, raw: RawClass) -> crate::Result<NsClass<Rational>> {
    NsClass::new(model, raw.coeffs.into_iter().map(|q| q.0).collect())
}

fn build_bundle(model: &Arc<Model>, raw: RawBundle) -> crate::Result<BundleDescriptor> {
    let b = BundleDescriptor::new(raw.rank, build_class(model, raw.c1)?)?;
    Ok(match raw.label {
        Some(l) => b.with_label(l),
        None => b,
    })
}

struct ParsedModel(Arc<Model>);

impl<'de> Deserialize<'de> for ParsedModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        checked(d, build_model).map(ParsedModel)
    }
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFactor {
    model: ParsedModel,
    bundle: RawBundle,
    polarization: RawClass,
}

struct ParsedFactor(ProductFactor);

impl<'de> Deserialize<'de> for ParsedFactor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        checked(d, |raw: RawFactor| {
            let model = raw.model.0;
            let bundle = build_bundle(&model, raw.bundle)?;
            let polarization = build_class(&model, raw.polarization)?;
            ProductFactor::new(bundle, polarization)
        })
        .map(ParsedFactor)
    }
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProduct {
    factors: Vec<ParsedFactor>,
}

fn parse_with<V>(
    text: &str,
    origin: &Path,
    f: impl for<'de> FnOnce(&mut serde_json::Deserializer<serde_json::de::StrRead<'de>>) -> serde_json::Result<V>,
) -> Result<V, InputError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let v = f(&mut de).map_err(|e| InputError::parse(origin, e))?;
    de.end().map_err(|e| InputError::parse(origin, e))?;
    Ok(v)
}

pub fn parse_model(text: &str, origin: &Path) -> Result<Arc<Model>, InputError> {
    parse_with(text, origin, |de| ParsedModel::deserialize(de).map(|m| m.0))
}

pub fn parse_class(model: &Arc<Model>, text: &str, origin: &Path) -> Result<NsClass<Rational>, InputError> {
    parse_with(text, origin, |de| checked(de, |raw| build_class(model, raw)))
}

pub fn parse_bundle(model: &Arc<Model>, text: &str, origin: &Path) -> Result<BundleDescriptor, InputError> {
    parse_with(text, origin, |de| checked(de, |raw| build_bundle(model, raw)))
}

pub fn parse_product(text: &str, origin: &Path) -> Result<ProductSpec, InputError> {
    parse_with(text, origin, |de| {
        checked(de, |raw: RawProduct| ProductSpec::new(raw.factors.into_iter().map(|f| f.0).collect()))
    })
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError::Read { path: path.to_path_buf(), message: e.to_string() })
}

pub fn load_model(path: &Path) -> Result<Arc<Model>, InputError> {
    parse_model(&read(path)?, path)
}

pub fn load_class(model: &Arc<Model>, path: &Path) -> Result<NsClass<Rational>, InputError> {
    parse_class(model, &read(path)?, path)
}

pub fn load_bundle(model: &Arc<Model>, path: &Path) -> Result<BundleDescriptor, InputError> {
    parse_bundle(model, &read(path)?, path)
}

pub fn load_product(path: &Path) -> Result<ProductSpec, InputError> {
    parse_product(&read(path)?, path)
}

pub fn model_json(model: &Model) -> Value {
    let basis: Vec<Value> = model
        .basis()
        .iter()
        .map(|(name, h)| {
            let rows: Vec<Value> = h
                .as_matrix()
                .rows()
                .map(|row| row.iter().map(|z| json!([rat(&z.re), rat(&z.im)])).collect())
                .collect();
            json!({"name": name, "matrix": rows})
        })
        .collect();
    json!({"dim": model.dim(), "basis": basis})
}

pub fn class_json(c: &NsClass<Rational>) -> Value {
    json!({"coeffs": c.coeffs().iter().map(rat).collect::<Vec<_>>()})
}

pub fn bundle_json(b: &BundleDescriptor) -> Value {
    let mut v = json!({"rank": b.rank(), "c1": class_json(b.c1())});
    if let Some(l) = &b.label {
        v["label"] = json!(l);
    }
    v
}

pub fn inertia_json(i: &Inertia) -> Value {
    json!({"negatives": i.negatives, "zeros": i.zeros, "positives": i.positives})
}

pub fn polynomial_json(p: &Polynomial<Rational>) -> Value {
    json!(p.coeffs().iter().map(rat).collect::<Vec<_>>())
}

pub fn certificate_json(c: &RhoCertificate) -> Value {
    serde_json::to_value(c).expect("certificate serializes")
}

pub fn bounds_json(b: &BoundsReport) -> Value {
    serde_json::to_value(b).expect("report serializes")
}

pub fn chamber_json(r: &ChamberReport<Rational>) -> Value {
    let crit: Vec<Value> = r
        .critical_params
        .iter()
        .map(|c| json!({"lo": rat(&c.interval.lo), "hi": rat(&c.interval.hi), "multiplicity": c.multiplicity}))
        .collect();
    let intervals: Vec<Value> = r
        .interval_indices
        .iter()
        .map(|c| json!({"lo": rat(&c.lo), "hi": rat(&c.hi), "sample": rat(&c.sample), "index": c.index}))
        .collect();
    json!({
        "start": class_json(&r.start),
        "end": class_json(&r.end),
        "det_polynomial": polynomial_json(&r.det_polynomial),
        "critical_params": crit,
        "intervals": intervals,
    })
}
