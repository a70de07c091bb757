//! Seeded random generators and the invariant suites behind `validate`.
//!
//! Every property draws from its own ChaCha stream derived from the seed,
//! so a property's cases do not depend on which other suites run.

use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bundles::{check_bounds, creg, gv_threshold, wit_index, BundleDescriptor, WitIndex};
use crate::catalogs::{
    elliptic_product_creg, product_creg, product_formula, verlinde_creg, verlinde_engine_creg,
    verlinde_reg_bounds, ProductFactor, ProductSpec, VerlindeSpec,
};
use crate::error::{Error, Result};
use crate::linalg::{Gaussian, HermitianMatrix, Matrix, Polynomial};
use crate::nsmodel::{self, scan_segment, NsClass, Positivity};
use crate::oracle::{kunneth_creg, product_cohomology, EllipticFactor};
use crate::regularity::{rho, rho_of_matrices, rho_predicate, RhoOptions};
use crate::{ExactField, Rational};

type Model = nsmodel::AbelianModel<Rational>;
type Herm = HermitianMatrix<Rational>;
type Class = NsClass<Rational>;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// `p / q` with `|p| <= num` and `1 <= q <= den`.
pub fn small_rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Rational {
    Rational::from_frac(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn small_gaussian<R: Rng>(rng: &mut R, num: i64, den: i64, complex: bool) -> Gaussian<Rational> {
    let re = small_rational(rng, num, den);
    let im = if complex { small_rational(rng, num, den) } else { Rational::zero() };
    Gaussian::new(re, im)
}

pub fn random_hermitian<R: Rng>(rng: &mut R, g: usize, complex: bool) -> Herm {
    let mut m = Matrix::zeros(g);
    for r in 0..g {
        m.set(r, r, Gaussian::real(small_rational(rng, 4, 3)));
        for c in r + 1..g {
            let z = small_gaussian(rng, 3, 3, complex);
            m.set(c, r, z.conj());
            m.set(r, c, z);
        }
    }
    HermitianMatrix::new(m).expect("constructed hermitian")
}

/// `M* M + c·I` with small integer `M` and `c` in `{1, 2}`.
pub fn random_ample<R: Rng>(rng: &mut R, g: usize, complex: bool) -> Herm {
    let mut m = Matrix::zeros(g);
    for r in 0..g {
        for c in 0..g {
            let im = if complex { rng.gen_range(-1..=1) } else { 0 };
            m.set(r, c, Gaussian::new(Rational::from_int(rng.gen_range(-2..=2)), Rational::from_int(im)));
        }
    }
    let shift = Rational::from_int(rng.gen_range(1..=2));
    let h = HermitianMatrix::new(&m.conj_transpose() * &m).expect("Gram matrix is hermitian");
    h.add(&HermitianMatrix::identity(g).scale(&shift))
}

/// A rank-one positive semidefinite form `v v*`.
pub fn random_rank_one<R: Rng>(rng: &mut R, g: usize, complex: bool) -> Herm {
    let v: Vec<Gaussian<Rational>> = (0..g).map(|_| small_gaussian(rng, 2, 1, complex)).collect();
    let mut m = Matrix::zeros(g);
    for r in 0..g {
        for c in 0..g {
            m.set(r, c, v[r].clone() * v[c].conj());
        }
    }
    HermitianMatrix::new(m).expect("outer product is hermitian")
}

pub fn random_invertible<R: Rng>(rng: &mut R, g: usize, complex: bool) -> Matrix<Gaussian<Rational>> {
    loop {
        let mut m = Matrix::zeros(g);
        for r in 0..g {
            for c in 0..g {
                m.set(r, c, small_gaussian(rng, 2, 2, complex));
            }
        }
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// A model with an ample polarization.
#[derive(Clone, Debug)]
pub struct Scene {
    pub model: Arc<Model>,
    pub eta: Class,
}

/// Generators: one ample form, up to `psd` rank-one forms and up to `extra`
/// arbitrary forms, as many as fit in the space of forms. `eta` is a
/// positive multiple of the ample generator.
pub fn random_scene<R: Rng>(rng: &mut R, g: usize, psd: usize, extra: usize) -> Scene {
    loop {
        let complex = g > 1 && rng.gen_bool(0.5);
        let room = if complex { g * g } else { g * (g + 1) / 2 } - 1;
        let psd = psd.min(room);
        let extra = extra.min(room - psd);
        let mut basis = vec![("A".to_string(), random_ample(rng, g, complex))];
        for k in 0..psd {
            basis.push((format!("P{}", k + 1), random_rank_one(rng, g, complex)));
        }
        for k in 0..extra {
            basis.push((format!("X{}", k + 1), random_hermitian(rng, g, complex)));
        }
        let Ok(model) = Model::new(g, basis) else { continue };
        let c = [Rational::one(), Rational::from_int(2), Rational::from_frac(1, 2), Rational::from_int(3)]
            [rng.gen_range(0..4)]
        .clone();
        let eta = NsClass::generator(&model, 0).scale(&c);
        return Scene { model, eta };
    }
}

pub fn random_class<R: Rng>(rng: &mut R, model: &Arc<Model>, num: i64, den: i64) -> Class {
    let coeffs = (0..model.rank()).map(|_| small_rational(rng, num, den)).collect();
    NsClass::new(model, coeffs).expect("coefficient count matches model")
}

/// A random elliptic factor with integral first Chern class.
pub fn random_elliptic_factor<R: Rng>(rng: &mut R) -> EllipticFactor {
    let rank = rng.gen_range(1..=3u64);
    let c1 = rng.gen_range(-6..=6i64);
    EllipticFactor::new(rank, Rational::from_frac(c1, rank as i64), rng.gen_range(1..=3))
        .expect("integral first Chern class")
}

/// `creg` of the box product of elliptic factors through the `rho` engine.
pub fn elliptic_rho(factors: &[EllipticFactor]) -> Result<i64> {
    let pf: Vec<ProductFactor> = factors
        .iter()
        .map(|f| ProductFactor::elliptic(f.rank, &f.slope, &Rational::from_int(f.degree as i64)))
        .collect::<Result<_>>()?;
    if pf.len() == 1 {
        let d = pf[0].elliptic_data().expect("one-dimensional factor");
        return Ok(rho_of_matrices(
            &HermitianMatrix::from_real_diagonal(vec![d.0]),
            &HermitianMatrix::from_real_diagonal(vec![d.1]),
            &RhoOptions::default(),
        )?
        .value);
    }
    product_creg(&ProductSpec::new(pf)?)
}

/// Result of one property over its cases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyOutcome {
    pub suite: &'static str,
    pub property: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Recorded for information; failures do not fail the suite.
    pub survey: bool,
    /// The first few failing cases.
    pub examples: Vec<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.survey || self.failures == 0
    }
}

const MAX_EXAMPLES: usize = 3;

/// Collects the outcome of the checks made by one property.
pub struct Tally {
    failures: usize,
    examples: Vec<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(describe());
            }
        }
    }
}

type Case = fn(&mut ChaCha8Rng, &mut Tally) -> Result<()>;

struct Property {
    suite: &'static str,
    name: &'static str,
    cases: usize,
    survey: bool,
    run: Case,
}

pub const SUITES: &[&str] = &["linalg", "nsmodel", "regularity", "bundles", "catalogs", "oracle"];

const fn prop(suite: &'static str, name: &'static str, cases: usize, run: Case) -> Property {
    Property { suite, name, cases, survey: false, run }
}

const PROPERTIES: &[Property] = &[
    prop("linalg", "congruence_preserves_inertia", 60, linalg_congruence),
    prop("linalg", "det_sign_matches_inertia", 100, linalg_det_sign),
    prop("linalg", "char_poly_degree_and_trace", 100, linalg_char_poly),
    prop("linalg", "sturm_isolates_linear_factor_roots", 100, linalg_sturm),
    prop("nsmodel", "index_monotone_along_ample_ray", 60, ns_monotone),
    prop("nsmodel", "index_of_negation", 60, ns_negation),
    prop("nsmodel", "scan_matches_pointwise_index", 30, ns_scan),
    prop("regularity", "polarization_anchor", 30, reg_anchor),
    prop("regularity", "twist_shifts_by_one", 40, reg_twist),
    prop("regularity", "positive_rescaling_invariance", 40, reg_rescale),
    prop("regularity", "congruence_invariance", 30, reg_congruence),
    prop("regularity", "certificate_is_sound", 40, reg_certificate),
    Property { suite: "regularity", name: "predicate_upward_closed", cases: 40, survey: true, run: reg_upward },
    prop("bundles", "creg_at_most_gv_threshold", 60, bun_gv_bound),
    prop("bundles", "proportional_equality", 60, bun_proportional),
    prop("bundles", "nef_slope_bound", 60, bun_nef),
    prop("bundles", "twist_by_polarization", 40, bun_twist),
    prop("bundles", "wit_index_is_slope_index", 60, bun_wit),
    prop("bundles", "bounds_report_consistent", 40, bun_report),
    prop("catalogs", "verlinde_formula_matches_engine", 40, cat_verlinde),
    prop("catalogs", "verlinde_bounds_ordered", 60, cat_verlinde_bounds),
    prop("catalogs", "elliptic_product_formula_equal_degrees", 60, cat_product_equal),
    Property {
        suite: "catalogs",
        name: "elliptic_product_formula_unequal_degrees",
        cases: 60,
        survey: true,
        run: cat_product_unequal,
    },
    prop("oracle", "kunneth_matches_rho", 60, oracle_vs_rho),
    prop("oracle", "euler_characteristic_multiplicative", 60, oracle_euler),
];

/// Runs every property of `suite` (all suites if `None`).
pub fn run_suites(seed: u64, suite: Option<&str>) -> Result<Vec<PropertyOutcome>> {
    if let Some(s) = suite {
        if !SUITES.contains(&s) {
            return Err(Error::Unsupported(format!("unknown suite {s:?}; expected one of {}", SUITES.join(", "))));
        }
    }
    let mut out = Vec::new();
    for (k, p) in PROPERTIES.iter().enumerate() {
        if suite.is_some_and(|s| s != p.suite) {
            continue;
        }
        let mut r = rng(seed, k as u64);
        let mut tally = Tally { failures: 0, examples: Vec::new() };
        for case in 0..p.cases {
            if let Err(e) = (p.run)(&mut r, &mut tally) {
                tally.check(false, || format!("case {case}: {e}"));
            }
        }
        out.push(PropertyOutcome {
            suite: p.suite,
            property: p.name,
            cases: p.cases,
            failures: tally.failures,
            survey: p.survey,
            examples: tally.examples,
        });
    }
    Ok(out)
}

fn linalg_congruence(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=4);
    let complex = r.gen_bool(0.5);
    let h = random_hermitian(r, g, complex);
    let p = random_invertible(r, g, complex);
    let (a, b) = (h.inertia(), h.congruence(&p).inertia());
    t.check(a == b, || format!("{h} has inertia {a}, congruent form {b}"));
    Ok(())
}

fn linalg_det_sign(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=4);
    let complex = r.gen_bool(0.5);
    let h = if r.gen_bool(0.3) {
        // rank at most 2, singular from g = 3 on
        random_rank_one(r, g, complex).sub(&random_rank_one(r, g, complex))
    } else {
        random_hermitian(r, g, complex)
    };
    let i = h.inertia();
    let d = h.sign_of_det();
    let expected = if i.zeros > 0 { 0 } else if i.negatives % 2 == 0 { 1 } else { -1 };
    t.check(d == expected, || format!("{h}: det sign {d}, inertia {i}"));
    Ok(())
}

fn linalg_char_poly(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=5);
    let h = random_hermitian(r, g, false).realify();
    let p = h.char_poly();
    let n = h.dim();
    let ok = p.degree() == Some(n)
        && p.leading().is_some_and(|c| c.is_one())
        && p.coeff(n - 1) == -h.trace().clone()
        && p.coeff(0) == if n % 2 == 0 { h.det() } else { -h.det() };
    t.check(ok, || format!("char poly {p} of a {n}x{n} form"));
    Ok(())
}

fn linalg_sturm(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let k = r.gen_range(1..=6);
    let roots: Vec<Rational> = (0..k).map(|_| small_rational(r, 12, 4)).collect();
    let p = Polynomial::from_roots(&roots);
    let lo = Rational::from_int(-13);
    let hi = Rational::from_int(13);
    let found = crate::linalg::isolate_real_roots(&p, &lo, &hi)?;
    let mut distinct = roots.clone();
    distinct.sort();
    distinct.dedup();
    let mut ok = found.len() == distinct.len();
    for iso in &found {
        let inside: Vec<&Rational> = distinct.iter().filter(|x| iso.interval.contains(x)).collect();
        ok &= inside.len() == 1
            && roots.iter().filter(|x| *x == inside[0]).count() == iso.multiplicity;
    }
    t.check(ok, || format!("roots {roots:?}, found {} intervals", found.len()));
    Ok(())
}

fn ns_monotone(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=3);
    let s = random_scene(r, g, 0, 2);
    let gamma = random_class(r, &s.model, 4, 3);
    let mut ts: Vec<Rational> = (0..6).map(|_| small_rational(r, 8, 3)).collect();
    ts.sort();
    let mut last: Option<usize> = None;
    for x in &ts {
        let c = gamma.add_scaled(&s.eta, x)?;
        if let Ok(i) = c.index() {
            t.check(last.is_none_or(|l| i <= l), || format!("index rose to {i} at t = {x} along {gamma}"));
            last = Some(i);
        }
    }
    Ok(())
}

fn ns_negation(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=4);
    let s = random_scene(r, g, 0, 2);
    let gamma = random_class(r, &s.model, 4, 3);
    if let Ok(i) = gamma.index() {
        let j = gamma.neg().index()?;
        t.check(i + j == g, || format!("{gamma}: index {i}, negation {j}"));
    }
    Ok(())
}

fn ns_scan(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=3);
    let s = random_scene(r, g, 1, 1);
    let a = random_class(r, &s.model, 4, 2);
    let b = random_class(r, &s.model, 4, 2);
    let report = match scan_segment(&a, &b) {
        Err(Error::DegenerateSegment) => return Ok(()),
        other => other?,
    };
    let ha = a.to_matrix();
    let hd = b.to_matrix().sub(&ha);
    for iv in &report.interval_indices {
        let third = (iv.lo.clone() * Rational::from_int(2) + iv.hi.clone()) / Rational::from_int(3);
        for x in [&iv.sample, &third] {
            let h = ha.add_scaled(&hd, x);
            let i = h.inertia();
            t.check(i.is_nondegenerate() && i.negatives == iv.index, || {
                format!("segment {a} -> {b}: at t = {x} inertia {i}, reported index {}", iv.index)
            });
        }
    }
    let x = small_rational(r, 5, 7);
    let direct = ha.add_scaled(&hd, &x).det();
    t.check(report.det_polynomial.eval(&x) == direct, || format!("det polynomial wrong at {x}"));
    Ok(())
}

fn reg_anchor(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=4);
    let s = random_scene(r, g, 0, 1);
    let v = rho(&s.eta, &s.eta)?.value;
    t.check(v == g as i64 - 1, || format!("rho(eta) = {v} on g = {g}"));
    Ok(())
}

fn reg_twist(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=3);
    let s = random_scene(r, g, 1, 1);
    let gamma = random_class(r, &s.model, 6, 3);
    let a = rho(&gamma, &s.eta)?.value;
    let b = rho(&gamma.add(&s.eta)?, &s.eta)?.value;
    t.check(b == a - 1, || format!("rho({gamma}) = {a} but rho of its twist = {b}"));
    Ok(())
}

fn reg_rescale(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=3);
    let s = random_scene(r, g, 1, 1);
    let gamma = random_class(r, &s.model, 6, 3);
    let c = Rational::from_frac(r.gen_range(1..=7), r.gen_range(1..=5));
    let a = rho(&gamma, &s.eta)?.value;
    let b = rho(&gamma.scale(&c), &s.eta.scale(&c))?.value;
    t.check(a == b, || format!("rho({gamma}) = {a}, after scaling by {c}: {b}"));
    Ok(())
}

fn reg_congruence(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=3);
    let s = random_scene(r, g, 1, 1);
    let gamma = random_class(r, &s.model, 6, 3);
    let complex = r.gen_bool(0.5);
    let p = random_invertible(r, g, complex);
    let moved = s.model.congruent(&p)?;
    let a = rho(&gamma, &s.eta)?.value;
    let b = rho(&NsClass::new(&moved, gamma.coeffs().to_vec())?, &NsClass::new(&moved, s.eta.coeffs().to_vec())?)?
        .value;
    t.check(a == b, || format!("rho({gamma}) = {a}, after congruence {b}"));
    Ok(())
}

fn reg_certificate(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=3);
    let s = random_scene(r, g, 1, 1);
    let gamma = random_class(r, &s.model, 6, 3);
    let c = rho(&gamma, &s.eta)?;
    let holds = rho_predicate(&gamma, &s.eta, c.value)?.holds;
    let below = rho_predicate(&gamma, &s.eta, c.value - 1)?.holds;
    let low = rho_predicate(&gamma, &s.eta, c.lower_witness)?.holds;
    let ok = holds && !below && !low && c.lower_witness < c.value && c.value <= c.upper_witness;
    t.check(ok, || format!("certificate for {gamma}: {c:?}"));
    let mut above = vec![c.upper_witness];
    above.extend((0..5).map(|_| c.upper_witness + r.gen_range(1..=50)));
    for m in above {
        let h = rho_predicate(&gamma, &s.eta, m)?.holds;
        t.check(h, || format!("{gamma}: predicate fails at {m} above the upper witness {}", c.upper_witness));
    }
    Ok(())
}

fn reg_upward(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=3);
    let s = random_scene(r, g, 1, 1);
    let gamma = random_class(r, &s.model, 6, 3);
    let c = rho(&gamma, &s.eta)?;
    for m in c.value..=c.upper_witness {
        let h = rho_predicate(&gamma, &s.eta, m)?.holds;
        t.check(h, || format!("{gamma}: predicate fails at {m} above rho = {}", c.value));
    }
    Ok(())
}

fn random_bundle<R: Rng>(r: &mut R, c1: Class) -> Result<BundleDescriptor<Rational>> {
    BundleDescriptor::new(r.gen_range(1..=4), c1)
}

fn bun_gv_bound(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=3);
    let s = random_scene(r, g, 1, 1);
    let c1 = random_class(r, &s.model, 8, 3);
    let e = random_bundle(r, c1)?;
    let (c, m) = (creg(&e, &s.eta)?, gv_threshold(&e, &s.eta)?);
    t.check(c <= m, || format!("{e}: creg {c} > m_E {m}"));
    Ok(())
}

fn bun_proportional(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=4);
    let s = random_scene(r, g, 0, 1);
    let k = small_rational(r, 12, 5);
    let e = random_bundle(r, s.eta.scale(&k))?;
    let (c, m) = (creg(&e, &s.eta)?, gv_threshold(&e, &s.eta)?);
    t.check(c == m, || format!("{e}: creg {c} != m_E {m}"));
    Ok(())
}

fn bun_nef(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=3);
    let s = random_scene(r, g, 2, 0);
    let coeffs = (0..s.model.rank()).map(|_| Rational::from_frac(r.gen_range(0..=4), r.gen_range(1..=4))).collect();
    let slope = NsClass::new(&s.model, coeffs)?;
    let rank = r.gen_range(1..=3);
    let e = BundleDescriptor::new(rank, slope.scale(&Rational::from_int(rank as i64)))?;
    let c = creg(&e, &s.eta)?;
    t.check(c <= g as i64, || format!("{e}: nef slope but creg {c} > g"));
    if s.eta.sub(&slope)?.positivity() == Positivity::Ample {
        t.check(c == g as i64, || format!("{e}: eta - slope ample but creg {c} != g"));
    }
    Ok(())
}

fn bun_twist(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=3);
    let s = random_scene(r, g, 1, 1);
    let c1 = random_class(r, &s.model, 8, 3);
    let e = random_bundle(r, c1)?;
    let k = r.gen_range(-3..=3);
    let (a, b) = (creg(&e, &s.eta)?, creg(&e.twist(&s.eta, k)?, &s.eta)?);
    t.check(b == a - k, || format!("{e}: creg {a}, twisted by {k}: {b}"));
    Ok(())
}

fn bun_wit(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=3);
    let s = random_scene(r, g, 1, 1);
    let c1 = random_class(r, &s.model, 3, 1);
    let e = random_bundle(r, c1)?;
    let w = wit_index(&e);
    let expected = match e.c1().index() {
        Ok(i) => WitIndex::Index(i),
        Err(_) => WitIndex::Degenerate,
    };
    t.check(w == expected, || format!("{e}: wit index {w}"));
    Ok(())
}

fn bun_report(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=3);
    let s = random_scene(r, g, 1, 1);
    let c1 = random_class(r, &s.model, 8, 3);
    let e = random_bundle(r, c1)?;
    let rep = check_bounds(&e, &s.eta)?;
    t.check(rep.is_consistent(), || format!("{e}: {:?}", rep.violations));
    Ok(())
}

fn random_verlinde<R: Rng>(r: &mut R) -> VerlindeSpec {
    loop {
        let spec = VerlindeSpec {
            genus: r.gen_range(1..=4),
            rank: r.gen_range(1..=6),
            level: r.gen_range(1..=6),
            theta_power: r.gen_range(2..=4),
        };
        if spec.validate().is_ok() {
            return spec;
        }
    }
}

fn cat_verlinde(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let spec = random_verlinde(r);
    let (a, b) = (verlinde_creg(&spec)?, verlinde_engine_creg(&spec)?);
    t.check(a == b, || format!("{spec:?}: formula {a}, engine {b}"));
    Ok(())
}

fn cat_verlinde_bounds(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let spec = random_verlinde(r);
    let b = verlinde_reg_bounds(&spec)?;
    t.check(b.lower <= b.upper && (!b.exact || b.lower == b.upper), || format!("{spec:?}: {b:?}"));
    Ok(())
}

fn random_pair<R: Rng>(r: &mut R, equal_degrees: bool) -> Result<ProductSpec> {
    let f1 = random_elliptic_factor(r);
    let mut f2 = random_elliptic_factor(r);
    if equal_degrees {
        f2.degree = f1.degree;
    } else {
        while f2.degree == f1.degree {
            f2.degree = r.gen_range(1..=3);
        }
    }
    let to_pf = |f: &EllipticFactor| ProductFactor::elliptic(f.rank, &f.slope, &Rational::from_int(f.degree as i64));
    ProductSpec::new(vec![to_pf(&f1)?, to_pf(&f2)?])
}

fn cat_product(r: &mut ChaCha8Rng, t: &mut Tally, equal_degrees: bool) -> Result<()> {
    let spec = random_pair(r, equal_degrees)?;
    let formula = product_formula(&spec)?.expect("two elliptic factors");
    let engine = product_creg(&spec)?;
    t.check(formula == engine, || {
        let d: Vec<_> = spec.factors.iter().filter_map(|f| f.elliptic_data()).collect();
        format!("factors (slope, degree) {d:?}: formula {formula}, engine {engine}")
    });
    Ok(())
}

fn cat_product_equal(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    cat_product(r, t, true)
}

fn cat_product_unequal(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    cat_product(r, t, false)
}

fn oracle_vs_rho(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=3);
    let fs: Vec<EllipticFactor> = (0..g).map(|_| random_elliptic_factor(r)).collect();
    let (a, b) = (kunneth_creg(&fs)?, elliptic_rho(&fs)?);
    t.check(a == b, || format!("{fs:?}: oracle {a}, rho {b}"));
    if g == 2 && fs[0].degree == fs[1].degree {
        let m: Vec<i64> = fs.iter().map(|f| kunneth_creg(std::slice::from_ref(f))).collect::<Result<_>>()?;
        let c = elliptic_product_creg(m[0], m[1]);
        t.check(c == a, || format!("{fs:?}: closed form {c}, oracle {a}"));
    }
    Ok(())
}

fn oracle_euler(r: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let g = r.gen_range(1..=3);
    let fs: Vec<EllipticFactor> = (0..g).map(|_| random_elliptic_factor(r)).collect();
    let m = r.gen_range(-4..=4);
    let h = product_cohomology(&fs, m);
    let alt: num_bigint::BigInt = h.iter().enumerate().map(|(i, x)| if i % 2 == 0 { x.clone() } else { -x }).sum();
    let prod: num_bigint::BigInt = fs.iter().map(|f| f.euler_characteristic(m)).product();
    t.check(alt == prod, || format!("{fs:?} at {m}: alternating sum {alt}, product {prod}"));
    Ok(())
}
