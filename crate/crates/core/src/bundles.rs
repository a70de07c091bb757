//! Semihomogeneous bundles described by `(rank, c1)` and their numerical
//! invariants: continuous regularity, WIT index, positivity, the GV
//! threshold `m_E` and the upper bounds relating them.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Inertia;
use crate::nsmodel::{NsClass, Positivity};
use crate::regularity::{rho_with, Ray, RhoCertificate, RhoOptions};
use crate::scalar::ExactField;

/// A semihomogeneous bundle up to the data its continuous regularity
/// depends on.
#[derive(Clone, Debug)]
pub struct BundleDescriptor<T> {
    rank: u64,
    c1: NsClass<T>,
    pub label: Option<String>,
}

impl<T: ExactField> PartialEq for BundleDescriptor<T> {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.c1 == other.c1 && self.label == other.label
    }
}

impl<T: ExactField> Eq for BundleDescriptor<T> {}

impl<T: ExactField> BundleDescriptor<T> {
    pub fn new(rank: u64, c1: NsClass<T>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        Ok(Self { rank, c1, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// The line bundle with first Chern class `c1`.
    pub fn line_bundle(c1: NsClass<T>) -> Self {
        Self { rank: 1, c1, label: None }
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn c1(&self) -> &NsClass<T> {
        &self.c1
    }

    /// `c1 / rank`.
    pub fn slope_class(&self) -> NsClass<T> {
        self.c1.scale(&(T::one() / rank_scalar(self.rank)))
    }

    /// `E ⊗ O(k)`: the same rank with `c1 + rank·k·eta`.
    pub fn twist(&self, eta: &NsClass<T>, k: i64) -> Result<Self> {
        let c1 = self.c1.add_scaled(eta, &(rank_scalar::<T>(self.rank) * T::from_int(k)))?;
        Ok(Self { rank: self.rank, c1, label: self.label.clone() })
    }

    /// `E^{⊕k}` up to slope: rank and `c1` both multiplied by `k`.
    pub fn scaled(&self, k: u64) -> Result<Self> {
        let rank = self.rank.checked_mul(k).ok_or(Error::Overflow("rank"))?;
        Self::new(rank, self.c1.scale(&rank_scalar(k)))
    }
}

fn rank_scalar<T: ExactField>(r: u64) -> T {
    T::from_int(i64::try_from(r).expect("rank fits in i64"))
}

impl<T: ExactField> fmt::Display for BundleDescriptor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            write!(f, "{l}: ")?;
        }
        write!(f, "rank {}, c1 = {}", self.rank, self.c1)
    }
}

/// Continuous regularity of `E` with respect to the polarization `eta`.
pub fn creg<T: ExactField>(e: &BundleDescriptor<T>, eta: &NsClass<T>) -> Result<i64> {
    Ok(creg_certificate(e, eta, &RhoOptions::default())?.value)
}

pub fn creg_certificate<T: ExactField>(
    e: &BundleDescriptor<T>,
    eta: &NsClass<T>,
    opts: &RhoOptions,
) -> Result<RhoCertificate> {
    rho_with(&e.slope_class(), eta, opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WitIndex {
    Index(usize),
    /// The slope class is degenerate; the index is not determined by the
    /// numerical data.
    Degenerate,
}

impl fmt::Display for WitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitIndex::Index(k) => write!(f, "{k}"),
            WitIndex::Degenerate => f.write_str("degenerate"),
        }
    }
}

impl Serialize for WitIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            WitIndex::Index(k) => s.serialize_u64(*k as u64),
            WitIndex::Degenerate => s.serialize_str("degenerate"),
        }
    }
}

pub fn wit_index<T: ExactField>(e: &BundleDescriptor<T>) -> WitIndex {
    let i = e.slope_class().inertia();
    if i.is_nondegenerate() {
        WitIndex::Index(i.negatives)
    } else {
        WitIndex::Degenerate
    }
}

/// IT of index 0, equivalently ample, equivalently `det E` ample.
pub fn is_it0_ample<T: ExactField>(e: &BundleDescriptor<T>) -> bool {
    e.slope_class().positivity() == Positivity::Ample
}

/// GV-sheaf, equivalently nef, equivalently `det E` nef.
pub fn is_gv_nef<T: ExactField>(e: &BundleDescriptor<T>) -> bool {
    e.slope_class().positivity().is_nef()
}

/// `m_E = min { m : E(m - g) is GV }`, i.e. the least `m` with
/// `slope + (m - g)·eta` positive semidefinite. Nefness is upward closed
/// along an ample ray, so the threshold is found by bisection.
pub fn gv_threshold<T: ExactField>(e: &BundleDescriptor<T>, eta: &NsClass<T>) -> Result<i64> {
    gv_threshold_with(e, eta, &RhoOptions::default())
}

pub fn gv_threshold_with<T: ExactField>(
    e: &BundleDescriptor<T>,
    eta: &NsClass<T>,
    opts: &RhoOptions,
) -> Result<i64> {
    let slope = e.slope_class();
    slope.check_same(eta)?;
    let he = eta.to_matrix();
    if eta.positivity() != Positivity::Ample {
        return Err(Error::NotAmple);
    }
    let hg = slope.to_matrix();
    Ray::new(&hg, &he, opts.scan_cap).first_upward(Inertia::is_positive_semidefinite)
}

/// The regularity bounds evaluated for one bundle, with any violated
/// consequence listed in `violations`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub creg: i64,
    pub m_e: i64,
    pub g: usize,
    /// `creg <= m_E`.
    pub bound_holds: bool,
    /// `c1` is a rational multiple of `eta`.
    pub proportional: bool,
    /// `proportional`, so `creg == m_E` is expected.
    pub equality_expected: bool,
    pub gv: bool,
    /// `gv` implies `creg <= g`.
    pub gv_bound_holds: bool,
    /// `gv` and `eta - slope` ample, so `creg == g` is expected. Without
    /// `gv`, ampleness of `eta - slope` still forces `creg >= g`.
    pub nef_equality_expected: bool,
    pub violations: Vec<String>,
}

impl BoundsReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_bounds<T: ExactField>(e: &BundleDescriptor<T>, eta: &NsClass<T>) -> Result<BoundsReport> {
    check_bounds_with(e, eta, &RhoOptions::default())
}

pub fn check_bounds_with<T: ExactField>(
    e: &BundleDescriptor<T>,
    eta: &NsClass<T>,
    opts: &RhoOptions,
) -> Result<BoundsReport> {
    let creg = creg_certificate(e, eta, opts)?.value;
    let m_e = gv_threshold_with(e, eta, opts)?;
    let g = eta.dim();
    let slope = e.slope_class();
    let proportional = e.c1().is_proportional_to(eta)?;
    let gv = is_gv_nef(e);
    let dual_twist_ample = eta.sub(&slope)?.positivity() == Positivity::Ample;
    let nef_equality_expected = gv && dual_twist_ample;

    let bound_holds = creg <= m_e;
    let gv_bound_holds = !gv || creg <= g as i64;
    let mut violations = Vec::new();
    if !bound_holds {
        violations.push(format!("creg {creg} exceeds m_E {m_e}"));
    }
    if proportional && creg != m_e {
        violations.push(format!("c1 proportional to eta but creg {creg} != m_E {m_e}"));
    }
    if !gv_bound_holds {
        violations.push(format!("GV bundle with creg {creg} > g = {g}"));
    }
    if dual_twist_ample && creg < g as i64 {
        violations.push(format!("eta - slope ample but creg {creg} < g = {g}"));
    }
    if nef_equality_expected && creg != g as i64 {
        violations.push(format!("GV with eta - slope ample but creg {creg} != g = {g}"));
    }
    Ok(BoundsReport {
        creg,
        m_e,
        g,
        bound_holds,
        proportional,
        equality_expected: proportional,
        gv,
        gv_bound_holds,
        nef_equality_expected,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nsmodel::AbelianModel;
    use num_rational::BigRational;
    use std::sync::Arc;

    type Q = BigRational;

    fn q(p: i64, d: i64) -> Q {
        Q::from_frac(p, d)
    }

    fn theta(g: usize) -> (Arc<AbelianModel<Q>>, NsClass<Q>) {
        let m = AbelianModel::principally_polarized(g, "Theta");
        let t = NsClass::generator(&m, 0);
        (m, t)
    }

    fn ell2(a: (i64, i64), b: (i64, i64)) -> NsClass<Q> {
        let m = AbelianModel::elliptic_product(2);
        NsClass::new(&m, vec![q(a.0, a.1), q(b.0, b.1)]).unwrap()
    }

    #[test]
    fn slope_examples() {
        let (_, eta) = theta(3);
        assert_eq!(BundleDescriptor::line_bundle(eta.clone()).slope_class(), eta);
        assert_eq!(BundleDescriptor::new(3, eta.scale(&q(3, 1))).unwrap().slope_class(), eta);
        // W_{a,b} with a = 2, b = 3, g = 3: rank 8, c1 = 12 Theta, slope (3/2) Theta
        let w = BundleDescriptor::new(8, eta.scale(&q(12, 1))).unwrap();
        assert_eq!(w.slope_class(), eta.scale(&q(3, 2)));
        assert_eq!(BundleDescriptor::new(0, eta), Err(Error::ZeroRank));
    }

    #[test]
    fn creg_examples() {
        for g in 1..=4 {
            let (m, eta) = theta(g);
            assert_eq!(creg(&BundleDescriptor::line_bundle(eta.clone()), &eta), Ok(g as i64 - 1));
            assert_eq!(creg(&BundleDescriptor::new(5, NsClass::zero(&m)).unwrap(), &eta), Ok(g as i64));
        }
        let (_, t) = theta(2);
        let w31 = BundleDescriptor::new(9, t.scale(&q(3, 1))).unwrap();
        assert_eq!(creg(&w31, &t.scale(&q(2, 1))), Ok(2));
    }

    #[test]
    fn wit_index_examples() {
        let (m, eta) = theta(3);
        assert_eq!(wit_index(&BundleDescriptor::line_bundle(eta.clone())), WitIndex::Index(0));
        assert_eq!(wit_index(&BundleDescriptor::line_bundle(eta.neg())), WitIndex::Index(3));
        assert_eq!(wit_index(&BundleDescriptor::line_bundle(NsClass::zero(&m))), WitIndex::Degenerate);
        assert_eq!(wit_index(&BundleDescriptor::line_bundle(ell2((1, 1), (-1, 2)))), WitIndex::Index(1));
    }

    #[test]
    fn positivity_predicates() {
        let (m, eta) = theta(2);
        assert!(is_it0_ample(&BundleDescriptor::line_bundle(eta.clone())));
        assert!(!is_it0_ample(&BundleDescriptor::line_bundle(NsClass::zero(&m))));
        // W_{a,b} with a, b > 0
        for (a, b) in [(1, 1), (3, 1), (2, 5)] {
            let w = BundleDescriptor::new(a * a, eta.scale(&q((a * b) as i64, 1))).unwrap();
            assert!(is_it0_ample(&w));
        }
        assert!(is_gv_nef(&BundleDescriptor::line_bundle(NsClass::zero(&m))));
        assert!(!is_gv_nef(&BundleDescriptor::line_bundle(eta.neg())));
        assert!(!is_gv_nef(&BundleDescriptor::line_bundle(ell2((1, 1), (-1, 2)))));
    }

    #[test]
    fn gv_threshold_examples() {
        for g in 1..=4 {
            let (m, eta) = theta(g);
            assert_eq!(gv_threshold(&BundleDescriptor::line_bundle(eta.clone()), &eta), Ok(g as i64 - 1));
            assert_eq!(gv_threshold(&BundleDescriptor::line_bundle(NsClass::zero(&m)), &eta), Ok(g as i64));
        }
        let (_, t) = theta(2);
        let e = BundleDescriptor::line_bundle(t.scale(&q(1, 3)));
        assert_eq!(gv_threshold(&e, &t.scale(&q(2, 1))), Ok(2));
    }

    #[test]
    fn bounds_examples() {
        let (m, eta) = theta(3);
        let r = check_bounds(&BundleDescriptor::line_bundle(eta.clone()), &eta).unwrap();
        assert!(r.proportional && r.equality_expected && r.gv && r.gv_bound_holds);
        assert_eq!((r.creg, r.m_e), (2, 2));
        assert!(r.is_consistent());

        let r = check_bounds(&BundleDescriptor::new(2, NsClass::zero(&m)).unwrap(), &eta).unwrap();
        assert!(r.gv && r.nef_equality_expected);
        assert_eq!(r.creg, 3);
        assert!(r.is_consistent());

        let gamma = ell2((1, 1), (-1, 2));
        let eta2 = ell2((1, 1), (1, 1));
        let r = check_bounds(&BundleDescriptor::line_bundle(gamma), &eta2).unwrap();
        assert!(!r.proportional && !r.gv);
        assert!(r.bound_holds);
        // slope diag(1, -1/2): creg from max(min(m1, m2) + 1, max(m1, m2)) with
        // m1 = ceil(1 - 1) = 0 and m2 = ceil(1 + 1/2) = 2 gives 2; m_E needs
        // -1/2 + (m - 2) >= 0, i.e. m >= 5/2, so 3.
        assert_eq!((r.creg, r.m_e), (2, 3));
        assert!(r.is_consistent());
    }

    #[test]
    fn twist_and_rank_scaling() {
        let (_, eta) = theta(2);
        let e = BundleDescriptor::new(3, eta.scale(&q(-7, 1))).unwrap();
        let base = creg(&e, &eta).unwrap();
        assert_eq!(creg(&e.twist(&eta, 1).unwrap(), &eta).unwrap(), base - 1);
        assert_eq!(creg(&e.twist(&eta, -2).unwrap(), &eta).unwrap(), base + 2);
        assert_eq!(creg(&e.scaled(4).unwrap(), &eta).unwrap(), base);
    }
}
