//! The piecewise-constant function
//!
//! ```text
//! rho_eta(gamma) = min { m : for all i in 1..=g,
//!                        gamma + (m - i) eta is degenerate or has index != i }
//! ```
//!
//! evaluated with certified search bounds. Along the ray `gamma + t·eta`
//! (with `eta` ample) negative definiteness is downward closed and positive
//! definiteness is upward closed, so both witnesses are found by doubling
//! and then tightened by bisection. Between them the predicate is scanned
//! linearly: nothing guarantees that the set of admissible `m` is upward
//! closed, so bisection on the predicate itself is not used.

use std::collections::HashMap;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{HermitianMatrix, Inertia};
use crate::nsmodel::{NsClass, Positivity};
use crate::scalar::ExactField;

pub const DEFAULT_SCAN_CAP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RhoOptions {
    /// Maximum number of predicate probes (doubling, bisection and scan
    /// steps combined).
    pub scan_cap: u64,
}

impl Default for RhoOptions {
    fn default() -> Self {
        Self { scan_cap: DEFAULT_SCAN_CAP }
    }
}

/// Status of the class `gamma + (m - i)·eta` for one `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShiftStatus {
    pub i: usize,
    pub shift: i64,
    /// `None` when the class is degenerate.
    pub index: Option<usize>,
}

impl ShiftStatus {
    /// The defining condition: degenerate, or index different from `i`.
    pub fn satisfied(&self) -> bool {
        self.index != Some(self.i)
    }
}

impl Serialize for ShiftStatus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ShiftStatus", 4)?;
        st.serialize_field("i", &self.i)?;
        st.serialize_field("shift", &self.shift)?;
        match self.index {
            Some(k) => st.serialize_field("index", &k)?,
            None => st.serialize_field("index", "degenerate")?,
        }
        st.serialize_field("satisfied", &self.satisfied())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredicateReport {
    pub m: i64,
    pub holds: bool,
    pub per_i: Vec<ShiftStatus>,
}

impl PredicateReport {
    fn new(m: i64, per_i: Vec<ShiftStatus>) -> Self {
        let holds = per_i.iter().all(ShiftStatus::satisfied);
        Self { m, holds, per_i }
    }

    /// The first `i` whose class has index exactly `i`.
    pub fn first_violation(&self) -> Option<usize> {
        self.per_i.iter().find(|s| !s.satisfied()).map(|s| s.i)
    }
}

/// The value of `rho_eta(gamma)` with the evidence that pins it down.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoCertificate {
    pub value: i64,
    /// `gamma + (lower_witness - g)·eta` is negative definite, so the
    /// predicate fails (at `i = g`) for every `m <= lower_witness`.
    pub lower_witness: i64,
    /// `gamma + (upper_witness - g)·eta` is positive definite, so the
    /// predicate holds for every `m >= upper_witness`.
    pub upper_witness: i64,
    pub per_i_report: Vec<ShiftStatus>,
    /// The predicate at `value - 1`, which fails.
    pub report_below: Vec<ShiftStatus>,
}

/// Evaluates classes `gamma + t·eta` for integer `t`, caching inertia.
pub(crate) struct Ray<'a, T> {
    gamma: &'a HermitianMatrix<T>,
    eta: &'a HermitianMatrix<T>,
    cache: HashMap<i64, Inertia>,
    probes: u64,
    cap: u64,
}

impl<'a, T: ExactField> Ray<'a, T> {
    pub(crate) fn new(gamma: &'a HermitianMatrix<T>, eta: &'a HermitianMatrix<T>, cap: u64) -> Self {
        Self { gamma, eta, cache: HashMap::new(), probes: 0, cap }
    }

    pub(crate) fn g(&self) -> usize {
        self.gamma.dim()
    }

    fn tick(&mut self) -> Result<()> {
        self.probes += 1;
        if self.probes > self.cap {
            Err(Error::SearchBoundExceeded(self.cap))
        } else {
            Ok(())
        }
    }

    pub(crate) fn inertia(&mut self, t: i64) -> Inertia {
        if let Some(i) = self.cache.get(&t) {
            return *i;
        }
        let i = self.gamma.add_scaled(self.eta, &T::from_int(t)).inertia();
        self.cache.insert(t, i);
        i
    }

    pub(crate) fn predicate(&mut self, m: i64) -> Result<PredicateReport> {
        let g = self.g();
        let per_i = (1..=g)
            .map(|i| {
                let shift = m.checked_sub(i as i64).ok_or(Error::Overflow("shift"))?;
                let inertia = self.inertia(shift);
                let index = inertia.is_nondegenerate().then_some(inertia.negatives);
                Ok(ShiftStatus { i, shift, index })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PredicateReport::new(m, per_i))
    }

    /// Smallest `m` with `pred(gamma + (m - g)·eta)` where `pred` is upward
    /// closed along the ray; doubles from `m = g` and then bisects.
    pub(crate) fn first_upward(&mut self, pred: impl Fn(&Inertia) -> bool) -> Result<i64> {
        let g = self.g() as i64;
        let mut hi = g;
        let mut lo = None;
        loop {
            self.tick()?;
            if pred(&self.inertia(hi - g)) {
                break;
            }
            lo = Some(hi);
            hi = step(hi, g, 1)?;
        }
        let mut lo = match lo {
            Some(lo) => lo,
            None => {
                // `hi = g` already satisfies; walk down until it fails.
                let mut cand = g;
                loop {
                    self.tick()?;
                    let next = step(cand, g, -1)?;
                    if !pred(&self.inertia(next - g)) {
                        break next;
                    }
                    hi = next;
                    cand = next;
                }
            }
        };
        while hi - lo > 1 {
            self.tick()?;
            let mid = lo + (hi - lo) / 2;
            if pred(&self.inertia(mid - g)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// Largest `m` with `pred(gamma + (m - g)·eta)` where `pred` is downward
    /// closed along the ray.
    pub(crate) fn last_downward(&mut self, pred: impl Fn(&Inertia) -> bool) -> Result<i64> {
        // m satisfies pred  <=>  not (m is in the complement), and the
        // complement is upward closed.
        Ok(self.first_upward(|i| !pred(i))? - 1)
    }
}

/// Doubling step `m <- ±(2|m| + g)`.
fn step(m: i64, g: i64, dir: i64) -> Result<i64> {
    m.checked_abs()
        .and_then(|a| a.checked_mul(2))
        .and_then(|a| a.checked_add(g))
        .map(|a| dir * a)
        .ok_or(Error::Overflow("search witness"))
}

fn check_pair<T: ExactField>(gamma: &NsClass<T>, eta: &NsClass<T>) -> Result<(HermitianMatrix<T>, HermitianMatrix<T>)> {
    gamma.check_same(eta)?;
    let he = eta.to_matrix();
    if Positivity::of_inertia(&he.inertia()) != Positivity::Ample {
        return Err(Error::NotAmple);
    }
    Ok((gamma.to_matrix(), he))
}

/// Evaluates the defining predicate of `rho_eta` at `m`.
pub fn rho_predicate<T: ExactField>(gamma: &NsClass<T>, eta: &NsClass<T>, m: i64) -> Result<PredicateReport> {
    let (hg, he) = check_pair(gamma, eta)?;
    Ray::new(&hg, &he, u64::MAX).predicate(m)
}

pub fn rho<T: ExactField>(gamma: &NsClass<T>, eta: &NsClass<T>) -> Result<RhoCertificate> {
    rho_with(gamma, eta, &RhoOptions::default())
}

pub fn rho_with<T: ExactField>(gamma: &NsClass<T>, eta: &NsClass<T>, opts: &RhoOptions) -> Result<RhoCertificate> {
    let (hg, he) = check_pair(gamma, eta)?;
    rho_of_matrices(&hg, &he, opts)
}

/// `rho_eta(gamma)` on hermitian forms directly; `eta` must be positive
/// definite (not rechecked).
pub fn rho_of_matrices<T: ExactField>(
    gamma: &HermitianMatrix<T>,
    eta: &HermitianMatrix<T>,
    opts: &RhoOptions,
) -> Result<RhoCertificate> {
    let mut ray = Ray::new(gamma, eta, opts.scan_cap);
    let upper_witness = ray.first_upward(Inertia::is_positive_definite)?;
    let lower_witness = ray.last_downward(Inertia::is_negative_definite)?;
    debug_assert!(lower_witness < upper_witness);

    let mut below = ray.predicate(lower_witness)?;
    debug_assert!(!below.holds);
    let mut m = lower_witness + 1;
    loop {
        ray.tick()?;
        let report = ray.predicate(m)?;
        if report.holds {
            return Ok(RhoCertificate {
                value: m,
                lower_witness,
                upper_witness,
                per_i_report: report.per_i,
                report_below: below.per_i,
            });
        }
        assert!(m < upper_witness, "predicate must hold at the positive-definite witness");
        below = report;
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nsmodel::AbelianModel;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(p: i64, d: i64) -> Q {
        Q::from_frac(p, d)
    }

    fn theta(g: usize) -> (std::sync::Arc<AbelianModel<Q>>, NsClass<Q>) {
        let m = AbelianModel::principally_polarized(g, "Theta");
        let t = NsClass::generator(&m, 0);
        (m, t)
    }

    #[test]
    fn predicate_examples() {
        let (_, eta) = theta(3);
        let r = rho_predicate(&eta, &eta, 2).unwrap();
        assert!(r.holds);
        let idx: Vec<_> = r.per_i.iter().map(|s| s.index).collect();
        assert_eq!(idx, vec![Some(0), Some(0), None]);

        let r = rho_predicate(&eta, &eta, 1).unwrap();
        assert!(!r.holds);
        assert_eq!(r.first_violation(), Some(3));

        for g in 1..=4 {
            let (m, eta) = theta(g);
            let r = rho_predicate(&NsClass::zero(&m), &eta, g as i64).unwrap();
            assert!(r.holds);
        }
    }

    #[test]
    fn rho_of_polarization_is_g_minus_one() {
        for g in 1..=5 {
            let (_, eta) = theta(g);
            for k in [1, 2, 7] {
                let e = eta.scale(&q(k, 1));
                assert_eq!(rho(&e, &e).unwrap().value, g as i64 - 1);
            }
        }
    }

    #[test]
    fn rho_of_zero_is_g() {
        for g in 1..=5 {
            let (m, eta) = theta(g);
            assert_eq!(rho(&NsClass::zero(&m), &eta).unwrap().value, g as i64);
        }
    }

    #[test]
    fn jacobian_example() {
        let (_, t) = theta(2);
        let c = rho(&t.scale(&q(1, 3)), &t.scale(&q(2, 1))).unwrap();
        assert_eq!(c.value, 2);
    }

    #[test]
    fn elliptic_product_example() {
        let m = AbelianModel::<Q>::elliptic_product(2);
        let gamma = NsClass::new(&m, vec![q(0, 1), q(-3, 2)]).unwrap();
        let eta = NsClass::new(&m, vec![q(1, 1), q(1, 1)]).unwrap();
        let c = rho(&gamma, &eta).unwrap();
        assert_eq!(c.value, 3);
        assert!(c.lower_witness < c.value && c.value <= c.upper_witness);
        assert!(c.per_i_report.iter().all(ShiftStatus::satisfied));
        assert!(c.report_below.iter().any(|s| !s.satisfied()));
    }

    #[test]
    fn requires_ample_eta() {
        let (m, eta) = theta(2);
        assert_eq!(rho(&eta, &NsClass::zero(&m)), Err(Error::NotAmple));
        assert_eq!(rho(&eta, &eta.neg()), Err(Error::NotAmple));
        assert!(matches!(rho_predicate(&eta, &eta.neg(), 0), Err(Error::NotAmple)));
    }

    #[test]
    fn scan_cap_is_enforced() {
        let (_, eta) = theta(2);
        let big = eta.scale(&q(100_000, 1));
        let err = rho_with(&big, &eta, &RhoOptions { scan_cap: 10 }).unwrap_err();
        assert_eq!(err, Error::SearchBoundExceeded(10));
    }

    #[test]
    fn witnesses_are_tight() {
        let (_, eta) = theta(2);
        let gamma = eta.scale(&q(7, 2));
        let c = rho(&gamma, &eta).unwrap();
        // 7/2 + (m - 2) > 0  <=>  m >= -1;  7/2 + (m - 2) < 0  <=>  m <= -2
        assert_eq!(c.upper_witness, -1);
        assert_eq!(c.lower_witness, -2);
        assert_eq!(c.value, -1);
    }

    #[test]
    fn shift_status_json() {
        let s = ShiftStatus { i: 2, shift: -1, index: None };
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"i":2,"shift":-1,"index":"degenerate","satisfied":true}"#
        );
    }
}
