//! Rational Néron–Severi classes over a basis of hermitian generators, with
//! the index function, positivity tests and chamber scanning along segments.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{isolate_real_roots, refine_root, HermitianMatrix, Inertia, IsolatedRoot, Matrix, Polynomial};
use crate::scalar::ExactField;

/// An abelian variety of dimension `g` together with a basis of its rational
/// Néron–Severi space, each generator given by its hermitian form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianModel<T> {
    dim: usize,
    basis: Vec<(String, HermitianMatrix<T>)>,
}

impl<T: ExactField> AbelianModel<T> {
    /// Checks that the basis is nonempty, uniformly sized, uniquely named
    /// and linearly independent over the rationals.
    pub fn new(dim: usize, basis: Vec<(String, HermitianMatrix<T>)>) -> Result<Arc<Self>> {
        if dim == 0 {
            return Err(Error::InvalidModel("dimension must be at least 1".into()));
        }
        if basis.is_empty() {
            return Err(Error::InvalidModel("basis must be nonempty".into()));
        }
        let mut names = HashSet::new();
        for (name, gen) in &basis {
            if gen.dim() != dim {
                return Err(Error::InvalidModel(format!(
                    "generator {name:?} has dimension {}, expected {dim}",
                    gen.dim()
                )));
            }
            if !names.insert(name.as_str()) {
                return Err(Error::InvalidModel(format!("duplicate basis name {name:?}")));
            }
        }
        let rows: Vec<Vec<T>> = basis.iter().map(|(_, h)| h.vectorize()).collect();
        if Matrix::<T>::rank_of_rows(&rows) < basis.len() {
            return Err(Error::InvalidModel("basis generators are linearly dependent".into()));
        }
        Ok(Arc::new(Self { dim, basis }))
    }

    /// A model whose only generator is the `g × g` identity.
    pub fn principally_polarized(g: usize, name: &str) -> Arc<Self> {
        Self::new(g, vec![(name.to_string(), HermitianMatrix::identity(g))])
            .expect("identity generator is a valid basis")
    }

    /// Product of `g` elliptic curves with generators `D_j = diag(0,…,1,…,0)`.
    pub fn elliptic_product(g: usize) -> Arc<Self> {
        let basis = (0..g)
            .map(|j| {
                let mut d = vec![T::zero(); g];
                d[j] = T::one();
                (format!("D{}", j + 1), HermitianMatrix::from_real_diagonal(d))
            })
            .collect();
        Self::new(g, basis).expect("coordinate generators are independent")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(String, HermitianMatrix<T>)] {
        &self.basis
    }

    pub fn generator(&self, k: usize) -> &HermitianMatrix<T> {
        &self.basis[k].1
    }

    /// Replaces every generator `G` by `P* G P`.
    pub fn congruent(&self, p: &Matrix<crate::linalg::Gaussian<T>>) -> Result<Arc<Self>> {
        Self::new(
            self.dim,
            self.basis.iter().map(|(n, h)| (n.clone(), h.congruence(p))).collect(),
        )
    }
}

/// A rational class `Σ coeffs[j] · generator[j]`.
#[derive(Clone, Debug)]
pub struct NsClass<T> {
    model: Arc<AbelianModel<T>>,
    coeffs: Vec<T>,
}

impl<T: ExactField> PartialEq for NsClass<T> {
    fn eq(&self, other: &Self) -> bool {
        same_model(&self.model, &other.model) && self.coeffs == other.coeffs
    }
}

impl<T: ExactField> Eq for NsClass<T> {}

fn same_model<T: ExactField>(a: &Arc<AbelianModel<T>>, b: &Arc<AbelianModel<T>>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl<T: ExactField> NsClass<T> {
    pub fn new(model: &Arc<AbelianModel<T>>, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != model.rank() {
            return Err(Error::DimensionMismatch { expected: model.rank(), found: coeffs.len() });
        }
        Ok(Self { model: Arc::clone(model), coeffs })
    }

    pub fn zero(model: &Arc<AbelianModel<T>>) -> Self {
        Self { model: Arc::clone(model), coeffs: vec![T::zero(); model.rank()] }
    }

    /// The `k`-th basis generator as a class.
    pub fn generator(model: &Arc<AbelianModel<T>>, k: usize) -> Self {
        let mut c = Self::zero(model);
        c.coeffs[k] = T::one();
        c
    }

    pub fn model(&self) -> &Arc<AbelianModel<T>> {
        &self.model
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.model.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if same_model(&self.model, &other.model) {
            Ok(())
        } else {
            Err(Error::ModelMismatch)
        }
    }

    pub fn scale(&self, k: &T) -> Self {
        Self {
            model: Arc::clone(&self.model),
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, &T::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, &-T::one())
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, other: &Self, k: &T) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            model: Arc::clone(&self.model),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone() * k.clone())
                .collect(),
        })
    }

    /// Whether `self` is a rational multiple of `other`, decided by the rank
    /// of the two coefficient vectors.
    pub fn is_proportional_to(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        let rows = vec![self.coeffs.clone(), other.coeffs.clone()];
        Ok(Matrix::<T>::rank_of_rows(&rows) <= 1)
    }

    /// The hermitian form `Σ coeffs[j] · generator[j]`.
    pub fn to_matrix(&self) -> HermitianMatrix<T> {
        self.coeffs
            .iter()
            .zip(&self.model.basis)
            .fold(HermitianMatrix::zeros(self.model.dim), |acc, (c, (_, g))| acc.add_scaled(g, c))
    }

    pub fn inertia(&self) -> Inertia {
        self.to_matrix().inertia()
    }

    /// `γ^{·g} ≠ 0`, i.e. the hermitian form is invertible.
    pub fn is_nondegenerate(&self) -> bool {
        !self.to_matrix().det().is_zero()
    }

    /// The index ι: number of negative eigenvalues of a nondegenerate class.
    pub fn index(&self) -> Result<usize> {
        index_of_matrix(&self.to_matrix())
    }

    pub fn positivity(&self) -> Positivity {
        Positivity::of_inertia(&self.inertia())
    }
}

impl<T: ExactField> fmt::Display for NsClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, (name, _)) in self.coeffs.iter().zip(&self.model.basis) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*{name}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub(crate) fn index_of_matrix<T: ExactField>(h: &HermitianMatrix<T>) -> Result<usize> {
    let inertia = h.inertia();
    if inertia.is_nondegenerate() {
        Ok(inertia.negatives)
    } else {
        Err(Error::DegenerateIndex)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Positivity {
    Ample,
    NefNotAmple,
    Other,
}

impl Positivity {
    pub fn of_inertia(i: &Inertia) -> Self {
        if i.is_positive_definite() {
            Positivity::Ample
        } else if i.is_positive_semidefinite() {
            Positivity::NefNotAmple
        } else {
            Positivity::Other
        }
    }

    pub fn is_nef(self) -> bool {
        matches!(self, Positivity::Ample | Positivity::NefNotAmple)
    }
}

impl fmt::Display for Positivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Positivity::Ample => "ample",
            Positivity::NefNotAmple => "nef_not_ample",
            Positivity::Other => "other",
        })
    }
}

/// One open parameter interval between consecutive critical parameters,
/// with the constant index on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberInterval<T> {
    pub lo: T,
    pub hi: T,
    pub sample: T,
    pub index: usize,
}

/// Chamber structure of the segment `(1 - t)·start + t·end`, `t ∈ (0, 1)`.
#[derive(Clone, Debug)]
pub struct ChamberReport<T> {
    pub start: NsClass<T>,
    pub end: NsClass<T>,
    /// `det((1 - t) H_start + t H_end)` as a polynomial in `t`.
    pub det_polynomial: Polynomial<T>,
    pub critical_params: Vec<IsolatedRoot<T>>,
    pub interval_indices: Vec<ChamberInterval<T>>,
}

impl<T: ExactField> ChamberReport<T> {
    pub fn has_critical_points(&self) -> bool {
        !self.critical_params.is_empty()
    }
}

/// `det(A + t·D)` as a polynomial in `t`, by interpolation at `t = 0..=g`.
pub fn det_along<T: ExactField>(a: &HermitianMatrix<T>, d: &HermitianMatrix<T>) -> Polynomial<T> {
    let g = a.dim();
    let points: Vec<(T, T)> = (0..=g as i64)
        .map(|k| {
            let t = T::from_int(k);
            let det = a.add_scaled(d, &t).det();
            (t, det)
        })
        .collect();
    Polynomial::interpolate(&points)
}

/// Maps the chamber structure of the segment from `a` to `b`: the parameters
/// where the class degenerates and the index on each open piece.
pub fn scan_segment<T: ExactField>(a: &NsClass<T>, b: &NsClass<T>) -> Result<ChamberReport<T>> {
    a.check_same(b)?;
    let ha = a.to_matrix();
    let hd = b.to_matrix().sub(&ha);
    let det_polynomial = det_along(&ha, &hd);
    if det_polynomial.is_zero() {
        return Err(Error::DegenerateSegment);
    }
    let mut crit = isolate_real_roots(&det_polynomial, &T::zero(), &T::one())?;

    // Shrink brackets until each gap between consecutive roots (and the
    // segment ends) has nonempty interior.
    let n = crit.len();
    for k in 0..=n {
        loop {
            let left = if k == 0 { T::zero() } else { crit[k - 1].interval.hi.clone() };
            let right = if k == n { T::one() } else { crit[k].interval.lo.clone() };
            if left < right {
                break;
            }
            let mut progressed = false;
            if k > 0 && !crit[k - 1].interval.is_exact() {
                crit[k - 1].interval = refine_root(&det_polynomial, &crit[k - 1].interval);
                progressed = true;
            }
            if k < n && !crit[k].interval.is_exact() {
                crit[k].interval = refine_root(&det_polynomial, &crit[k].interval);
                progressed = true;
            }
            assert!(progressed, "distinct exact roots cannot touch");
        }
    }

    let mut interval_indices = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let lo = if k == 0 { T::zero() } else { crit[k - 1].interval.hi.clone() };
        let hi = if k == n { T::one() } else { crit[k].interval.lo.clone() };
        let sample = T::midpoint(&lo, &hi);
        let h = ha.add_scaled(&hd, &sample);
        let index = index_of_matrix(&h).expect("sample point avoids every root of the determinant");
        interval_indices.push(ChamberInterval { lo, hi, sample, index });
    }

    Ok(ChamberReport {
        start: a.clone(),
        end: b.clone(),
        det_polynomial,
        critical_params: crit,
        interval_indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Gaussian;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(p: i64, d: i64) -> Q {
        Q::from_frac(p, d)
    }

    fn ell2() -> Arc<AbelianModel<Q>> {
        AbelianModel::elliptic_product(2)
    }

    fn class(model: &Arc<AbelianModel<Q>>, c: &[(i64, i64)]) -> NsClass<Q> {
        NsClass::new(model, c.iter().map(|&(p, d)| q(p, d)).collect()).unwrap()
    }

    #[test]
    fn model_validation() {
        let h = HermitianMatrix::<Q>::identity(2);
        assert!(AbelianModel::<Q>::new(2, vec![]).is_err());
        assert!(AbelianModel::new(2, vec![("a".into(), h.clone()), ("a".into(), h.scale(&q(2, 1)))]).is_err());
        assert!(AbelianModel::new(2, vec![("a".into(), h.clone()), ("b".into(), h.scale(&q(2, 1)))]).is_err());
        assert!(AbelianModel::new(3, vec![("a".into(), h.clone())]).is_err());
        assert!(AbelianModel::new(2, vec![("a".into(), h)]).is_ok());
    }

    #[test]
    fn complex_generator_is_independent_of_real_ones() {
        let i = Gaussian::<Q>::i();
        let z = Gaussian::<Q>::real(q(0, 1));
        let c = HermitianMatrix::from_rows(vec![vec![z.clone(), i.clone()], vec![-i, z]]).unwrap();
        let m = AbelianModel::new(
            2,
            vec![
                ("D1".into(), HermitianMatrix::from_real_diagonal(vec![q(1, 1), q(0, 1)])),
                ("D2".into(), HermitianMatrix::from_real_diagonal(vec![q(0, 1), q(1, 1)])),
                ("C".into(), c),
            ],
        )
        .unwrap();
        let x = class(&m, &[(1, 1), (1, 1), (1, 1)]);
        // [[1, i], [-i, 1]] has eigenvalues {0, 2}
        assert!(!x.is_nondegenerate());
        assert_eq!(x.positivity(), Positivity::NefNotAmple);
    }

    #[test]
    fn to_matrix_examples() {
        let m = ell2();
        assert!(NsClass::zero(&m).to_matrix().is_zero());
        let p = AbelianModel::<Q>::principally_polarized(3, "Theta");
        assert_eq!(NsClass::generator(&p, 0).to_matrix(), HermitianMatrix::identity(3));
        assert_eq!(
            class(&m, &[(3, 2), (-5, 1)]).to_matrix(),
            HermitianMatrix::from_real_diagonal(vec![q(3, 2), q(-5, 1)])
        );
    }

    #[test]
    fn index_and_positivity_examples() {
        let m = ell2();
        let ample = class(&m, &[(1, 1), (1, 1)]);
        let mixed = class(&m, &[(1, 1), (-1, 2)]);
        assert!(ample.is_nondegenerate());
        assert!(!NsClass::zero(&m).is_nondegenerate());
        assert!(mixed.is_nondegenerate());
        assert_eq!(ample.index(), Ok(0));
        assert_eq!(ample.neg().index(), Ok(2));
        assert_eq!(mixed.index(), Ok(1));
        assert_eq!(NsClass::zero(&m).index(), Err(Error::DegenerateIndex));
        assert_eq!(ample.positivity(), Positivity::Ample);
        assert_eq!(NsClass::zero(&m).positivity(), Positivity::NefNotAmple);
        assert_eq!(mixed.positivity(), Positivity::Other);
    }

    #[test]
    fn proportionality() {
        let m = ell2();
        assert!(class(&m, &[(2, 3), (2, 3)]).is_proportional_to(&class(&m, &[(1, 1), (1, 1)])).unwrap());
        assert!(NsClass::zero(&m).is_proportional_to(&class(&m, &[(1, 1), (1, 1)])).unwrap());
        assert!(!class(&m, &[(1, 1), (2, 1)]).is_proportional_to(&class(&m, &[(1, 1), (1, 1)])).unwrap());
    }

    #[test]
    fn model_mismatch_is_an_error() {
        let a = NsClass::<Q>::zero(&ell2());
        let b = NsClass::<Q>::zero(&AbelianModel::principally_polarized(2, "T"));
        assert_eq!(a.add(&b), Err(Error::ModelMismatch));
        assert!(matches!(scan_segment(&a, &b), Err(Error::ModelMismatch)));
    }

    #[test]
    fn scan_constant_segment() {
        let m = ell2();
        let eta = class(&m, &[(1, 1), (1, 1)]);
        let r = scan_segment(&eta, &eta).unwrap();
        assert!(r.critical_params.is_empty());
        assert_eq!(r.interval_indices.len(), 1);
        assert_eq!(r.interval_indices[0].index, 0);
    }

    #[test]
    fn scan_through_origin_flips_index() {
        for g in 1..=3 {
            let m = AbelianModel::<Q>::principally_polarized(g, "T");
            let eta = NsClass::generator(&m, 0).scale(&q(3, 2));
            let r = scan_segment(&eta, &eta.neg()).unwrap();
            assert_eq!(r.critical_params.len(), 1);
            assert_eq!(r.critical_params[0].interval, crate::linalg::RootInterval::exact(q(1, 2)));
            assert_eq!(r.critical_params[0].multiplicity, g);
            let idx: Vec<_> = r.interval_indices.iter().map(|c| c.index).collect();
            assert_eq!(idx, vec![0, g]);
        }
    }

    #[test]
    fn scan_elliptic_product_segment() {
        let m = ell2();
        let r = scan_segment(&class(&m, &[(1, 1), (-1, 1)]), &class(&m, &[(1, 1), (1, 1)])).unwrap();
        assert_eq!(r.critical_params.len(), 1);
        assert!(r.critical_params[0].interval.contains(&q(1, 2)));
        let idx: Vec<_> = r.interval_indices.iter().map(|c| c.index).collect();
        assert_eq!(idx, vec![1, 0]);
    }

    #[test]
    fn scan_degenerate_locus() {
        let m = ell2();
        let a = class(&m, &[(1, 1), (0, 1)]);
        let b = class(&m, &[(-2, 1), (0, 1)]);
        assert!(matches!(scan_segment(&a, &b), Err(Error::DegenerateSegment)));
    }

    #[test]
    fn scan_with_irrational_crossings() {
        // det of [[1-2t, t], [t, 1-2t]] = (1-2t)^2 - t^2 = (1-3t)(1-t):
        // a crossing at t = 1/3 only (t = 1 is the endpoint).
        let m = AbelianModel::new(
            2,
            vec![
                ("A".into(), HermitianMatrix::from_real_diagonal(vec![q(1, 1), q(1, 1)])),
                (
                    "B".into(),
                    HermitianMatrix::from_real(
                        Matrix::from_rows(vec![vec![q(-1, 1), q(1, 1)], vec![q(1, 1), q(-1, 1)]]).unwrap(),
                    )
                    .unwrap(),
                ),
            ],
        )
        .unwrap();
        let a = class(&m, &[(1, 1), (0, 1)]);
        let b = class(&m, &[(0, 1), (1, 1)]);
        let r = scan_segment(&a, &b).unwrap();
        assert_eq!(r.critical_params.len(), 1);
        assert!(r.critical_params[0].interval.contains(&q(1, 3)));
        let idx: Vec<_> = r.interval_indices.iter().map(|c| c.index).collect();
        assert_eq!(idx, vec![0, 1]);
    }
}
