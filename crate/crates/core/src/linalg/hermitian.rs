use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::gaussian::Gaussian;
use super::matrix::Matrix;
use super::poly::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::ExactField;

/// Eigenvalue sign counts of a hermitian matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Inertia {
    pub negatives: usize,
    pub zeros: usize,
    pub positives: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.negatives + self.zeros + self.positives
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.zeros == 0
    }

    pub fn is_positive_definite(&self) -> bool {
        self.negatives == 0 && self.zeros == 0
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        self.negatives == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.positives == 0 && self.zeros == 0
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.negatives, self.zeros, self.positives)
    }
}

/// Inertia of a real symmetric matrix from its characteristic polynomial.
///
/// The polynomial has only real roots, so Descartes' rule of signs is exact:
/// after dividing out `x^z` (z = multiplicity of the zero eigenvalue), the
/// sign changes of `p(x)` count positive roots and those of `p(-x)` count
/// negative roots.
pub fn symmetric_inertia<T: ExactField>(m: &Matrix<T>) -> Inertia {
    debug_assert!(m.is_symmetric());
    inertia_from_real_rooted(&m.char_poly())
}

pub(crate) fn inertia_from_real_rooted<T: ExactField>(p: &Polynomial<T>) -> Inertia {
    let n = p.degree().expect("characteristic polynomial is monic");
    let zeros = p.valuation().expect("nonzero polynomial");
    let q = p.shift_down(zeros);
    let positives = q.sign_changes();
    let negatives = q.reflect().sign_changes();
    assert_eq!(
        negatives + zeros + positives,
        n,
        "characteristic polynomial is not real-rooted"
    );
    Inertia { negatives, zeros, positives }
}

/// A hermitian matrix with Gaussian-rational entries: the hermitian form of
/// a Néron–Severi class in a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HermitianMatrix<T> {
    m: Matrix<Gaussian<T>>,
}

impl<T: ExactField> HermitianMatrix<T> {
    /// Validates `entries[j][k] == conj(entries[k][j])`.
    pub fn new(m: Matrix<Gaussian<T>>) -> Result<Self> {
        if m.dim() == 0 {
            return Err(Error::InvalidModel("matrix dimension must be at least 1".into()));
        }
        for r in 0..m.dim() {
            for c in r..m.dim() {
                if *m.get(r, c) != m.get(c, r).conj() {
                    return Err(Error::NotHermitian { row: r, col: c });
                }
            }
        }
        Ok(Self { m })
    }

    pub fn from_rows(rows: Vec<Vec<Gaussian<T>>>) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn from_real(m: Matrix<T>) -> Result<Self> {
        Self::new(m.map(|v| Gaussian::real(v.clone())))
    }

    pub fn from_real_diagonal(diag: Vec<T>) -> Self {
        Self { m: Matrix::from_diagonal(diag.into_iter().map(Gaussian::real).collect()) }
    }

    pub fn identity(g: usize) -> Self {
        Self { m: Matrix::identity(g) }
    }

    pub fn zeros(g: usize) -> Self {
        Self { m: Matrix::zeros(g) }
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn get(&self, r: usize, c: usize) -> &Gaussian<T> {
        self.m.get(r, c)
    }

    pub fn as_matrix(&self) -> &Matrix<Gaussian<T>> {
        &self.m
    }

    pub fn is_real(&self) -> bool {
        self.m.is_real()
    }

    pub fn is_zero(&self) -> bool {
        self.m.rows().all(|row| row.iter().all(Zero::is_zero))
    }

    pub fn scale(&self, k: &T) -> Self {
        Self { m: self.m.map(|v| v.scale(k)) }
    }

    pub fn neg(&self) -> Self {
        Self { m: self.m.map(|v| -v.clone()) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { m: &self.m + &other.m }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { m: &self.m - &other.m }
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, other: &Self, k: &T) -> Self {
        if k.is_zero() {
            return self.clone();
        }
        self.add(&other.scale(k))
    }

    /// `P* H P`, which is hermitian again for any square `P`.
    pub fn congruence(&self, p: &Matrix<Gaussian<T>>) -> Self {
        let inner = &self.m * p;
        Self { m: &p.conj_transpose() * &inner }
    }

    pub fn block_diagonal(blocks: &[Self]) -> Self {
        let ms: Vec<_> = blocks.iter().map(|b| b.m.clone()).collect();
        Self { m: Matrix::block_diagonal(&ms) }
    }

    /// Real entries `(re, im)` flattened row-major, for independence checks.
    pub fn vectorize(&self) -> Vec<T> {
        self.m
            .rows()
            .flat_map(|row| row.iter().flat_map(|v| [v.re.clone(), v.im.clone()]))
            .collect()
    }

    /// The real symmetric `2g × 2g` matrix `[[S, -A], [A, S]]` of
    /// `H = S + iA`; its spectrum is that of `H` with doubled multiplicities.
    pub fn realify(&self) -> Matrix<T> {
        let g = self.dim();
        let mut out = Matrix::zeros(2 * g);
        for r in 0..g {
            for c in 0..g {
                let v = self.get(r, c);
                out.set(r, c, v.re.clone());
                out.set(r + g, c + g, v.re.clone());
                out.set(r, c + g, -v.im.clone());
                out.set(r + g, c, v.im.clone());
            }
        }
        out
    }

    /// `det(xI - H)`, whose coefficients are real. Faddeev–LeVerrier run in
    /// Gaussian arithmetic.
    pub fn char_poly(&self) -> Polynomial<T> {
        if self.is_real() {
            return self.m.map(|v| v.re.clone()).char_poly();
        }
        let n = self.dim();
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut acc = Matrix::<Gaussian<T>>::identity(n);
        for k in 1..=n {
            let prod = &self.m * &acc;
            let c = -prod.trace() / Gaussian::real(T::from_int(k as i64));
            assert!(c.im.is_zero(), "hermitian characteristic polynomial must be real");
            coeffs[n - k] = c.re.clone();
            acc = prod.add_diagonal(&c);
        }
        Polynomial::new(coeffs)
    }

    /// Negative, zero and positive eigenvalue counts of `H`, by Descartes'
    /// rule on the (real-rooted) characteristic polynomial.
    pub fn inertia(&self) -> Inertia {
        inertia_from_real_rooted(&self.char_poly())
    }

    /// The determinant, which is real for a hermitian matrix.
    pub fn det(&self) -> T {
        if self.is_real() {
            return self.m.map(|v| v.re.clone()).det();
        }
        let d = self.m.det();
        assert!(d.im.is_zero(), "determinant of a hermitian matrix must be real");
        d.re
    }

    pub fn sign_of_det(&self) -> i32 {
        let d = self.det();
        if d.is_zero() {
            0
        } else if d.is_negative() {
            -1
        } else {
            1
        }
    }
}

impl<T: ExactField> fmt::Display for HermitianMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (r, row) in self.m.rows().enumerate() {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (c, v) in row.iter().enumerate() {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
