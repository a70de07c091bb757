use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gaussian::Gaussian;
use super::poly::Polynomial;
use crate::error::{Error, Result};
use crate::scalar::ExactField;

/// Commutative ring elements usable as matrix entries.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<R> Ring for R where
    R: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = R>
        + Sub<Output = R>
        + Mul<Output = R>
        + Neg<Output = R>
{
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<R> {
    n: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![R::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for k in 0..n {
            m.data[k * n + k] = R::one();
        }
        m
    }

    pub fn from_diagonal(diag: Vec<R>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (k, d) in diag.into_iter().enumerate() {
            m.data[k * n + k] = d;
        }
        m
    }

    /// Builds a matrix from rows; every row must have as many entries as
    /// there are rows.
    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &R {
        &self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: R) {
        self.data[r * self.n + c] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[R]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].clone();
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|r| (r + 1..self.n).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn trace(&self) -> R {
        (0..self.n).fold(R::zero(), |acc, k| acc + self.get(k, k).clone())
    }

    pub fn scale(&self, k: &R) -> Self {
        self.map(|v| v.clone() * k.clone())
    }

    pub fn add_diagonal(&self, k: &R) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] = out.data[i * self.n + i].clone() + k.clone();
        }
        out
    }

    /// Block-diagonal sum of the given square blocks.
    pub fn block_diagonal(blocks: &[Self]) -> Self {
        let n = blocks.iter().map(|b| b.n).sum();
        let mut out = Self::zeros(n);
        let mut off = 0;
        for b in blocks {
            for r in 0..b.n {
                for c in 0..b.n {
                    out.set(off + r, off + c, b.get(r, c).clone());
                }
            }
            off += b.n;
        }
        out
    }

    fn assert_same_dim(&self, other: &Self) {
        assert_eq!(self.n, other.n, "matrix dimension mismatch");
    }
}

impl<R: Ring + Div<Output = R>> Matrix<R> {
    /// Determinant by Gaussian elimination over a field, pivoting on the
    /// first nonzero entry of each column.
    pub fn det(&self) -> R {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = R::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return R::zero();
            };
            if p != col {
                for c in 0..n {
                    a.swap(p * n + c, col * n + c);
                }
                det = -det;
            }
            let pivot = a[col * n + col].clone();
            det = det * pivot.clone();
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone() / pivot.clone();
                for c in col..n {
                    a[r * n + c] = a[r * n + c].clone() - f.clone() * a[col * n + c].clone();
                }
            }
        }
        det
    }

    /// Row rank of a rectangular matrix given as rows.
    pub fn rank_of_rows(rows: &[Vec<R>]) -> usize {
        let mut rows: Vec<Vec<R>> = rows.to_vec();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for col in 0..ncols {
            let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank][col].clone();
            for r in rank + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let f = rows[r][col].clone() / pivot.clone();
                for c in col..ncols {
                    let v = rows[r][c].clone() - f.clone() * rows[rank][c].clone();
                    rows[r][c] = v;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl<T: ExactField> Matrix<T> {
    /// `det(xI - M)` by the Faddeev–LeVerrier recurrence over the field.
    ///
    /// With `N_1 = I` and `N_{k+1} = M N_k + c_{n-k} I`, the coefficients are
    /// `c_{n-k} = -tr(M N_k) / k`.
    pub fn char_poly(&self) -> Polynomial<T> {
        let n = self.n;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let mut acc = Self::identity(n);
        for k in 1..=n {
            let prod = self * &acc;
            let c = -prod.trace() / T::from_int(k as i64);
            coeffs[n - k] = c.clone();
            acc = prod.add_diagonal(&c);
        }
        Polynomial::new(coeffs)
    }
}

impl<T: ExactField> Matrix<Gaussian<T>> {
    pub fn conj_transpose(&self) -> Self {
        self.transpose().map(|v| v.conj())
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|v| v.is_real())
    }
}

impl<'a, R: Ring> Mul<&'a Matrix<R>> for &'a Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: &'a Matrix<R>) -> Matrix<R> {
        self.assert_same_dim(rhs);
        let n = self.n;
        let mut out: Matrix<R> = Matrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = &self.data[r * n + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = &rhs.data[k * n + c];
                    if b.is_zero() {
                        continue;
                    }
                    out.data[r * n + c] = out.data[r * n + c].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }
}

impl<'a, R: Ring> Add<&'a Matrix<R>> for &'a Matrix<R> {
    type Output = Matrix<R>;
    fn add(self, rhs: &'a Matrix<R>) -> Matrix<R> {
        self.assert_same_dim(rhs);
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<'a, R: Ring> Sub<&'a Matrix<R>> for &'a Matrix<R> {
    type Output = Matrix<R>;
    fn sub(self, rhs: &'a Matrix<R>) -> Matrix<R> {
        self.assert_same_dim(rhs);
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Rational64};

    type M = Matrix<BigRational>;

    fn m(rows: &[&[i64]]) -> M {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigRational::from_int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(m(&[&[0]]).char_poly(), Polynomial::from_ints(&[0, 1]));
        assert_eq!(m(&[&[2, 0], &[0, 3]]).char_poly(), Polynomial::from_ints(&[6, -5, 1]));
        // cofactor expansion: x^2 - 1
        assert_eq!(m(&[&[0, 1], &[1, 0]]).char_poly(), Polynomial::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn char_poly_matches_cofactor_on_3x3() {
        // tr = 4, principal 2-minors sum to (-1-4) + (4-0) + (-4-9) = -14,
        // det = 1(-4-9) - 2(8-0) = -29, so det(xI - M) = x^3 - 4x^2 - 14x + 29.
        let a = m(&[&[1, 2, 0], &[2, -1, 3], &[0, 3, 4]]);
        assert_eq!(a.char_poly(), Polynomial::from_ints(&[29, -14, -4, 1]));
        assert_eq!(a.det(), BigRational::from_int(-29));
    }

    #[test]
    fn generic_over_machine_rationals() {
        let a: Matrix<Rational64> = Matrix::from_diagonal(vec![
            Rational64::from_frac(1, 2),
            Rational64::from_int(-3),
        ]);
        assert_eq!(a.det(), Rational64::from_frac(-3, 2));
        assert_eq!(a.char_poly().coeffs()[0], Rational64::from_frac(-3, 2));
    }

    #[test]
    fn det_with_row_swap() {
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), BigRational::from_int(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(), BigRational::from_int(0));
    }

    #[test]
    fn rank_of_rows() {
        let rows = vec![
            vec![BigRational::from_int(1), BigRational::from_int(2)],
            vec![BigRational::from_int(2), BigRational::from_int(4)],
        ];
        assert_eq!(M::rank_of_rows(&rows), 1);
    }

    #[test]
    fn block_diagonal_char_poly_factors() {
        let a = m(&[&[1, 2], &[2, -3]]);
        let b = m(&[&[5]]);
        let bd = Matrix::block_diagonal(&[a.clone(), b.clone()]);
        assert_eq!(bd.char_poly(), a.char_poly() * b.char_poly());
    }
}
