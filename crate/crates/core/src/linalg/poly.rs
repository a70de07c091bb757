use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};



use crate::scalar::ExactField;

/// Univariate polynomial with coefficients stored lowest degree first.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial is
/// the empty coefficient list and equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: ExactField> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `x - root`.
    pub fn linear(root: T) -> Self {
        Self::new(vec![-root, T::one()])
    }

    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a T>) -> Self {
        roots
            .into_iter()
            .fold(Self::constant(T::one()), |acc, r| acc * Self::linear(r.clone()))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// Multiplicity of `0` as a root. The zero polynomial has no defined
    /// valuation.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// Drops the factor `x^k`, assuming it divides the polynomial.
    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Number of sign changes in the coefficient sequence, zeros skipped.
    pub fn sign_changes(&self) -> usize {
        count_sign_changes(self.coeffs.iter())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => {
                let inv = T::one() / lc.clone();
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone() / lc.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// The product of the distinct irreducible factors, made monic.
    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Yun's square-free decomposition: returns monic, pairwise coprime,
    /// square-free `q_1, q_2, ...` with `self = c · Π q_i^i`. Entry `k` of the
    /// result is `q_{k+1}`; constant factors are kept so indices line up.
    pub fn square_free_decomposition(&self) -> Vec<Self> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = c - b.derivative();
        let mut out = Vec::new();
        loop {
            let a = b.gcd(&d);
            out.push(a.clone());
            b = b.div_rem(&a).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_rem(&a).0;
            d = c - b.derivative();
        }
        while out.last().is_some_and(|q| q.degree() == Some(0)) {
            out.pop();
        }
        out
    }

    /// Interpolates the unique polynomial of degree `< points.len()` through
    /// the given `(x, y)` pairs. The `x` values must be distinct.
    pub fn interpolate(points: &[(T, T)]) -> Self {
        let mut acc = Self::zero();
        for (j, (xj, yj)) in points.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let mut basis = Self::constant(T::one());
            let mut denom = T::one();
            for (k, (xk, _)) in points.iter().enumerate() {
                if k != j {
                    basis = basis * Self::linear(xk.clone());
                    denom = denom * (xj.clone() - xk.clone());
                }
            }
            acc = acc + basis.scale(&(yj.clone() / denom));
        }
        acc
    }
}

pub(crate) fn count_sign_changes<'a, T: ExactField>(values: impl Iterator<Item = &'a T>) -> usize {
    let mut last: Option<bool> = None;
    let mut changes = 0;
    for v in values {
        if v.is_zero() {
            continue;
        }
        let neg = v.is_negative();
        if last.is_some_and(|l| l != neg) {
            changes += 1;
        }
        last = Some(neg);
    }
    changes
}

impl<T: ExactField> Add for Polynomial<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: ExactField> Sub for Polynomial<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: ExactField> Neg for Polynomial<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: ExactField> Mul for Polynomial<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl<T: ExactField> fmt::Display for Polynomial<T> {
    /// Renders like `x^2 - 5x + 6`, highest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "x")?,
                1 => write!(f, "{mag}x")?,
                _ if unit => write!(f, "x^{k}")?,
                _ => write!(f, "{mag}x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type P = Polynomial<BigRational>;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::from_frac(p, d)
    }

    #[test]
    fn trims_and_displays() {
        let p = P::from_ints(&[6, -5, 1, 0, 0]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.to_string(), "x^2 - 5x + 6");
        assert_eq!(P::from_ints(&[0, 0]).degree(), None);
        assert_eq!(P::from_ints(&[-1, 0, 2]).to_string(), "2x^2 - 1");
    }

    #[test]
    fn division_and_gcd() {
        let a = P::from_ints(&[-1, 0, 1]); // (x-1)(x+1)
        let b = P::from_ints(&[-1, 1]); // x-1
        let (qt, r) = a.div_rem(&b);
        assert_eq!(qt, P::from_ints(&[1, 1]));
        assert!(r.is_zero());
        let c = P::from_ints(&[1, 2, 1]); // (x+1)^2
        assert_eq!(a.gcd(&c), P::from_ints(&[1, 1]));
    }

    #[test]
    fn square_free_parts() {
        // x^2 (x - 1)^3 (x + 2)
        let p = P::from_roots(&[q(0, 1), q(0, 1), q(1, 1), q(1, 1), q(1, 1), q(-2, 1)]);
        assert_eq!(p.square_free(), P::from_roots(&[q(0, 1), q(1, 1), q(-2, 1)]));
        let parts = p.square_free_decomposition();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], P::from_roots(&[q(-2, 1)]));
        assert_eq!(parts[1], P::from_roots(&[q(0, 1)]));
        assert_eq!(parts[2], P::from_roots(&[q(1, 1)]));
    }

    #[test]
    fn reflect_and_valuation() {
        let p = P::from_ints(&[0, 0, 3, 1]);
        assert_eq!(p.valuation(), Some(2));
        assert_eq!(p.reflect(), P::from_ints(&[0, 0, 3, -1]));
        assert_eq!(p.shift_down(2), P::from_ints(&[3, 1]));
        assert_eq!(P::from_ints(&[6, -5, 1]).sign_changes(), 2);
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let p = P::new(vec![q(1, 2), q(-3, 1), q(0, 1), q(2, 3)]);
        let pts: Vec<_> = (0..4).map(|k| (q(k, 1), p.eval(&q(k, 1)))).collect();
        assert_eq!(P::interpolate(&pts), p);
    }
}
