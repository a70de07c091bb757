//! Independent regularity oracle on products of elliptic curves.
//!
//! A semihomogeneous bundle on an elliptic curve has cohomology determined by
//! its Euler characteristic alone, and cohomology of a box product is given
//! by Künneth. This gives `creg` of box products straight from its
//! definition, with no hermitian forms involved.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::{ExactField, Rational};

/// Largest product dimension the oracle accepts.
pub const MAX_FACTORS: usize = 4;

const WINDOW_CAP: i64 = 1 << 20;

/// `(rank, slope, degree)` of one elliptic factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticFactor {
    pub rank: u64,
    pub slope: Rational,
    pub degree: u64,
}

impl EllipticFactor {
    pub fn new(rank: u64, slope: Rational, degree: u64) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        if degree == 0 {
            return Err(Error::NonPositiveDegree("0".into()));
        }
        let c1 = slope.clone() * Rational::from_int(rank as i64);
        if !c1.is_integer() {
            return Err(Error::NonIntegralChernClass { rank, slope: slope.to_string() });
        }
        Ok(Self { rank, slope, degree })
    }

    /// `χ(F(m) ⊗ α) = rank·(slope + m·degree)`.
    pub fn euler_characteristic(&self, m: i64) -> BigInt {
        let chi = (self.slope.clone() + Rational::from_int(m) * Rational::from_int(self.degree as i64))
            * Rational::from_int(self.rank as i64);
        debug_assert!(chi.is_integer());
        chi.to_integer()
    }

    /// `(h^0, h^1)` of `F(m) ⊗ α` for general `α`.
    pub fn cohomology(&self, m: i64) -> (BigInt, BigInt) {
        let chi = self.euler_characteristic(m);
        if chi.is_positive() {
            (chi, BigInt::zero())
        } else {
            (BigInt::zero(), -chi)
        }
    }

    /// `⌈1 − slope/degree⌉`, by scanning `χ` rather than from the formula.
    fn scanned_creg(&self) -> i64 {
        // least m with h^1(F(m − 1)) = 0, i.e. χ(m − 1) ≥ 0
        let mut m = 0i64;
        while self.euler_characteristic(m - 1).is_negative() {
            m += 1;
        }
        while !self.euler_characteristic(m - 2).is_negative() {
            m -= 1;
        }
        m
    }
}

/// `(h^0, h^1)` of `F(m) ⊗ α` on an elliptic curve.
pub fn elliptic_cohomology(rank: u64, slope: &Rational, degree: u64, m: i64) -> Result<(BigInt, BigInt)> {
    Ok(EllipticFactor::new(rank, slope.clone(), degree)?.cohomology(m))
}

/// `h^i` of `(⊠ F_j)(t) ⊗ α` for every `i` in `0..=g`.
pub fn product_cohomology(factors: &[EllipticFactor], t: i64) -> Vec<BigInt> {
    let g = factors.len();
    let tables: Vec<(BigInt, BigInt)> = factors.iter().map(|f| f.cohomology(t)).collect();
    let mut h = vec![BigInt::zero(); g + 1];
    for subset in 0u32..(1 << g) {
        let mut term = BigInt::from(1);
        for (j, (h0, h1)) in tables.iter().enumerate() {
            term *= if subset & (1 << j) != 0 { h1 } else { h0 };
        }
        h[subset.count_ones() as usize] += term;
    }
    h
}

/// Whether `h^i((⊠ F_j)(m − i) ⊗ α) = 0` for every `i` in `1..=g`.
pub fn kunneth_predicate(factors: &[EllipticFactor], m: i64) -> bool {
    let g = factors.len() as i64;
    (1..=g).all(|i| product_cohomology(factors, m - i)[i as usize].is_zero())
}

/// Continuous regularity of the box product, from its definition.
pub fn kunneth_creg(factors: &[EllipticFactor]) -> Result<i64> {
    let g = factors.len();
    if g == 0 {
        return Err(Error::TooFewFactors(0));
    }
    if g > MAX_FACTORS {
        return Err(Error::Unsupported(format!("oracle handles at most {MAX_FACTORS} factors, got {g}")));
    }
    let per: Vec<i64> = factors.iter().map(EllipticFactor::scanned_creg).collect();
    let gi = g as i64;
    let mut lo = per.iter().min().unwrap() - gi - 1;
    let mut hi = per.iter().max().unwrap() + gi + 1;

    // Below `lo` every factor has χ < 0 at twist `m − g`, so h^g ≠ 0 there,
    // and χ only decreases further down.
    let all_negative = |m: i64| factors.iter().all(|f| f.euler_characteristic(m - gi).is_negative());
    while !all_negative(lo) {
        lo -= hi - lo;
        if lo < -WINDOW_CAP {
            return Err(Error::SearchBoundExceeded(WINDOW_CAP as u64));
        }
    }
    let mut m = lo;
    loop {
        if kunneth_predicate(factors, m) {
            return Ok(m);
        }
        m += 1;
        if m > hi {
            hi += hi - lo;
            if hi > WINDOW_CAP {
                return Err(Error::SearchBoundExceeded(WINDOW_CAP as u64));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(rank: u64, p: i64, q: i64, degree: u64) -> EllipticFactor {
        EllipticFactor::new(rank, Rational::from_frac(p, q), degree).unwrap()
    }

    #[test]
    fn cohomology_of_line_bundles() {
        let o = f(1, 0, 1, 1);
        assert_eq!(o.cohomology(0), (BigInt::zero(), BigInt::zero()));
        assert_eq!(o.cohomology(2), (BigInt::from(2), BigInt::zero()));
        assert_eq!(o.cohomology(-3), (BigInt::zero(), BigInt::from(3)));
        assert_eq!(
            elliptic_cohomology(2, &Rational::from_frac(-3, 2), 1, 1),
            Ok((BigInt::zero(), BigInt::from(1)))
        );
    }

    #[test]
    fn rejects_non_integral_chern_class() {
        assert!(matches!(
            elliptic_cohomology(2, &Rational::from_frac(1, 3), 1, 0),
            Err(Error::NonIntegralChernClass { rank: 2, .. })
        ));
    }

    #[test]
    fn scanned_factor_creg_matches_ceiling() {
        for (r, p, q, d) in [(1, 0, 1, 1), (2, -3, 2, 1), (1, 5, 1, 2), (3, 7, 3, 3), (1, -4, 1, 2)] {
            let fac = f(r, p, q, d);
            let expected = (Rational::from_int(1) - Rational::from_frac(p, q) / Rational::from_int(d as i64))
                .ceil_i64()
                .unwrap();
            assert_eq!(fac.scanned_creg(), expected, "{fac:?}");
            assert_eq!(kunneth_creg(&[fac]).unwrap(), expected);
        }
    }

    #[test]
    fn kunneth_examples() {
        assert_eq!(kunneth_creg(&[f(1, 0, 1, 1)]), Ok(1));
        assert_eq!(kunneth_creg(&[f(1, 0, 1, 1), f(2, -3, 2, 1)]), Ok(3));
        assert_eq!(kunneth_creg(&[f(1, 0, 1, 1), f(1, 0, 1, 1)]), Ok(2));
        assert_eq!(kunneth_creg(&[f(1, 0, 1, 1), f(1, 0, 1, 1), f(1, 0, 1, 1)]), Ok(3));
    }

    #[test]
    fn kunneth_cohomology_euler_characteristic_is_multiplicative() {
        let fs = [f(2, 1, 2, 1), f(1, -2, 1, 3)];
        for t in -4..4 {
            let h = product_cohomology(&fs, t);
            let chi: BigInt = h.iter().enumerate().map(|(i, x)| if i % 2 == 0 { x.clone() } else { -x }).sum();
            assert_eq!(chi, fs[0].euler_characteristic(t) * fs[1].euler_characteristic(t));
        }
    }

    #[test]
    fn too_many_factors() {
        let fs = vec![f(1, 0, 1, 1); 5];
        assert!(matches!(kunneth_creg(&fs), Err(Error::Unsupported(_))));
    }
}
