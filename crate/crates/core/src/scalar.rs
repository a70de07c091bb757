//! Exact scalar fields.
//!
//! Everything in this crate decides signs and vanishing exactly, so the
//! scalar type must be an ordered field with exact arithmetic. Any
//! `num_rational::Ratio<I>` over a signed integer type qualifies;
//! `BigRational` is the default used at the crate root.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An ordered field with exact arithmetic.
pub trait ExactField: Clone + Num + Signed + Ord + Debug + Display + Send + Sync + 'static {
    fn from_int(v: i64) -> Self;

    /// `p / q` as a field element. Panics if `q == 0`.
    fn from_frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Self::from_int(p) / Self::from_int(q)
    }

    /// Smallest integer `>= self`, if it fits in an `i64`.
    fn ceil_i64(&self) -> Option<i64>;

    /// Largest integer `<= self`, if it fits in an `i64`.
    fn floor_i64(&self) -> Option<i64>;

    fn is_integral(&self) -> bool;

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn midpoint(a: &Self, b: &Self) -> Self {
        (a.clone() + b.clone()) / Self::two()
    }
}

impl<I> ExactField for Ratio<I>
where
    I: Clone + Integer + Signed + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static,
{
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(I::from_i64(v).expect("integer out of range for scalar type"))
    }

    fn ceil_i64(&self) -> Option<i64> {
        self.ceil().to_integer().to_i64()
    }

    fn floor_i64(&self) -> Option<i64> {
        self.floor().to_integer().to_i64()
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}
