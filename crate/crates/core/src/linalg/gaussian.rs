use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::ExactField;

/// `re + im·i` with exact components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gaussian<T> {
    pub re: T,
    pub im: T,
}

impl<T: ExactField> Gaussian<T> {
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    pub fn real(re: T) -> Self {
        Self { re, im: T::zero() }
    }

    pub fn i() -> Self {
        Self { re: T::zero(), im: T::one() }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn scale(&self, k: &T) -> Self {
        Self { re: self.re.clone() * k.clone(), im: self.im.clone() * k.clone() }
    }
}

impl<T: ExactField> Zero for Gaussian<T> {
    fn zero() -> Self {
        Self::real(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<T: ExactField> One for Gaussian<T> {
    fn one() -> Self {
        Self::real(T::one())
    }
}

impl<T: ExactField> Add for Gaussian<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<T: ExactField> Sub for Gaussian<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<T: ExactField> Mul for Gaussian<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self::real(self.re * rhs.re);
        }
        Self {
            re: self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl<T: ExactField> Div for Gaussian<T> {
    type Output = Self;
    /// Panics on division by zero, like the underlying field.
    fn div(self, rhs: Self) -> Self {
        if rhs.im.is_zero() {
            return Self { re: self.re / rhs.re.clone(), im: self.im / rhs.re };
        }
        let n = rhs.norm_sqr();
        let p = self * rhs.conj();
        Self { re: p.re / n.clone(), im: p.im / n }
    }
}

impl<T: ExactField> Neg for Gaussian<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl<T: ExactField> fmt::Display for Gaussian<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}
