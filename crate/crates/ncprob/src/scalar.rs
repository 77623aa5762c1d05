//! Scalar traits and exact rational helpers.

use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;

/// Gaussian rationals, used for moment data of measures on the unit circle.
pub type ComplexRational = num_complex::Complex<Rational>;

/// Commutative ring with owned arithmetic.
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

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A [`Ring`] in which every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {}

impl<T: Ring + Div<Output = T>> Field for T {}

/// `n / d` as a rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A complex rational `re + i im`.
pub fn cq(re: Rational, im: Rational) -> ComplexRational {
    ComplexRational::new(re, im)
}

/// The image of the integer `n` in any ring.
pub fn from_int<C: Ring>(n: i64) -> C {
    let mut acc = C::zero();
    let mut base = C::one();
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc + base.clone();
        }
        base = base.clone() + base;
        k >>= 1;
    }
    if n < 0 {
        -acc
    } else {
        acc
    }
}

/// `x^k` by repeated squaring.
pub fn pow<C: Ring>(x: &C, mut k: usize) -> C {
    let mut acc = C::one();
    let mut base = x.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base.clone();
        }
        k >>= 1;
        if k > 0 {
            base = base.clone() * base;
        }
    }
    acc
}

/// `n!` as a rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

/// Binomial coefficient `binom(a, k)` for a rational upper argument.
pub fn binomial(a: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for j in 0..k {
        acc = acc * (a - int(j as i64)) / int(j as i64 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_helpers() {
        assert_eq!(from_int::<Rational>(-7), int(-7));
        assert_eq!(pow(&q(2, 3), 3), q(8, 27));
        assert_eq!(pow(&q(2, 3), 0), int(1));
        assert_eq!(factorial(5), int(120));
        assert_eq!(binomial(&q(1, 2), 2), q(-1, 8));
        assert_eq!(binomial(&int(5), 2), int(10));
    }
}
