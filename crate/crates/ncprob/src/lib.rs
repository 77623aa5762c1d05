//! Exact computation with products of noncommutative probability states.
//!
//! The crate evaluates mixed moments under the free, Boolean, monotone,
//! anti-monotone, c-free, c-monotone, c-anti-monotone, o-free and indented
//! products, computes the matching additive and multiplicative convolutions through
//! F-, φ-, η- and T-transforms, and converts between moments and indented, o-free
//! and anti-o-free cumulants. All arithmetic is exact.
//!
//! Most quantities are computed by two independent routes (word expansion in
//! [`freeprod`], transform arithmetic in [`convolutions`], partition sums in
//! [`cumulants`], operators in [`fock`]) so that each can check the other.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod convolutions;
pub mod cumulants;
pub mod error;
pub mod fock;
pub mod freeprod;
pub mod kind;
pub mod partitions;
pub mod poly;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use scalar::{q, ComplexRational, Rational};
