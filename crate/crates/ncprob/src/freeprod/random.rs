//! Random fixtures: small rational values, positivity not enforced.

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use super::{MultiMomentFunctional, StateTriple};
use crate::scalar::{q, Rational};
use crate::series::MomentSequence;

/// A rational in `[−2, 2]` with denominator at most 4.
pub fn random_small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let d = rng.gen_range(1..=4);
    q(rng.gen_range(-2 * d..=2 * d), d)
}

pub fn random_moments<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> MomentSequence {
    MomentSequence::from_fn(degree, |_| random_small_rational(rng))
}

pub fn random_functional<R: Rng + ?Sized>(
    alphabet: Vec<String>,
    truncation: usize,
    rng: &mut R,
) -> MultiMomentFunctional {
    MultiMomentFunctional::from_fn(alphabet, truncation, |_| random_small_rational(rng))
}

pub fn random_triple<R: Rng + ?Sized>(alphabet: Vec<String>, truncation: usize, rng: &mut R) -> StateTriple {
    StateTriple {
        phi: random_functional(alphabet.clone(), truncation, rng),
        psi: random_functional(alphabet.clone(), truncation, rng),
        theta: random_functional(alphabet, truncation, rng),
    }
}
