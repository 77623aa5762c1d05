//! Randomised checks of the kernel conditions characterising o-free and indented
//! independence.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::Zero;
use rand::Rng;

use super::{AlternatingWord, Element, Evaluator, Functional, MultiMomentFunctional, StateTriple, Symbol, TripleNodes};
use crate::error::{Error, Result};
use crate::kind::Component;
use crate::partitions::{peaks_bottoms, IndexSequence};
use crate::scalar::{q, Rational};

/// Which vanishing condition to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// o-free product of the pairs `(φᵢ, ψᵢ)`: both states vanish when peaks are in
    /// `Ker φ` and bottoms in `Ker ψ`.
    OF,
    /// `(ψ, θ)` of the indented product is o-free.
    I1,
    /// `φ` of the indented product vanishes when `a₁ ∈ Ker φ`, later peaks are in
    /// `Ker ψ` and later bottoms in `Ker θ`.
    I2,
    /// Like `I1` with every position assigned to `Ker ψ` or `Ker θ`.
    I1Prime,
    /// Like `I2` with every position after the first assigned to `Ker ψ` or `Ker θ`.
    I2Prime,
    /// Mirror of `I2Prime`: `a_n ∈ Ker φ`, earlier positions assigned.
    I2DoublePrime,
}

impl Condition {
    pub const ALL: [Condition; 6] =
        [Condition::OF, Condition::I1, Condition::I2, Condition::I1Prime, Condition::I2Prime, Condition::I2DoublePrime];

    pub fn name(self) -> &'static str {
        match self {
            Condition::OF => "OF",
            Condition::I1 => "I1",
            Condition::I2 => "I2",
            Condition::I1Prime => "I1'",
            Condition::I2Prime => "I2'",
            Condition::I2DoublePrime => "I2''",
        }
    }

    fn components(self) -> &'static [Component] {
        match self {
            Condition::OF | Condition::I1 | Condition::I1Prime => &[Component::Psi, Component::Theta],
            _ => &[Component::Phi],
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Condition::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s.trim())).ok_or(Error::UnknownKind)
    }
}

/// A word on which the tested moment failed to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub word: AlternatingWord<Rational>,
    pub component: Component,
    /// `None` when evaluation itself failed.
    pub value: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    pub condition: Condition,
    pub trials: usize,
    /// Trials skipped because the condition is vacuous (words of length 1).
    pub vacuous: usize,
    pub violations: Vec<Violation>,
}

impl IndependenceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Which state a letter is centred against.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Center {
    Free,
    Phi,
    Psi,
    Theta,
}

fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    q(rng.gen_range(-8..=8), rng.gen_range(1..=4))
}

fn random_letter<R: Rng + ?Sized>(rng: &mut R, alphabet: usize, max_degree: usize) -> Element<Rational> {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let len = rng.gen_range(1..=max_degree);
        let w: Vec<Symbol> = (0..len).map(|_| rng.gen_range(0..alphabet as Symbol)).collect();
        let mut c = random_rational(rng);
        if c.is_zero() {
            c = q(1, 1);
        }
        terms.push((c, w));
    }
    terms.push((random_rational(rng), Vec::new()));
    Element::from_terms(terms)
}

/// Draw `trials` random alternating words of length `≤ max_len` over the factors,
/// centre the letters as `condition` prescribes, and check that the relevant
/// components of the product vanish.
///
/// For [`Condition::OF`] the product is the o-free product of the pairs
/// `(φᵢ, ψᵢ)`; the `θᵢ` are ignored. Otherwise it is the indented product.
pub fn verify_independence<R: Rng + ?Sized>(
    condition: Condition,
    factors: &[StateTriple<Rational>],
    trials: usize,
    max_len: usize,
    rng: &mut R,
) -> IndependenceReport {
    let mut report = IndependenceReport { condition, trials, vacuous: 0, violations: Vec::new() };
    let truncation = factors.iter().map(|t| t.truncation()).min().unwrap_or(0);
    let max_len = max_len.min(truncation);
    if factors.len() < 2 || max_len == 0 {
        report.vacuous = trials;
        return report;
    }
    let mut ev = Evaluator::new();
    let ts: Vec<TripleNodes> = factors
        .iter()
        .enumerate()
        .map(|(k, t)| match condition {
            Condition::OF => ev.triple(k, &t.phi, &t.phi, &t.psi),
            _ => ev.state_triple(k, t),
        })
        .collect();
    let top = ev.left_fold(&ts);

    for _ in 0..trials {
        let n = rng.gen_range(1..=max_len);
        let mut indices = Vec::with_capacity(n);
        while indices.len() < n {
            let i = rng.gen_range(0..factors.len());
            if indices.last() != Some(&i) {
                indices.push(i);
            }
        }
        if n == 1 && !matches!(condition, Condition::I2 | Condition::I2Prime | Condition::I2DoublePrime) {
            report.vacuous += 1;
            continue;
        }
        let seq = IndexSequence::new(indices.clone()).expect("alternating by construction");
        let (peaks, bottoms) = peaks_bottoms(&seq);
        let centers = assign_centers(condition, n, &peaks, &bottoms, rng);
        let max_degree = (truncation / n).max(1);
        let mut letters = Vec::with_capacity(n);
        for (k, &i) in indices.iter().enumerate() {
            let t = &factors[i];
            let raw = random_letter(rng, t.alphabet().len(), max_degree);
            let state: Option<&MultiMomentFunctional<Rational>> = match centers[k] {
                Center::Free => None,
                Center::Phi => Some(&t.phi),
                Center::Psi => Some(&t.psi),
                Center::Theta => Some(&t.theta),
            };
            let letter = match state {
                Some(s) => raw.centered(s as &dyn Functional<Rational>).expect("letter degree within truncation"),
                None => raw,
            };
            letters.push((i, letter));
        }
        let word = AlternatingWord::new(letters).expect("alternating by construction");
        for &c in condition.components() {
            match ev.eval_word(top.component(c), &word) {
                Ok(v) if v.is_zero() => {}
                Ok(v) => report.violations.push(Violation { word: word.clone(), component: c, value: Some(v) }),
                Err(_) => report.violations.push(Violation { word: word.clone(), component: c, value: None }),
            }
        }
    }
    report
}

/// Per-position centring. Positions are 0-based here; `peaks` and `bottoms` are
/// 1-based. For [`Condition::OF`], `Phi` and `Psi` stand for the two states of the
/// pair.
fn assign_centers<R: Rng + ?Sized>(
    condition: Condition,
    n: usize,
    peaks: &BTreeSet<usize>,
    bottoms: &BTreeSet<usize>,
    rng: &mut R,
) -> Vec<Center> {
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let either = |rng: &mut R| if rng.gen_bool(0.5) { Center::Psi } else { Center::Theta };
        let c = match condition {
            Condition::OF => {
                if peaks.contains(&k) {
                    Center::Phi
                } else if bottoms.contains(&k) {
                    Center::Psi
                } else {
                    Center::Free
                }
            }
            Condition::I1 | Condition::I2 if condition == Condition::I2 && k == 1 => Center::Phi,
            Condition::I1 | Condition::I2 => {
                if peaks.contains(&k) {
                    Center::Psi
                } else if bottoms.contains(&k) {
                    Center::Theta
                } else {
                    Center::Free
                }
            }
            Condition::I2Prime if k == 1 => Center::Phi,
            Condition::I2DoublePrime if k == n => Center::Phi,
            Condition::I1Prime | Condition::I2Prime | Condition::I2DoublePrime => {
                if peaks.contains(&k) {
                    Center::Psi
                } else if bottoms.contains(&k) {
                    Center::Theta
                } else {
                    either(rng)
                }
            }
        };
        out.push(c);
    }
    out
}
