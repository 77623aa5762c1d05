//! Indented, o-free and anti-o-free cumulants.
//!
//! Moments are sums over non-crossing partitions with linearly ordered blocks. A
//! block's cumulant kind depends only on whether it is outer and, if not, whether
//! its parent (the innermost block containing it) comes earlier in the order:
//!
//! | block                  | φ     | ψ     | θ     |
//! |------------------------|-------|-------|-------|
//! | outer                  | `I`   | `OF`  | `AOF` |
//! | inner, parent earlier  | `OF`  | `OF`  | `OF`  |
//! | inner, parent later    | `AOF` | `AOF` | `AOF` |
//!
//! so the sum over orders is precomputed once per NC partition as weights
//! `count / k!` indexed by the set of inner blocks whose parent comes first.

mod dot;
mod ode;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::freeprod::{words, MultiMomentFunctional, StateTriple, Symbol};
use crate::kind::{Component, ProductKind, Slot};
use crate::partitions::{enumerate_n, nesting_parents, next_permutation, PartitionClass};
use crate::scalar::{factorial, int, Rational};
use crate::series::MomentSequence;

pub use dot::{dot_cumulant, dot_cumulants, recurrence_check, DotEngine, RecurrenceReport};
pub use ode::{ode_flow, ode_moments, CumulantGeneratingSeries, OdeFlow, OdeSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CumulantKind {
    /// Indented cumulants `K^{I(φ,ψ,θ)}`.
    I,
    /// o-free cumulants `K^{OF(ψ,θ)}`.
    OF,
    /// anti-o-free cumulants `K^{AOF(ψ,θ)}`.
    AOF,
}

impl CumulantKind {
    pub const ALL: [CumulantKind; 3] = [CumulantKind::I, CumulantKind::OF, CumulantKind::AOF];

    pub fn name(self) -> &'static str {
        match self {
            CumulantKind::I => "I",
            CumulantKind::OF => "OF",
            CumulantKind::AOF => "AOF",
        }
    }

    /// The state whose dot moments define this kind.
    pub fn component(self) -> Component {
        match self {
            CumulantKind::I => Component::Phi,
            CumulantKind::OF => Component::Psi,
            CumulantKind::AOF => Component::Theta,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for CumulantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CumulantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CumulantKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s.trim())).ok_or(Error::UnknownKind)
    }
}

/// Cumulants `K_n(X_{w₁}, …, X_{w_n})` indexed by nonempty generator words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantTable {
    kind: CumulantKind,
    alphabet: Vec<String>,
    truncation: usize,
    values: BTreeMap<Vec<Symbol>, Rational>,
}

impl CumulantTable {
    /// Checks every nonempty word up to `truncation` is present.
    pub fn new(
        kind: CumulantKind,
        alphabet: Vec<String>,
        truncation: usize,
        values: BTreeMap<Vec<Symbol>, Rational>,
    ) -> Result<Self> {
        for w in words(alphabet.len(), truncation).into_iter().skip(1) {
            if !values.contains_key(&w) {
                return Err(Error::IncompleteTable { degree: w.len() });
            }
        }
        if values.keys().any(|w| w.is_empty() || w.len() > truncation || w.iter().any(|&s| s as usize >= alphabet.len()))
        {
            return Err(Error::UnknownGenerator);
        }
        Ok(CumulantTable { kind, alphabet, truncation, values })
    }

    /// Single generator `x` with `K_k = k_values[k − 1]`.
    pub fn single(kind: CumulantKind, k_values: &[Rational]) -> Self {
        let values = (1..=k_values.len()).map(|k| (vec![0; k], k_values[k - 1].clone())).collect();
        CumulantTable { kind, alphabet: vec![String::from("x")], truncation: k_values.len(), values }
    }

    pub fn kind(&self) -> CumulantKind {
        self.kind
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn values(&self) -> &BTreeMap<Vec<Symbol>, Rational> {
        &self.values
    }

    pub fn get(&self, word: &[Symbol]) -> Option<&Rational> {
        self.values.get(word)
    }

    /// `K_1, …, K_N` of generator `s`.
    pub fn single_values(&self, s: Symbol) -> Vec<Rational> {
        (1..=self.truncation).map(|k| self.values[&vec![s; k]].clone()).collect()
    }
}

/// The three cumulant families of one state triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cumulants {
    pub indented: CumulantTable,
    pub ofree: CumulantTable,
    pub antiofree: CumulantTable,
}

impl Cumulants {
    pub fn get(&self, kind: CumulantKind) -> &CumulantTable {
        match kind {
            CumulantKind::I => &self.indented,
            CumulantKind::OF => &self.ofree,
            CumulantKind::AOF => &self.antiofree,
        }
    }

    /// Single-variable tables from `K_1..K_N` of each kind.
    pub fn single(ki: &[Rational], kof: &[Rational], kaof: &[Rational]) -> Self {
        Cumulants {
            indented: CumulantTable::single(CumulantKind::I, ki),
            ofree: CumulantTable::single(CumulantKind::OF, kof),
            antiofree: CumulantTable::single(CumulantKind::AOF, kaof),
        }
    }
}

/// An NC partition of `{1..n}` with its order weights.
struct WeightedPartition {
    /// 0-based positions.
    blocks: Vec<Vec<usize>>,
    outer: Vec<bool>,
    /// `(mask, weight)`: bit `b` set iff block `b` is inner with its parent earlier.
    masks: Vec<(u32, Rational)>,
}

fn weighted_partitions(n: usize) -> Vec<WeightedPartition> {
    let mut out = Vec::new();
    for p in enumerate_n(PartitionClass::NC, n) {
        let blocks: Vec<Vec<usize>> = p.canonical_blocks().to_vec();
        let parents = nesting_parents(&blocks);
        let k = blocks.len();
        let outer: Vec<bool> = parents.iter().map(|p| p.is_none()).collect();
        let masks = if outer.iter().all(|&o| o) {
            vec![(0, Rational::one())]
        } else {
            let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
            let mut perm: Vec<usize> = (0..k).collect();
            loop {
                // perm[position] = block
                let mut pos = vec![0; k];
                for (i, &b) in perm.iter().enumerate() {
                    pos[b] = i;
                }
                let mut mask = 0u32;
                for b in 0..k {
                    if let Some(par) = parents[b] {
                        if pos[par] < pos[b] {
                            mask |= 1 << b;
                        }
                    }
                }
                *counts.entry(mask).or_insert(0) += 1;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            let total = factorial(k);
            counts.into_iter().map(|(m, c)| (m, int(c as i64) / total.clone())).collect()
        };
        let blocks = blocks.into_iter().map(|b| b.into_iter().map(|e| e - 1).collect()).collect();
        out.push(WeightedPartition { blocks, outer, masks });
    }
    out
}

fn block_kind(component: Component, outer: bool, parent_earlier: bool) -> CumulantKind {
    match (outer, component) {
        (true, Component::Phi) => CumulantKind::I,
        (true, Component::Psi) => CumulantKind::OF,
        (true, Component::Theta) => CumulantKind::AOF,
        (false, _) if parent_earlier => CumulantKind::OF,
        (false, _) => CumulantKind::AOF,
    }
}

/// Partition sums with cumulants looked up by sub-word. `skip_full` drops the
/// one-block partition, which is what triangular inversion needs.
struct PartitionSum {
    by_len: Vec<Vec<WeightedPartition>>,
}

impl PartitionSum {
    fn new(n: usize) -> Self {
        PartitionSum { by_len: (0..=n).map(weighted_partitions).collect() }
    }

    fn eval(
        &self,
        word: &[Symbol],
        component: Component,
        skip_full: bool,
        k: &impl Fn(CumulantKind, &[Symbol]) -> Rational,
    ) -> Rational {
        let mut total = Rational::zero();
        for p in &self.by_len[word.len()] {
            if skip_full && p.blocks.len() == 1 {
                continue;
            }
            let values: Vec<[Rational; 3]> = p
                .blocks
                .iter()
                .map(|b| {
                    let sub: Vec<Symbol> = b.iter().map(|&i| word[i]).collect();
                    CumulantKind::ALL.map(|kind| k(kind, &sub))
                })
                .collect();
            for (mask, weight) in &p.masks {
                let mut term = weight.clone();
                for (b, v) in values.iter().enumerate() {
                    let kind = block_kind(component, p.outer[b], mask >> b & 1 == 1);
                    term *= &v[kind.index()];
                    if term.is_zero() {
                        break;
                    }
                }
                total += term;
            }
        }
        total
    }
}

fn check_table(t: &CumulantTable, alphabet: &[String], n: usize) -> Result<()> {
    if t.alphabet != alphabet {
        return Err(Error::ShapeMismatch);
    }
    if t.truncation < n {
        return Err(Error::IncompleteTable { degree: t.truncation + 1 });
    }
    Ok(())
}

/// Moments of `(φ, ψ, θ)` on every word of length `≤ n` from the three cumulant
/// tables.
pub fn moments_from_cumulants(
    ki: &CumulantTable,
    kof: &CumulantTable,
    kaof: &CumulantTable,
    n: usize,
) -> Result<StateTriple> {
    let alphabet = ki.alphabet.clone();
    for t in [ki, kof, kaof] {
        check_table(t, &alphabet, n)?;
    }
    let sums = PartitionSum::new(n);
    let lookup = |kind: CumulantKind, w: &[Symbol]| -> Rational {
        match kind {
            CumulantKind::I => ki.values[w].clone(),
            CumulantKind::OF => kof.values[w].clone(),
            CumulantKind::AOF => kaof.values[w].clone(),
        }
    };
    let make = |c: Component| {
        MultiMomentFunctional::from_fn(alphabet.clone(), n, |w| sums.eval(w, c, false, &lookup))
    };
    StateTriple::new(make(Component::Phi), make(Component::Psi), make(Component::Theta))
}

/// Inverse of [`moments_from_cumulants`], solved word by word in shortlex order.
pub fn cumulants_from_moments(triple: &StateTriple, n: usize) -> Result<Cumulants> {
    if n > triple.truncation() {
        return Err(Error::DegreeOverflow { degree: n, truncation: triple.truncation() });
    }
    let alphabet = triple.alphabet().to_vec();
    let sums = PartitionSum::new(n);
    let mut tables: [BTreeMap<Vec<Symbol>, Rational>; 3] = Default::default();
    for w in words(alphabet.len(), n).into_iter().skip(1) {
        for kind in CumulantKind::ALL {
            let c = kind.component();
            let rest = sums.eval(&w, c, true, &|k: CumulantKind, sub: &[Symbol]| tables[k.index()][sub].clone());
            let m = triple.component(c).get(&w).expect("word within truncation").clone();
            tables[kind.index()].insert(w.clone(), m - rest);
        }
    }
    let [i, of, aof] = tables;
    Ok(Cumulants {
        indented: CumulantTable { kind: CumulantKind::I, alphabet: alphabet.clone(), truncation: n, values: i },
        ofree: CumulantTable { kind: CumulantKind::OF, alphabet: alphabet.clone(), truncation: n, values: of },
        antiofree: CumulantTable { kind: CumulantKind::AOF, alphabet, truncation: n, values: aof },
    })
}

/// Single-variable cumulants `K_1..K_n` of `(λ, μ, ν)`, as `[I, OF, AOF]`.
pub fn single_cumulants(
    lambda: &MomentSequence,
    mu: &MomentSequence,
    nu: &MomentSequence,
    n: usize,
) -> Result<[Vec<Rational>; 3]> {
    let triple = StateTriple::from_moments(&lambda.truncate(n), &mu.truncate(n), &nu.truncate(n))?;
    let c = cumulants_from_moments(&triple, n)?;
    Ok([c.indented.single_values(0), c.ofree.single_values(0), c.antiofree.single_values(0)])
}

/// Moments of `(λ, μ, ν)` from single-variable cumulants `K_1..K_n`.
pub fn single_moments(ki: &[Rational], kof: &[Rational], kaof: &[Rational]) -> Result<[MomentSequence; 3]> {
    let n = ki.len();
    let c = Cumulants::single(ki, kof, kaof);
    let t = moments_from_cumulants(&c.indented, &c.ofree, &c.antiofree, n)?;
    Ok([t.phi.moments_of(0), t.psi.moments_of(0), t.theta.moments_of(0)])
}

/// Cumulants of one of the classical or conditional kinds: the indented cumulants
/// of the triple the kind builds from `states` (delta where it asks for one). For
/// [`ProductKind::OFree`] this is `K^{OF}` of the pair.
pub fn specialize(kind: ProductKind, states: &[MultiMomentFunctional], n: usize) -> Result<CumulantTable> {
    if states.len() != kind.arity() {
        return Err(Error::Arity { expected: kind.arity(), found: states.len() });
    }
    let first = &states[0];
    let delta = MultiMomentFunctional::delta(first.alphabet().to_vec(), first.truncation());
    let pick = |s: Slot| match s {
        Slot::Input(i) => states[i].clone(),
        Slot::Delta => delta.clone(),
    };
    let [a, b, c] = kind.slots();
    let triple = StateTriple::new(pick(a), pick(b), pick(c))?;
    let cumulants = cumulants_from_moments(&triple, n)?;
    Ok(match kind {
        ProductKind::OFree => cumulants.ofree,
        _ => cumulants.indented,
    })
}
