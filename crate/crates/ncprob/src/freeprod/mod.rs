//! Mixed moments in free products of algebras carrying several states.
//!
//! The basic operation is the c-free product `φ₁ _{s₁}∗_{s₂} φ₂`: for an
//! alternating word whose letters are centred with respect to the `s`-states, the
//! value factorises as the product of the `φ`-values. Writing each letter as
//! `(a − s(a)) + s(a)` and expanding gives, for monomials `m₁ ⋯ m_n` with
//! `c_k = s(m_k)`,
//!
//! ```text
//! φ(m₁ ⋯ m_n) = ∏ (φ(m_k) − c_k) − Σ_{U ⊊ [n]} ∏_{k ∉ U} (−c_k) · φ(m_U)
//! ```
//!
//! where `m_U` is the in-order product of the `m_k` with `k ∈ U`. Every product
//! considered here is a nest of such c-free products, so evaluation only ever needs
//! the per-factor functionals on generator words.

mod independence;
mod random;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kind::{Component, ProductKind, Slot};
use crate::scalar::{Rational, Ring};
use crate::series::MomentSequence;

pub use independence::{verify_independence, Condition, IndependenceReport, Violation};
pub use random::{random_functional, random_moments, random_small_rational, random_triple};

/// A generator of one factor algebra.
pub type Symbol = u32;

/// A linear functional on the free unital algebra over some alphabet, given by its
/// values on generator words. The empty word must map to 1.
pub trait Functional<C> {
    fn eval(&self, word: &[Symbol]) -> Result<C>;
}

impl<C, F: Functional<C> + ?Sized> Functional<C> for &F {
    fn eval(&self, word: &[Symbol]) -> Result<C> {
        (**self).eval(word)
    }
}

/// The delta state: 1 on the unit, 0 on every nonempty word.
#[derive(Clone, Copy, Debug, Default)]
pub struct DeltaState;

impl<C: Ring> Functional<C> for DeltaState {
    fn eval(&self, word: &[Symbol]) -> Result<C> {
        Ok(if word.is_empty() { C::one() } else { C::zero() })
    }
}

static DELTA: DeltaState = DeltaState;

/// A functional given by a closure on nonempty words.
pub struct FnState<F>(pub F);

impl<C: Ring, F: Fn(&[Symbol]) -> Result<C>> Functional<C> for FnState<F> {
    fn eval(&self, word: &[Symbol]) -> Result<C> {
        if word.is_empty() {
            Ok(C::one())
        } else {
            (self.0)(word)
        }
    }
}

/// Every word of length `≤ max_len` over `alphabet` letters, in shortlex order.
pub fn words(alphabet: usize, max_len: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<Symbol>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet);
        for w in &layer {
            for s in 0..alphabet as Symbol {
                let mut v = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Mixed moments of a state on a free algebra, tabulated up to a truncation degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiMomentFunctional<C = Rational> {
    alphabet: Vec<String>,
    truncation: usize,
    values: BTreeMap<Vec<Symbol>, C>,
}

impl<C: Ring> MultiMomentFunctional<C> {
    /// Checks that the empty word maps to 1 and that every word up to the
    /// truncation has a value.
    pub fn new(alphabet: Vec<String>, truncation: usize, values: BTreeMap<Vec<Symbol>, C>) -> Result<Self> {
        if !values.get(&Vec::new()).is_some_and(|v| v.is_one()) {
            return Err(Error::NotNormalized);
        }
        for w in words(alphabet.len(), truncation) {
            if !values.contains_key(&w) {
                return Err(Error::IncompleteTable { degree: w.len() });
            }
        }
        if values.keys().any(|w| w.len() > truncation || w.iter().any(|&s| s as usize >= alphabet.len())) {
            return Err(Error::UnknownGenerator);
        }
        Ok(MultiMomentFunctional { alphabet, truncation, values })
    }

    /// Tabulate `f` on every nonempty word up to `truncation`.
    pub fn from_fn(alphabet: Vec<String>, truncation: usize, mut f: impl FnMut(&[Symbol]) -> C) -> Self {
        let values = words(alphabet.len(), truncation)
            .into_iter()
            .map(|w| {
                let v = if w.is_empty() { C::one() } else { f(&w) };
                (w, v)
            })
            .collect();
        MultiMomentFunctional { alphabet, truncation, values }
    }

    /// Single generator `x` with the given moments.
    pub fn from_moments(m: &MomentSequence<C>) -> Self {
        Self::from_fn(vec![String::from("x")], m.degree(), |w| m.get(w.len()).clone())
    }

    /// Tabulate another functional.
    pub fn tabulate(alphabet: Vec<String>, truncation: usize, f: &dyn Functional<C>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for w in words(alphabet.len(), truncation) {
            let v = f.eval(&w)?;
            values.insert(w, v);
        }
        Self::new(alphabet, truncation, values)
    }

    pub fn delta(alphabet: Vec<String>, truncation: usize) -> Self {
        Self::from_fn(alphabet, truncation, |_| C::zero())
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn values(&self) -> &BTreeMap<Vec<Symbol>, C> {
        &self.values
    }

    pub fn get(&self, word: &[Symbol]) -> Option<&C> {
        self.values.get(word)
    }

    /// Overwrite the value on a nonempty word within the truncation.
    pub fn set(&mut self, word: &[Symbol], value: C) -> Result<()> {
        if word.is_empty() {
            return Err(Error::NotNormalized);
        }
        match self.values.get_mut(word) {
            Some(v) => {
                *v = value;
                Ok(())
            }
            None => Err(Error::DegreeOverflow { degree: word.len(), truncation: self.truncation }),
        }
    }

    /// Moments of the generator `s`.
    pub fn moments_of(&self, s: Symbol) -> MomentSequence<C> {
        MomentSequence::from_fn(self.truncation, |k| self.values[&vec![s; k]].clone())
    }
}

impl<C: Ring> Functional<C> for MultiMomentFunctional<C> {
    fn eval(&self, word: &[Symbol]) -> Result<C> {
        if word.len() > self.truncation {
            return Err(Error::DegreeOverflow { degree: word.len(), truncation: self.truncation });
        }
        self.values.get(word).cloned().ok_or(Error::UnknownGenerator)
    }
}

/// Three states `(φ, ψ, θ)` on one algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateTriple<C = Rational> {
    pub phi: MultiMomentFunctional<C>,
    pub psi: MultiMomentFunctional<C>,
    pub theta: MultiMomentFunctional<C>,
}

impl<C: Ring> StateTriple<C> {
    pub fn new(
        phi: MultiMomentFunctional<C>,
        psi: MultiMomentFunctional<C>,
        theta: MultiMomentFunctional<C>,
    ) -> Result<Self> {
        let same = |a: &MultiMomentFunctional<C>, b: &MultiMomentFunctional<C>| {
            a.alphabet == b.alphabet && a.truncation == b.truncation
        };
        if !same(&phi, &psi) || !same(&phi, &theta) {
            return Err(Error::ShapeMismatch);
        }
        Ok(StateTriple { phi, psi, theta })
    }

    /// Single-generator triple from three moment sequences of equal degree.
    pub fn from_moments(
        lambda: &MomentSequence<C>,
        mu: &MomentSequence<C>,
        nu: &MomentSequence<C>,
    ) -> Result<Self> {
        Self::new(
            MultiMomentFunctional::from_moments(lambda),
            MultiMomentFunctional::from_moments(mu),
            MultiMomentFunctional::from_moments(nu),
        )
    }

    pub fn component(&self, c: Component) -> &MultiMomentFunctional<C> {
        match c {
            Component::Phi => &self.phi,
            Component::Psi => &self.psi,
            Component::Theta => &self.theta,
        }
    }

    pub fn alphabet(&self) -> &[String] {
        &self.phi.alphabet
    }

    pub fn truncation(&self) -> usize {
        self.phi.truncation
    }
}

/// A generator of factor `factor` inside a free product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen {
    pub factor: u32,
    pub symbol: Symbol,
}

impl Gen {
    pub fn new(factor: usize, symbol: Symbol) -> Self {
        Gen { factor: factor as u32, symbol }
    }
}

/// Formal linear combination of generator words of one algebra; the empty word
/// stands for the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element<C> {
    terms: Vec<(C, Vec<Symbol>)>,
}

impl<C: Ring> Element<C> {
    pub fn from_terms(terms: Vec<(C, Vec<Symbol>)>) -> Self {
        Element { terms }
    }

    pub fn scalar(c: C) -> Self {
        Element { terms: vec![(c, Vec::new())] }
    }

    pub fn word(w: Vec<Symbol>) -> Self {
        Element { terms: vec![(C::one(), w)] }
    }

    pub fn generator(s: Symbol) -> Self {
        Self::word(vec![s])
    }

    pub fn terms(&self) -> &[(C, Vec<Symbol>)] {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Element { terms }
    }

    pub fn scale(&self, c: &C) -> Self {
        Element { terms: self.terms.iter().map(|(a, w)| (a.clone() * c.clone(), w.clone())).collect() }
    }

    /// Longest word occurring.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(_, w)| w.len()).max().unwrap_or(0)
    }

    pub fn eval(&self, f: &dyn Functional<C>) -> Result<C> {
        let mut acc = C::zero();
        for (c, w) in &self.terms {
            acc = acc + c.clone() * f.eval(w)?;
        }
        Ok(acc)
    }

    /// `a − f(a)·1`.
    pub fn centered(&self, f: &dyn Functional<C>) -> Result<Self> {
        let v = self.eval(f)?;
        Ok(self.add(&Element::scalar(-v)))
    }
}

/// A word `a₁ ⋯ a_n` with `a_k` in factor `i_k` and `i_k ≠ i_{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingWord<C> {
    letters: Vec<(usize, Element<C>)>,
}

impl<C: Ring> AlternatingWord<C> {
    pub fn new(letters: Vec<(usize, Element<C>)>) -> Result<Self> {
        if letters.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::NotAlternating);
        }
        Ok(AlternatingWord { letters })
    }

    /// Letters that are single generators.
    pub fn of_generators(gens: &[(usize, Symbol)]) -> Result<Self> {
        Self::new(gens.iter().map(|&(f, s)| (f, Element::generator(s))).collect())
    }

    pub fn letters(&self) -> &[(usize, Element<C>)] {
        &self.letters
    }

    pub fn indices(&self) -> Vec<usize> {
        self.letters.iter().map(|(i, _)| *i).collect()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Multilinear expansion into `(coefficient, generator word)` pairs.
    pub fn expand(&self) -> Vec<(C, Vec<Gen>)> {
        let mut acc: Vec<(C, Vec<Gen>)> = vec![(C::one(), Vec::new())];
        for (factor, el) in &self.letters {
            let mut next = Vec::with_capacity(acc.len() * el.terms.len());
            for (c, w) in &acc {
                for (d, v) in &el.terms {
                    let coef = c.clone() * d.clone();
                    if coef.is_zero() {
                        continue;
                    }
                    let mut word = w.clone();
                    word.extend(v.iter().map(|&s| Gen::new(*factor, s)));
                    next.push((coef, word));
                }
            }
            acc = next;
        }
        acc
    }
}

pub type NodeId = usize;

enum Node<'a, C> {
    Base { factor: u32, state: &'a dyn Functional<C> },
    CFree { phi: [NodeId; 2], center: [NodeId; 2] },
}

/// Memoising evaluator for nested c-free products.
///
/// Nodes are either a functional on one factor or a c-free product
/// `φ_L _{s_L}∗_{s_R} φ_R` of two nodes over disjoint sets of factors.
pub struct Evaluator<'a, C> {
    nodes: Vec<Node<'a, C>>,
    factors: Vec<Vec<u32>>,
    memo: Vec<BTreeMap<Vec<Gen>, C>>,
}

/// Nodes of the three components of an indented product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TripleNodes {
    pub phi: NodeId,
    pub psi: NodeId,
    pub theta: NodeId,
}

impl TripleNodes {
    pub fn component(&self, c: Component) -> NodeId {
        match c {
            Component::Phi => self.phi,
            Component::Psi => self.psi,
            Component::Theta => self.theta,
        }
    }
}

impl<'a, C: Ring> Default for Evaluator<'a, C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<'a, C: Ring> Evaluator<'a, C> {
    pub fn new() -> Self {
        Evaluator { nodes: Vec::new(), factors: Vec::new(), memo: Vec::new() }
    }

    fn push(&mut self, node: Node<'a, C>, factors: Vec<u32>) -> NodeId {
        self.nodes.push(node);
        self.factors.push(factors);
        self.memo.push(BTreeMap::new());
        self.nodes.len() - 1
    }

    /// A state on factor `factor`.
    pub fn base(&mut self, factor: usize, state: &'a dyn Functional<C>) -> NodeId {
        self.push(Node::Base { factor: factor as u32, state }, vec![factor as u32])
    }

    /// `left _{left_center}∗_{right_center} right`.
    ///
    /// Panics if the factor sets of the two sides overlap or a centre lives on a
    /// different set of factors than the state it centres.
    pub fn cfree(&mut self, left: NodeId, left_center: NodeId, right: NodeId, right_center: NodeId) -> NodeId {
        assert_eq!(self.factors[left], self.factors[left_center], "centre must live on the same factors");
        assert_eq!(self.factors[right], self.factors[right_center], "centre must live on the same factors");
        assert!(
            self.factors[left].iter().all(|f| !self.factors[right].contains(f)),
            "factors of a c-free product must be disjoint"
        );
        let mut fs = self.factors[left].clone();
        fs.extend(self.factors[right].iter().copied());
        fs.sort_unstable();
        self.push(Node::CFree { phi: [left, right], center: [left_center, right_center] }, fs)
    }

    /// Base nodes for a triple of states on one factor.
    pub fn triple(
        &mut self,
        factor: usize,
        phi: &'a dyn Functional<C>,
        psi: &'a dyn Functional<C>,
        theta: &'a dyn Functional<C>,
    ) -> TripleNodes {
        TripleNodes { phi: self.base(factor, phi), psi: self.base(factor, psi), theta: self.base(factor, theta) }
    }

    /// Base nodes for a [`StateTriple`].
    pub fn state_triple(&mut self, factor: usize, t: &'a StateTriple<C>) -> TripleNodes {
        self.triple(factor, &t.phi, &t.psi, &t.theta)
    }

    /// The triple obtained by filling the slots of `kind` from `states`, with the
    /// delta state where the kind asks for it.
    pub fn kind_triple(&mut self, kind: ProductKind, factor: usize, states: &[&'a dyn Functional<C>]) -> Result<TripleNodes> {
        if states.len() != kind.arity() {
            return Err(Error::Arity { expected: kind.arity(), found: states.len() });
        }
        let pick = |s: Slot| -> &'a dyn Functional<C> {
            match s {
                Slot::Input(i) => states[i],
                Slot::Delta => &DELTA,
            }
        };
        let [a, b, c] = kind.slots();
        Ok(self.triple(factor, pick(a), pick(b), pick(c)))
    }

    /// `(φ₁ θ₁∗ψ₂ φ₂, ψ₁ θ₁∗ψ₂ ψ₂, θ₁ θ₁∗ψ₂ θ₂)`.
    pub fn indented(&mut self, a: TripleNodes, b: TripleNodes) -> TripleNodes {
        TripleNodes {
            phi: self.cfree(a.phi, a.theta, b.phi, b.psi),
            psi: self.cfree(a.psi, a.theta, b.psi, b.psi),
            theta: self.cfree(a.theta, a.theta, b.theta, b.psi),
        }
    }

    /// `((t₁ ⋌ t₂) ⋌ t₃) ⋌ ⋯`.
    pub fn left_fold(&mut self, ts: &[TripleNodes]) -> TripleNodes {
        let mut acc = ts[0];
        for &t in &ts[1..] {
            acc = self.indented(acc, t);
        }
        acc
    }

    /// `t₁ ⋌ (t₂ ⋌ (t₃ ⋌ ⋯))`.
    pub fn right_fold(&mut self, ts: &[TripleNodes]) -> TripleNodes {
        let mut acc = ts[ts.len() - 1];
        for &t in ts[..ts.len() - 1].iter().rev() {
            acc = self.indented(t, acc);
        }
        acc
    }

    /// Value of node `id` on a generator word.
    pub fn eval(&mut self, id: NodeId, word: &[Gen]) -> Result<C> {
        if word.is_empty() {
            return Ok(C::one());
        }
        if let Some(v) = self.memo[id].get(word) {
            return Ok(v.clone());
        }
        let value = match self.nodes[id] {
            Node::Base { factor, state } => {
                let mut symbols = Vec::with_capacity(word.len());
                for g in word {
                    if g.factor != factor {
                        return Err(Error::UnknownGenerator);
                    }
                    symbols.push(g.symbol);
                }
                state.eval(&symbols)?
            }
            Node::CFree { phi, center } => self.eval_cfree(id, phi, center, word)?,
        };
        self.memo[id].insert(word.to_vec(), value.clone());
        Ok(value)
    }

    fn eval_cfree(&mut self, id: NodeId, phi: [NodeId; 2], center: [NodeId; 2], word: &[Gen]) -> Result<C> {
        let side = |g: &Gen| -> Result<usize> {
            if self.factors[phi[0]].binary_search(&g.factor).is_ok() {
                Ok(0)
            } else if self.factors[phi[1]].binary_search(&g.factor).is_ok() {
                Ok(1)
            } else {
                Err(Error::UnknownGenerator)
            }
        };
        let mut runs: Vec<(usize, Vec<Gen>)> = Vec::new();
        for g in word {
            let s = side(g)?;
            match runs.last_mut() {
                Some((t, run)) if *t == s => run.push(*g),
                _ => runs.push((s, vec![*g])),
            }
        }
        if runs.len() == 1 {
            return self.eval(phi[runs[0].0], word);
        }
        let n = runs.len();
        let mut p = Vec::with_capacity(n);
        let mut neg_c = Vec::with_capacity(n);
        for (s, run) in &runs {
            p.push(self.eval(phi[*s], run)?);
            neg_c.push(-self.eval(center[*s], run)?);
        }
        let mut value = C::one();
        for k in 0..n {
            value = value * (p[k].clone() + neg_c[k].clone());
        }
        let full = (1usize << n) - 1;
        for mask in 0..full {
            let mut coef = C::one();
            for (k, c) in neg_c.iter().enumerate() {
                if mask >> k & 1 == 0 {
                    coef = coef * c.clone();
                }
            }
            if coef.is_zero() {
                continue;
            }
            let sub: Vec<Gen> = runs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .flat_map(|(_, (_, r))| r.iter().copied())
                .collect();
            let v = self.eval(id, &sub)?;
            value = value - coef * v;
        }
        Ok(value)
    }

    /// Value of node `id` on an alternating word of elements, by multilinearity.
    pub fn eval_word(&mut self, id: NodeId, w: &AlternatingWord<C>) -> Result<C> {
        let mut acc = C::zero();
        for (c, word) in w.expand() {
            acc = acc + c * self.eval(id, &word)?;
        }
        Ok(acc)
    }
}

/// `(φ₁ ψ₁∗ψ₂ φ₂)(w)` for a word alternating between factors 0 and 1.
pub fn cfree_eval<C: Ring>(
    phi1: &dyn Functional<C>,
    psi1: &dyn Functional<C>,
    phi2: &dyn Functional<C>,
    psi2: &dyn Functional<C>,
    w: &AlternatingWord<C>,
) -> Result<C> {
    let mut ev = Evaluator::new();
    let (a, ac) = (ev.base(0, phi1), ev.base(0, psi1));
    let (b, bc) = (ev.base(1, phi2), ev.base(1, psi2));
    let top = ev.cfree(a, ac, b, bc);
    ev.eval_word(top, w)
}

/// A component of the left-folded indented product of `factors` (factor `k` of the
/// word refers to `factors[k]`).
pub fn indented_eval<C: Ring>(factors: &[StateTriple<C>], component: Component, w: &AlternatingWord<C>) -> Result<C> {
    let mut ev = Evaluator::new();
    let ts: Vec<TripleNodes> = factors.iter().enumerate().map(|(k, t)| ev.state_triple(k, t)).collect();
    let top = ev.left_fold(&ts);
    ev.eval_word(top.component(component), w)
}

/// The components of `kind` (see [`ProductKind::outputs`]) on `w`, where
/// `factors[k]` lists the states of factor `k`.
pub fn derived_product<C: Ring>(
    kind: ProductKind,
    factors: &[Vec<&dyn Functional<C>>],
    w: &AlternatingWord<C>,
) -> Result<Vec<C>> {
    let mut ev = Evaluator::new();
    let mut ts = Vec::with_capacity(factors.len());
    for (k, states) in factors.iter().enumerate() {
        ts.push(ev.kind_triple(kind, k, states)?);
    }
    let top = ev.left_fold(&ts);
    kind.outputs().iter().map(|&c| ev.eval_word(top.component(c), w)).collect()
}

/// Moments up to degree `n` of `x₁ + ⋯ + x_K` under the product `kind`, where
/// `x_k` generates factor `k` and has the moment sequences `inputs[k]` (one per
/// state of the kind). Returns one sequence per output component.
pub fn convolve_moments<C: Ring>(
    kind: ProductKind,
    inputs: &[Vec<MomentSequence<C>>],
    n: usize,
) -> Result<Vec<MomentSequence<C>>> {
    let tables: Vec<Vec<MultiMomentFunctional<C>>> = inputs
        .iter()
        .map(|states| states.iter().map(|m| MultiMomentFunctional::from_moments(&m.truncate(n))).collect())
        .collect();
    let mut ev = Evaluator::new();
    let mut ts = Vec::with_capacity(tables.len());
    for (k, states) in tables.iter().enumerate() {
        let refs: Vec<&dyn Functional<C>> = states.iter().map(|s| s as &dyn Functional<C>).collect();
        ts.push(ev.kind_triple(kind, k, &refs)?);
    }
    let top = ev.left_fold(&ts);
    let k = inputs.len();
    let all = words(k, n);
    let mut out = Vec::new();
    for &c in kind.outputs() {
        let mut m = vec![C::zero(); n + 1];
        for w in &all {
            let word: Vec<Gen> = w.iter().map(|&f| Gen::new(f as usize, 0)).collect();
            m[w.len()] = m[w.len()].clone() + ev.eval(top.component(c), &word)?;
        }
        out.push(MomentSequence::new(m)?);
    }
    Ok(out)
}
