//! Truncated free-product Fock space with the operators `λ_k(A)` and the
//! representations `J^I`, `J^OF` of indented and o-free products.
//!
//! Each factor is a finite matrix model on `ℂ^dim` with vacuum `e₀`; its
//! reduced space `H_k⁰` is spanned by `e₁, …, e_{dim−1}`. A basis tensor is a
//! list of `(factor, b)` with `b ≥ 1` and neighbouring factors distinct; the
//! empty list is the vacuum `ξ`, identified with `ξ_k` inside every `H_k`.
//! Tensors longer than the truncation are dropped; a word of length `n` only
//! ever reaches tensors of length `n`, so its vacuum expectation is exact once
//! `n` is at most the truncation.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::freeprod::{AlternatingWord, Gen, MultiMomentFunctional, Symbol};
use crate::kind::Component;
use crate::Rational;

/// Square matrix, row-major.
pub type Matrix = Vec<Vec<Rational>>;

pub fn identity_matrix(dim: usize) -> Matrix {
    (0..dim).map(|i| (0..dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

/// One of the three representations of a factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    /// `π`, realising φ.
    Pi,
    /// `σ`, realising ψ.
    Sigma,
    /// `ρ`, realising θ.
    Rho,
}

impl Representation {
    pub fn of_component(c: Component) -> Self {
        match c {
            Component::Phi => Representation::Pi,
            Component::Psi => Representation::Sigma,
            Component::Theta => Representation::Rho,
        }
    }
}

/// Three matrix representations of one algebra on `ℂ^dim`, with vacuum `e₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixStateModel {
    dim: usize,
    alphabet: Vec<String>,
    pi: Vec<Matrix>,
    sigma: Vec<Matrix>,
    rho: Vec<Matrix>,
}

impl MatrixStateModel {
    /// One matrix per generator in each of `pi`, `sigma`, `rho`.
    pub fn new(dim: usize, alphabet: Vec<String>, pi: Vec<Matrix>, sigma: Vec<Matrix>, rho: Vec<Matrix>) -> Result<Self> {
        let square = |m: &Matrix| m.len() == dim && m.iter().all(|r| r.len() == dim);
        let ok = dim >= 1
            && [&pi, &sigma, &rho].iter().all(|ms| ms.len() == alphabet.len() && ms.iter().all(square));
        if !ok {
            return Err(Error::ShapeMismatch);
        }
        Ok(MatrixStateModel { dim, alphabet, pi, sigma, rho })
    }

    /// The same matrices in all three slots.
    pub fn uniform(dim: usize, alphabet: Vec<String>, mats: Vec<Matrix>) -> Result<Self> {
        Self::new(dim, alphabet, mats.clone(), mats.clone(), mats)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn matrices(&self, rep: Representation) -> &[Matrix] {
        match rep {
            Representation::Pi => &self.pi,
            Representation::Sigma => &self.sigma,
            Representation::Rho => &self.rho,
        }
    }

    pub fn matrix(&self, rep: Representation, s: Symbol) -> Result<&Matrix> {
        self.matrices(rep).get(s as usize).ok_or(Error::UnknownGenerator)
    }

    /// Matrix of a generator word, `M(s₁)⋯M(s_m)`.
    pub fn word_matrix(&self, rep: Representation, w: &[Symbol]) -> Result<Matrix> {
        let mut acc = identity_matrix(self.dim);
        for &s in w {
            acc = mat_mul(&acc, self.matrix(rep, s)?);
        }
        Ok(acc)
    }

    /// The vector state `w ↦ ⟨M(w)e₀, e₀⟩` tabulated to `truncation`.
    pub fn state(&self, rep: Representation, truncation: usize) -> MultiMomentFunctional {
        MultiMomentFunctional::from_fn(self.alphabet.clone(), truncation, |w| {
            self.word_matrix(rep, w).expect("symbols come from the alphabet")[0][0].clone()
        })
    }

    /// `x ↦ [[0,1],[1,0]]` in all three slots.
    pub fn bernoulli() -> Self {
        let m = vec![vec![Rational::zero(), Rational::one()], vec![Rational::one(), Rational::zero()]];
        Self::uniform(2, vec!["x".into()], vec![m]).expect("2×2")
    }
}

/// `(factor, basis index ≥ 1)` pairs; empty means `ξ`.
pub type BasisTensor = Vec<(usize, usize)>;

/// Sparse vector of the truncated Fock space.
pub type FockVector = BTreeMap<BasisTensor, Rational>;

/// Which summand of `H_k ⊕ H^OF(k) ⊕ H^AOF(k)` a basis tensor lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Summand {
    Own,
    OFree,
    AntiOFree,
}

/// Representation used by `J` on a summand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JKind {
    /// `π` on `H_k`, `σ` on `H^OF(k)`, `ρ` on `H^AOF(k)`.
    Indented,
    /// `σ` on `H_k ⊕ H^OF(k)`, `ρ` on `H^AOF(k)`.
    OFree,
}

impl JKind {
    fn rep(self, s: Summand) -> Representation {
        match (self, s) {
            (JKind::Indented, Summand::Own) => Representation::Pi,
            (_, Summand::Own) | (_, Summand::OFree) => Representation::Sigma,
            (_, Summand::AntiOFree) => Representation::Rho,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedFockSpace {
    models: Vec<MatrixStateModel>,
    max_len: usize,
}

fn add_to(v: &mut FockVector, t: BasisTensor, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(t.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        v.remove(&t);
    }
}

pub fn vacuum() -> FockVector {
    let mut v = FockVector::new();
    v.insert(Vec::new(), Rational::one());
    v
}

impl TruncatedFockSpace {
    /// Factors in list order; that order is the one used by `H_<(k)`, `H_>(k)`.
    pub fn new(models: Vec<MatrixStateModel>, max_len: usize) -> Self {
        TruncatedFockSpace { models, max_len }
    }

    pub fn models(&self) -> &[MatrixStateModel] {
        &self.models
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// All basis tensors in order of length.
    pub fn basis(&self) -> Vec<BasisTensor> {
        let mut out = vec![Vec::new()];
        let mut layer: Vec<BasisTensor> = vec![Vec::new()];
        for _ in 0..self.max_len {
            let mut next = Vec::new();
            for t in &layer {
                for (f, m) in self.models.iter().enumerate() {
                    if t.last().is_some_and(|&(g, _)| g == f) {
                        continue;
                    }
                    for b in 1..m.dim {
                        let mut u = t.clone();
                        u.push((f, b));
                        next.push(u);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn summand(&self, k: usize, t: &BasisTensor) -> Summand {
        match t.as_slice() {
            [] => Summand::Own,
            [(i, _)] if *i == k => Summand::Own,
            [(i, _), ..] if *i < k => Summand::OFree,
            [(i, _), ..] if *i > k => Summand::AntiOFree,
            [_, (j, _), ..] if *j < k => Summand::OFree,
            _ => Summand::AntiOFree,
        }
    }

    /// `λ_k(A)` applied to one basis tensor.
    fn lambda_basis(&self, k: usize, a: &Matrix, t: &BasisTensor, c: &Rational, out: &mut FockVector) {
        let dim = self.models[k].dim;
        let (col, rest) = match t.first() {
            Some(&(i, b)) if i == k => (b, &t[1..]),
            _ => (0, &t[..]),
        };
        add_to(out, rest.to_vec(), c * &a[0][col]);
        if rest.len() < self.max_len {
            for (r, row) in a.iter().enumerate().take(dim).skip(1) {
                let mut u = Vec::with_capacity(rest.len() + 1);
                u.push((k, r));
                u.extend_from_slice(rest);
                add_to(out, u, c * &row[col]);
            }
        }
    }

    /// `λ_k(A) v`.
    pub fn lambda_apply(&self, k: usize, a: &Matrix, v: &FockVector) -> FockVector {
        let mut out = FockVector::new();
        for (t, c) in v {
            self.lambda_basis(k, a, t, c, &mut out);
        }
        out
    }

    /// Matrix of `λ_k(A)` in the order of [`Self::basis`].
    pub fn lambda_op(&self, k: usize, a: &Matrix) -> Matrix {
        let basis = self.basis();
        let index: BTreeMap<&BasisTensor, usize> = basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut m = vec![vec![Rational::zero(); basis.len()]; basis.len()];
        for (j, t) in basis.iter().enumerate() {
            let mut out = FockVector::new();
            self.lambda_basis(k, a, t, &Rational::one(), &mut out);
            for (u, c) in out {
                m[index[&u]][j] = c;
            }
        }
        m
    }

    /// `J_k(a)` for `a` a word in the generators of factor `k`.
    fn j_apply(&self, kind: JKind, k: usize, w: &[Symbol], v: &FockVector) -> Result<FockVector> {
        let model = self.models.get(k).ok_or(Error::UnknownGenerator)?;
        let mut out = FockVector::new();
        for (t, c) in v {
            let a = model.word_matrix(kind.rep(self.summand(k, t)), w)?;
            self.lambda_basis(k, &a, t, c, &mut out);
        }
        Ok(out)
    }

    /// `J(g₁)⋯J(g_n) ξ`.
    pub fn j_vector(&self, kind: JKind, word: &[Gen]) -> Result<FockVector> {
        if word.len() > self.max_len {
            return Err(Error::WordTooLong { length: word.len(), limit: self.max_len });
        }
        let mut v = vacuum();
        for g in word.iter().rev() {
            v = self.j_apply(kind, g.factor as usize, &[g.symbol], &v)?;
        }
        Ok(v)
    }

    /// `J(a₁)⋯J(a_n) ξ` for letters that are linear combinations of words.
    pub fn j_element_vector(&self, kind: JKind, word: &AlternatingWord<Rational>) -> Result<FockVector> {
        let length: usize = word.letters().iter().map(|(_, e)| e.degree()).sum();
        if length > self.max_len {
            return Err(Error::WordTooLong { length, limit: self.max_len });
        }
        let mut v = vacuum();
        for (k, el) in word.letters().iter().rev() {
            let mut next = FockVector::new();
            for (c, w) in el.terms() {
                for (t, x) in self.j_apply(kind, *k, w, &v)? {
                    add_to(&mut next, t, x * c);
                }
            }
            v = next;
        }
        Ok(v)
    }

    /// `⟨J^I(g₁)⋯J^I(g_n)ξ, ξ⟩`.
    pub fn j_indented(&self, word: &[Gen]) -> Result<Rational> {
        Ok(vacuum_coeff(&self.j_vector(JKind::Indented, word)?))
    }

    /// `⟨J^OF(g₁)⋯J^OF(g_n)ξ, ξ⟩`.
    pub fn j_ofree(&self, word: &[Gen]) -> Result<Rational> {
        Ok(vacuum_coeff(&self.j_vector(JKind::OFree, word)?))
    }

    /// `P_{H_k⁰}(A e₀)` as a vector of `H_k⁰`, indices `1..dim`.
    pub fn reduced_image(&self, k: usize, a: &Matrix) -> Vec<Rational> {
        (1..self.models[k].dim).map(|r| a[r][0].clone()).collect()
    }
}

pub fn vacuum_coeff(v: &FockVector) -> Rational {
    v.get(&Vec::new()).cloned().unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests;
