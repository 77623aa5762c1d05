//! Cumulants as coefficients of `N` in moments of `N.X = X⁽¹⁾ + ⋯ + X⁽ᴺ⁾`, with
//! the copies indented independent.
//!
//! Expanding `φ(N.X₁ ⋯ N.X_n)` over copy assignments `c: [n] → [N]` and grouping
//! by image, an assignment whose image has `k` elements contributes the same as
//! the order-preserving relabelling onto `[k]` evaluated in the `k`-fold product
//! (restricting an indented product to a subfamily of factors gives the product of
//! the subfamily). Hence `φ(N.X₁ ⋯ N.X_n) = Σ_k binom(N, k) a_k` with `a_k` the sum
//! over surjections onto `[k]`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{CumulantKind, CumulantTable, Cumulants};
use crate::error::{Error, Result};
use crate::freeprod::{words, Evaluator, Gen, StateTriple, Symbol, TripleNodes};
use crate::kind::Component;
use crate::partitions::{enumerate, intervals, PartitionClass};
use crate::poly::Poly;
use crate::scalar::{binomial, int, Rational};

/// Dot-operation moments of one state triple.
pub struct DotEngine<'a> {
    triple: &'a StateTriple,
    ev: Evaluator<'a, Rational>,
    /// `folds[k − 1]` is the left-folded product of `k` copies.
    folds: Vec<TripleNodes>,
}

fn surjections(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(pos: usize, n: usize, k: usize, c: &mut Vec<usize>, used: &mut Vec<usize>, unused: usize, f: &mut impl FnMut(&[usize])) {
        if pos == n {
            if unused == 0 {
                f(c);
            }
            return;
        }
        if n - pos < unused {
            return;
        }
        for j in 0..k {
            let fresh = used[j] == 0;
            used[j] += 1;
            c.push(j);
            go(pos + 1, n, k, c, used, if fresh { unused - 1 } else { unused }, f);
            c.pop();
            used[j] -= 1;
        }
    }
    go(0, n, k, &mut Vec::with_capacity(n), &mut vec![0; k], k, f);
}

impl<'a> DotEngine<'a> {
    pub fn new(triple: &'a StateTriple) -> Self {
        DotEngine { triple, ev: Evaluator::new(), folds: Vec::new() }
    }

    fn fold(&mut self, k: usize) -> TripleNodes {
        while self.folds.len() < k {
            let j = self.folds.len();
            let t = self.ev.state_triple(j, self.triple);
            let next = match self.folds.last() {
                Some(&prev) => self.ev.indented(prev, t),
                None => t,
            };
            self.folds.push(next);
        }
        self.folds[k - 1]
    }

    fn check(&self, word: &[Symbol]) -> Result<()> {
        if word.len() > self.triple.truncation() {
            return Err(Error::DegreeOverflow { degree: word.len(), truncation: self.triple.truncation() });
        }
        Ok(())
    }

    /// `a_0, …, a_n`: `a_k` sums the `component` values of `X_{w₁}^{(c₁)} ⋯` over
    /// surjections `c` onto `k` copies.
    pub fn surjection_sums(&mut self, word: &[Symbol], component: Component) -> Result<Vec<Rational>> {
        self.check(word)?;
        let n = word.len();
        let mut out = vec![Rational::zero(); n + 1];
        if n == 0 {
            out[0] = Rational::one();
            return Ok(out);
        }
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            let node = self.fold(k).component(component);
            let mut acc = Rational::zero();
            let mut err = None;
            let ev = &mut self.ev;
            surjections(n, k, &mut |c| {
                if err.is_some() {
                    return;
                }
                let g: Vec<Gen> = c.iter().zip(word).map(|(&j, &s)| Gen::new(j, s)).collect();
                match ev.eval(node, &g) {
                    Ok(v) => acc += v,
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            *slot = acc;
        }
        Ok(out)
    }

    /// `component(N.X_{w₁} ⋯ N.X_{w_n})` for `N = copies`.
    pub fn moment(&mut self, word: &[Symbol], component: Component, copies: usize) -> Result<Rational> {
        let a = self.surjection_sums(word, component)?;
        let n = int(copies as i64);
        Ok(a.iter().enumerate().map(|(k, ak)| binomial(&n, k) * ak).sum())
    }

    /// The same moment, expanding over all `copiesⁿ` assignments in the
    /// `copies`-fold product. Exponential; meant as a check.
    pub fn moment_by_expansion(&mut self, word: &[Symbol], component: Component, copies: usize) -> Result<Rational> {
        self.check(word)?;
        if word.is_empty() {
            return Ok(Rational::one());
        }
        if copies == 0 {
            return Ok(Rational::zero());
        }
        let node = self.fold(copies).component(component);
        let mut total = Rational::zero();
        let mut c = vec![0usize; word.len()];
        loop {
            let g: Vec<Gen> = c.iter().zip(word).map(|(&j, &s)| Gen::new(j, s)).collect();
            total += self.ev.eval(node, &g)?;
            let mut i = 0;
            while i < c.len() && c[i] + 1 == copies {
                c[i] = 0;
                i += 1;
            }
            if i == c.len() {
                break;
            }
            c[i] += 1;
        }
        Ok(total)
    }

    /// The moment as a polynomial in `N`, interpolated through `N = 0, …, n`.
    pub fn moment_poly(&mut self, word: &[Symbol], component: Component) -> Result<Poly<Rational>> {
        let a = self.surjection_sums(word, component)?;
        let points: Vec<(Rational, Rational)> = (0..=word.len())
            .map(|n| {
                let n = int(n as i64);
                let v = a.iter().enumerate().map(|(k, ak)| binomial(&n, k) * ak).sum();
                (n, v)
            })
            .collect();
        Ok(Poly::interpolate(&points))
    }

    /// Coefficient of `N`.
    pub fn cumulant(&mut self, word: &[Symbol], component: Component) -> Result<Rational> {
        Ok(self.moment_poly(word, component)?.coeff(1))
    }
}

/// `K_n` of the given kind (`component` φ, ψ, θ for I, OF, AOF) on a word.
pub fn dot_cumulant(triple: &StateTriple, word: &[Symbol], component: Component) -> Result<Rational> {
    DotEngine::new(triple).cumulant(word, component)
}

/// All three cumulant tables up to degree `n` via the dot operation.
pub fn dot_cumulants(triple: &StateTriple, n: usize) -> Result<Cumulants> {
    let mut engine = DotEngine::new(triple);
    let alphabet = triple.alphabet().to_vec();
    let mut tables: [BTreeMap<Vec<Symbol>, Rational>; 3] = Default::default();
    for w in words(alphabet.len(), n).into_iter().skip(1) {
        for kind in CumulantKind::ALL {
            let v = engine.cumulant(&w, kind.component())?;
            tables[kind.index()].insert(w.clone(), v);
        }
    }
    let [i, of, aof] = tables;
    Ok(Cumulants {
        indented: CumulantTable::new(CumulantKind::I, alphabet.clone(), n, i)?,
        ofree: CumulantTable::new(CumulantKind::OF, alphabet.clone(), n, of)?,
        antiofree: CumulantTable::new(CumulantKind::AOF, alphabet, n, aof)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceReport {
    pub checked: usize,
    /// Words and components where the two sides differ.
    pub failures: Vec<(Vec<Symbol>, Component)>,
}

impl RecurrenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct PolyCache<'e, 'a> {
    engine: &'e mut DotEngine<'a>,
    polys: BTreeMap<(Vec<Symbol>, Component), Poly<Rational>>,
}

impl PolyCache<'_, '_> {
    fn get(&mut self, word: Vec<Symbol>, c: Component) -> Result<Poly<Rational>> {
        if let Some(p) = self.polys.get(&(word.clone(), c)) {
            return Ok(p.clone());
        }
        let p = self.engine.moment_poly(&word, c)?;
        self.polys.insert((word, c), p.clone());
        Ok(p)
    }
}

/// Check, for every word of length `1..=n`, that `d/dt` of the dot moment
/// polynomial `φ_t(X₁ ⋯ X_n)` (and likewise for ψ, θ) equals the sum over
/// intervals `V` and `π ∈ NCIO(V)` of products of lower moment polynomials with a
/// cumulant of the outermost block.
pub fn recurrence_check(triple: &StateTriple, n: usize) -> Result<RecurrenceReport> {
    let mut engine = DotEngine::new(triple);
    let mut cache = PolyCache { engine: &mut engine, polys: BTreeMap::new() };
    let mut report = RecurrenceReport { checked: 0, failures: Vec::new() };
    for w in words(triple.alphabet().len(), n).into_iter().skip(1) {
        let len = w.len();
        let sub = |idx: &[usize]| -> Vec<Symbol> { idx.iter().map(|&i| w[i - 1]).collect() };
        for c in Component::ALL {
            let lhs = cache.get(w.clone(), c)?.derivative();
            let mut rhs = Poly::zero();
            for (a, b) in intervals(len) {
                let v: Vec<usize> = (a..=b).collect();
                let c1: Vec<usize> = (1..a).collect();
                let c2: Vec<usize> = (b + 1..=len).collect();
                let both: Vec<usize> = c1.iter().chain(&c2).copied().collect();
                for p in enumerate(PartitionClass::NCIO, &v) {
                    let blocks: Vec<&[usize]> = p.ordered_blocks().collect();
                    let (last, rest) = blocks.split_last().expect("nonempty");
                    let inner_state = if c == Component::Theta { Component::Psi } else { Component::Theta };
                    let mut prod = Poly::one();
                    for blk in rest {
                        prod = prod * cache.get(sub(blk), inner_state)?;
                    }
                    let last = sub(last);
                    let term = match c {
                        Component::Phi => {
                            let k_of = cache_cumulant(&mut cache, &last, Component::Psi)?;
                            let k_i = cache_cumulant(&mut cache, &last, Component::Phi)?;
                            let p_both = cache.get(sub(&both), Component::Phi)?;
                            let split = cache.get(sub(&c1), Component::Phi)? * cache.get(sub(&c2), Component::Phi)?;
                            ((p_both - split.clone()).scale(&k_of) + split.scale(&k_i)) * prod
                        }
                        Component::Psi | Component::Theta => {
                            let k = cache_cumulant(&mut cache, &last, c)?;
                            cache.get(sub(&both), c)?.scale(&k) * prod
                        }
                    };
                    rhs = rhs + term;
                }
            }
            report.checked += 1;
            if lhs != rhs {
                report.failures.push((w.clone(), c));
            }
        }
    }
    Ok(report)
}

fn cache_cumulant(cache: &mut PolyCache<'_, '_>, word: &[Symbol], c: Component) -> Result<Rational> {
    Ok(cache.get(word.to_vec(), c)?.coeff(1))
}
