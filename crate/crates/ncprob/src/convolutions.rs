//! Additive and multiplicative convolutions of single-variable moment data,
//! computed by transform arithmetic at a fixed truncation degree.
//!
//! Additive results live on F-transforms `F(z) = z + c₀ + c₁z⁻¹ + …`,
//! multiplicative ones on η- and T-transforms of moment data on the circle.
//! Everything is formal: a "measure" is its moment sequence `m₀ = 1, m₁, …, m_N`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::cumulants::single_cumulants;
use crate::error::{Error, Result};
use crate::freeprod::{Evaluator, Functional, Gen, MultiMomentFunctional};
use crate::kind::{Component, ProductKind, Slot};
use crate::scalar::{binomial, int, pow, Field, Ring};
use crate::series::{
    cfree_phi_transform, comp_inverse, compose, eta_from_moments, eta_inverse, eta_to_moments, f_to_moments,
    moments_from_t, moments_from_t_pair, moments_to_f, t_transform, EtaSeries, FSeries, MomentSequence,
    PowerSeries,
};
use crate::Rational;

/// Moment data `(λ, μ, ν)` for the three states of an indented triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureTriple {
    pub lambda: MomentSequence,
    pub mu: MomentSequence,
    pub nu: MomentSequence,
}

impl MeasureTriple {
    /// Truncates all three to the smallest degree among them.
    pub fn new(lambda: MomentSequence, mu: MomentSequence, nu: MomentSequence) -> Self {
        let n = lambda.degree().min(mu.degree()).min(nu.degree());
        MeasureTriple { lambda: lambda.truncate(n), mu: mu.truncate(n), nu: nu.truncate(n) }
    }

    pub fn delta(n: usize) -> Self {
        MeasureTriple { lambda: MomentSequence::delta(n), mu: MomentSequence::delta(n), nu: MomentSequence::delta(n) }
    }

    pub fn degree(&self) -> usize {
        self.lambda.degree()
    }

    pub fn component(&self, c: Component) -> &MomentSequence {
        match c {
            Component::Phi => &self.lambda,
            Component::Psi => &self.mu,
            Component::Theta => &self.nu,
        }
    }

    pub fn truncate(&self, n: usize) -> Self {
        MeasureTriple { lambda: self.lambda.truncate(n), mu: self.mu.truncate(n), nu: self.nu.truncate(n) }
    }
}

fn common_degree<'a>(ms: impl IntoIterator<Item = &'a MomentSequence>) -> usize {
    ms.into_iter().map(|m| m.degree()).min().unwrap_or(0)
}

fn f_of(m: &MomentSequence, n: usize) -> FSeries {
    moments_to_f(&m.truncate(n))
}

fn free_f(f1: &FSeries, f2: &FSeries) -> FSeries {
    let n = f1.degree();
    comp_inverse(&comp_inverse(f1).sum_minus(&comp_inverse(f2), &FSeries::identity(n)))
}

/// `F_{μ₁}∘F_{ν₁}⁻¹∘F + F_{μ₂}∘F_{ν₂}⁻¹∘F − F` where `F = F_{ν₁⊞ν₂}`.
fn three_term_f(fm1: &FSeries, fn1: &FSeries, fm2: &FSeries, fn2: &FSeries) -> FSeries {
    let fnu = free_f(fn1, fn2);
    let a = compose(fm1, &compose(&comp_inverse(fn1), &fnu));
    let b = compose(fm2, &compose(&comp_inverse(fn2), &fnu));
    a.sum_minus(&b, &fnu)
}

/// `ν₁ ⊞ ν₂`.
pub fn free_additive(nu1: &MomentSequence, nu2: &MomentSequence) -> MomentSequence {
    let n = common_degree([nu1, nu2]);
    f_to_moments(&free_f(&f_of(nu1, n), &f_of(nu2, n)))
}

/// Boolean convolution, `F₁ + F₂ − z`.
pub fn boolean_additive(mu1: &MomentSequence, mu2: &MomentSequence) -> MomentSequence {
    let n = common_degree([mu1, mu2]);
    f_to_moments(&f_of(mu1, n).sum_minus(&f_of(mu2, n), &FSeries::identity(n)))
}

/// Monotone convolution `μ₁ ▷ μ₂`, `F_{μ₁}∘F_{μ₂}`.
pub fn monotone_additive(mu1: &MomentSequence, mu2: &MomentSequence) -> MomentSequence {
    let n = common_degree([mu1, mu2]);
    f_to_moments(&compose(&f_of(mu1, n), &f_of(mu2, n)))
}

/// c-free convolution of pairs `(μ, ν)`, through addition of c-free φ-transforms.
pub fn cfree_additive(
    pair1: (&MomentSequence, &MomentSequence),
    pair2: (&MomentSequence, &MomentSequence),
) -> (MomentSequence, MomentSequence) {
    let n = common_degree([pair1.0, pair1.1, pair2.0, pair2.1]);
    let (fm1, fn1) = (f_of(pair1.0, n), f_of(pair1.1, n));
    let (fm2, fn2) = (f_of(pair2.0, n), f_of(pair2.1, n));
    let fnu = free_f(&fn1, &fn2);
    let phi = cfree_phi_transform(&fm1, &fn1).add(&cfree_phi_transform(&fm2, &fn2));
    (f_to_moments(&phi.apply(&fnu)), f_to_moments(&fnu))
}

/// The measure `μ₁ ν₁⊞ν₂ μ₂` of a c-free pair convolution, by the three-term
/// composition formula instead of φ-transforms.
pub fn cfree_three_term(
    mu1: &MomentSequence,
    nu1: &MomentSequence,
    mu2: &MomentSequence,
    nu2: &MomentSequence,
) -> MomentSequence {
    let n = common_degree([mu1, nu1, mu2, nu2]);
    f_to_moments(&three_term_f(&f_of(mu1, n), &f_of(nu1, n), &f_of(mu2, n), &f_of(nu2, n)))
}

/// o-free convolution `(μ₁ ν₁⊞μ₂ μ₂, ν₁ ν₁⊞μ₂ ν₂)` of pairs `(μ, ν)`.
pub fn ofree_additive(
    pair1: (&MomentSequence, &MomentSequence),
    pair2: (&MomentSequence, &MomentSequence),
) -> (MomentSequence, MomentSequence) {
    let n = common_degree([pair1.0, pair1.1, pair2.0, pair2.1]);
    let (fm1, fn1) = (f_of(pair1.0, n), f_of(pair1.1, n));
    let (fm2, fn2) = (f_of(pair2.0, n), f_of(pair2.1, n));
    (f_to_moments(&three_term_f(&fm1, &fn1, &fm2, &fm2)), f_to_moments(&three_term_f(&fn1, &fn1, &fn2, &fm2)))
}

/// Indented convolution of triples `(λ, μ, ν)`. The lower pair is `(ν₁, μ₂)`.
pub fn indented_additive(t1: &MeasureTriple, t2: &MeasureTriple) -> MeasureTriple {
    let n = t1.degree().min(t2.degree());
    let [l1, m1, n1] = [&t1.lambda, &t1.mu, &t1.nu].map(|m| f_of(m, n));
    let [l2, m2, n2] = [&t2.lambda, &t2.mu, &t2.nu].map(|m| f_of(m, n));
    MeasureTriple {
        lambda: f_to_moments(&three_term_f(&l1, &n1, &l2, &m2)),
        mu: f_to_moments(&three_term_f(&m1, &n1, &m2, &m2)),
        nu: f_to_moments(&three_term_f(&n1, &n1, &n2, &m2)),
    }
}

/// Left fold of [`indented_additive`].
pub fn indented_fold(ts: &[MeasureTriple]) -> MeasureTriple {
    let mut it = ts.iter();
    let first = it.next().expect("at least one triple").clone();
    it.fold(first, |acc, t| indented_additive(&acc, t))
}

/// Places the supplied measures of one factor into the slots of an indented triple.
fn kind_measure_triple(kind: ProductKind, states: &[MomentSequence], n: usize) -> Result<MeasureTriple> {
    if states.len() != kind.arity() {
        return Err(Error::Arity { expected: kind.arity(), found: states.len() });
    }
    let [a, b, c] = kind.slots().map(|s| match s {
        Slot::Input(i) => states[i].truncate(n),
        Slot::Delta => MomentSequence::delta(n),
    });
    Ok(MeasureTriple { lambda: a, mu: b, nu: c })
}

/// Additive convolution of any product kind, one moment sequence per output
/// state of the kind. Each factor supplies `kind.arity()` measures.
pub fn derived_additive(kind: ProductKind, inputs: &[Vec<MomentSequence>]) -> Result<Vec<MomentSequence>> {
    if inputs.is_empty() {
        return Err(Error::Arity { expected: kind.arity(), found: 0 });
    }
    let n = common_degree(inputs.iter().flatten());
    let ts = inputs.iter().map(|s| kind_measure_triple(kind, s, n)).collect::<Result<Vec<_>>>()?;
    let t = indented_fold(&ts);
    Ok(kind.outputs().iter().map(|&c| t.component(c).clone()).collect())
}

/// `ν₁ ⊠ ν₂` through `T_{ν₁⊠ν₂} = T_{ν₁} T_{ν₂}`.
pub fn mult_free<C: Field>(nu1: &MomentSequence<C>, nu2: &MomentSequence<C>) -> Result<MomentSequence<C>> {
    let t = t_transform(nu1, nu1)?.mul(&t_transform(nu2, nu2)?);
    moments_from_t(&t)
}

/// Multiplicative c-free convolution of pairs `(μ, ν)` through products of
/// T-transforms.
pub fn mult_cfree<C: Field>(
    pair1: (&MomentSequence<C>, &MomentSequence<C>),
    pair2: (&MomentSequence<C>, &MomentSequence<C>),
) -> Result<(MomentSequence<C>, MomentSequence<C>)> {
    let t_nu = t_transform(pair1.1, pair1.1)?.mul(&t_transform(pair2.1, pair2.1)?);
    let t_mu_nu = t_transform(pair1.0, pair1.1)?.mul(&t_transform(pair2.0, pair2.1)?);
    Ok((moments_from_t_pair(&t_mu_nu, &t_nu)?, moments_from_t(&t_nu)?))
}

/// `η_{μ₁}∘η_{ν₁}⁻¹∘η`.
fn eta_route<C: Field>(mu: &MomentSequence<C>, nu: &MomentSequence<C>, eta: &EtaSeries<C>) -> Result<EtaSeries<C>> {
    let n = eta.degree();
    let e_mu = eta_from_moments(&mu.truncate(n));
    let e_nu_inv = eta_inverse(&eta_from_moments(&nu.truncate(n)))?;
    Ok(e_mu.compose(&e_nu_inv.compose(eta)))
}

/// `μ₁ ν₁⊠ν₂ μ₂` from
/// `η = [η_{μ₁}∘η_{ν₁}⁻¹∘η_ν][η_{μ₂}∘η_{ν₂}⁻¹∘η_ν] / η_ν` with `ν = ν₁⊠ν₂`.
pub fn mult_cfree_eta<C: Field>(
    mu1: &MomentSequence<C>,
    nu1: &MomentSequence<C>,
    mu2: &MomentSequence<C>,
    nu2: &MomentSequence<C>,
) -> Result<MomentSequence<C>> {
    let nu = mult_free(nu1, nu2)?;
    let n = [mu1.degree(), mu2.degree(), nu.degree()].into_iter().min().unwrap_or(0);
    let eta_nu = eta_from_moments(&nu.truncate(n));
    let a = eta_route(mu1, nu1, &eta_nu)?;
    let b = eta_route(mu2, nu2, &eta_nu)?;
    // every factor starts at z; divide each by z first
    let num = a.series().shift_down()?.mul(&b.series().shift_down()?);
    let q = num.div(&eta_nu.series().shift_down()?)?;
    Ok(eta_to_moments(&EtaSeries::from_series(q.shift_up())?))
}

/// Multiplicative o-free convolution `(μ₁ ν₁⊠μ₂ μ₂, ν₁ ν₁⊠μ₂ ν₂)`.
///
/// The first component needs `m₁(ν₁) ≠ 0`, the second `m₁(μ₂) ≠ 0`.
pub fn mult_ofree<C: Field>(
    pair1: (&MomentSequence<C>, &MomentSequence<C>),
    pair2: (&MomentSequence<C>, &MomentSequence<C>),
) -> Result<(MomentSequence<C>, MomentSequence<C>)> {
    let lower = mult_free(pair1.1, pair2.0)?;
    let eta = eta_from_moments(&lower);
    let mu = eta_route(pair1.0, pair1.1, &eta)?;
    let nu = eta_route(pair2.1, pair2.0, &eta)?;
    Ok((eta_to_moments(&mu), eta_to_moments(&nu)))
}

/// Moments `φ((u₁u₂⋯u_K)ⁿ)`, `n ≤ degree`, of the product of one unitary-type
/// variable per factor, evaluated by word expansion under the given product kind.
/// Only the positive moments of each factor enter.
pub fn multiplicative_moments<C: Ring>(
    kind: ProductKind,
    inputs: &[Vec<MomentSequence<C>>],
    degree: usize,
) -> Result<Vec<MomentSequence<C>>> {
    let tables: Vec<Vec<MultiMomentFunctional<C>>> =
        inputs.iter().map(|s| s.iter().map(MultiMomentFunctional::from_moments).collect()).collect();
    let mut ev = Evaluator::new();
    let mut ts = Vec::with_capacity(tables.len());
    for (k, states) in tables.iter().enumerate() {
        let refs: Vec<&dyn Functional<C>> = states.iter().map(|s| s as &dyn Functional<C>).collect();
        ts.push(ev.kind_triple(kind, k, &refs)?);
    }
    let top = ev.left_fold(&ts);
    let k = inputs.len();
    let mut out = Vec::new();
    for &c in kind.outputs() {
        let mut m = vec![C::one()];
        for p in 1..=degree {
            let word: Vec<Gen> = (0..p * k).map(|i| Gen::new(i % k, 0)).collect();
            m.push(ev.eval(top.component(c), &word)?);
        }
        out.push(MomentSequence::new(m)?);
    }
    Ok(out)
}

/// Kesten triple: `F(z) = z[1 + Σ_{k≥1} a·C(1/2,k)(−2)^k s^{k−1} z^{−2k}]` with
/// `s = β² + γ²` and `a = α², β², γ²` for `λ, μ, ν`.
///
/// For `s = 0` the λ-component is the symmetric two-point law of variance α².
pub fn kesten_triple(alpha2: &Rational, beta2: &Rational, gamma2: &Rational, n: usize) -> MeasureTriple {
    let s = beta2 + gamma2;
    let half = Rational::new(1.into(), 2.into());
    let one = |a: &Rational| {
        let mut h = vec![Rational::zero(); n + 1];
        h[0] = int(1);
        for k in 1..=n / 2 {
            h[2 * k] = a * binomial(&half, k) * pow(&int(-2), k) * pow(&s, k - 1);
        }
        f_to_moments(&FSeries::from_h(PowerSeries::new(h)).expect("h₀ = 1"))
    };
    MeasureTriple { lambda: one(alpha2), mu: one(beta2), nu: one(gamma2) }
}

/// Sample sizes of the convergence check.
pub const CLT_STEPS: [usize; 3] = [4, 16, 64];

/// Moment degree of the convergence check.
pub const CLT_MOMENT_DEGREE: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CltRow {
    pub n: usize,
    pub component: Component,
    pub k: usize,
    pub moment: Rational,
    pub kesten_moment: Rational,
    pub abs_err: Rational,
}

#[derive(Clone, Debug)]
pub struct CltReport {
    /// `K_1..K_N` of the Kesten triple, as `[I, OF, AOF]`.
    pub cumulants: [Vec<Rational>; 3],
    pub second_cumulants_match: bool,
    pub higher_cumulants_vanish: bool,
    pub rows: Vec<CltRow>,
    /// Largest `|Δm_k|` over components and `k` for each entry of [`CLT_STEPS`].
    pub max_errors: Vec<Rational>,
    /// Max error strictly decreases and no single `|Δm_k|` grows.
    pub errors_decrease: bool,
}

impl CltReport {
    pub fn passed(&self) -> bool {
        self.second_cumulants_match && self.higher_cumulants_vanish && self.errors_decrease
    }
}

/// Symmetric two-point data of variance `a/n`.
fn scaled_two_point(a: &Rational, n: usize, degree: usize) -> MomentSequence {
    let v = a / int(n as i64);
    MomentSequence::from_fn(degree, |k| if k % 2 == 0 { pow(&v, k / 2) } else { Rational::zero() })
}

/// Cumulant check of the Kesten triple up to degree `degree`, and convergence
/// of `n`-fold indented convolutions of scaled two-point triples.
pub fn clt_verify(alpha2: &Rational, beta2: &Rational, gamma2: &Rational, degree: usize) -> Result<CltReport> {
    let limit = kesten_triple(alpha2, beta2, gamma2, degree.max(CLT_MOMENT_DEGREE));
    let t = limit.truncate(degree);
    let cumulants = single_cumulants(&t.lambda, &t.mu, &t.nu, degree)?;
    let expected = [alpha2, beta2, gamma2];
    let second_cumulants_match = degree < 2 || (0..3).all(|i| &cumulants[i][1] == expected[i]);
    let higher_cumulants_vanish =
        cumulants.iter().all(|ks| ks.iter().enumerate().all(|(i, k)| i == 1 || k.is_zero()));

    let d = CLT_MOMENT_DEGREE;
    let mut rows = Vec::new();
    let mut max_errors = Vec::new();
    let mut per_step: Vec<Vec<Rational>> = Vec::new();
    for &n in &CLT_STEPS {
        let one = MeasureTriple {
            lambda: scaled_two_point(alpha2, n, d),
            mu: scaled_two_point(beta2, n, d),
            nu: scaled_two_point(gamma2, n, d),
        };
        let sum = indented_fold(&vec![one; n]);
        let mut errs = Vec::new();
        for c in Component::ALL {
            for k in 1..=d {
                let moment = sum.component(c).get(k).clone();
                let kesten_moment = limit.component(c).get(k).clone();
                let abs_err = (&moment - &kesten_moment).abs();
                errs.push(abs_err.clone());
                rows.push(CltRow { n, component: c, k, moment, kesten_moment, abs_err });
            }
        }
        max_errors.push(errs.iter().max().cloned().unwrap_or_else(Rational::zero));
        per_step.push(errs);
    }
    let strictly = max_errors.windows(2).all(|w| w[1] < w[0]);
    let monotone = per_step.windows(2).all(|w| w[1].iter().zip(&w[0]).all(|(b, a)| b <= a));
    Ok(CltReport {
        cumulants,
        second_cumulants_match,
        higher_cumulants_vanish,
        rows,
        max_errors,
        errors_decrease: strictly && monotone,
    })
}

#[cfg(test)]
mod tests;
