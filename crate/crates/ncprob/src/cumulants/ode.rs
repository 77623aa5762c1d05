//! Single-variable route: the F-transforms of `(λ, μ, ν)` flow from `z` at `t = 0`
//! to the distributions with the given cumulants at `t = 1`.
//!
//! With `w = 1/z`, `F(t, z) = z + Σ_j c_j(t) z^{−j}` is stored as
//! `h = 1 + c₀w + c₁w² + ⋯` with polynomial coefficients in `t`. The right-hand
//! sides' `w^j` coefficients only involve `c_i` for `i < j`, so each `c_j` is the
//! integral from 0 of an already known polynomial.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::scalar::{int, Rational};
use crate::series::{FSeries, PowerSeries};

type TSeries = PowerSeries<Poly<Rational>>;

/// `A_λ`, `B_μ`, `C_ν` given by their cumulants: `A_λ(z) = −Σ K_n^I z^{1−n}` and
/// likewise with `K^OF`, `K^AOF`. Entry `k − 1` holds `K_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantGeneratingSeries {
    pub a_lambda: Vec<Rational>,
    pub b_mu: Vec<Rational>,
    pub c_nu: Vec<Rational>,
}

impl CumulantGeneratingSeries {
    pub fn new(ki: Vec<Rational>, kof: Vec<Rational>, kaof: Vec<Rational>) -> Self {
        CumulantGeneratingSeries { a_lambda: ki, b_mu: kof, c_nu: kaof }
    }
}

/// Which pair of equations drives `F_μ` and `F_ν`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OdeSystem {
    /// `∂F_μ = (B∘F_ν) ∂_z F_μ`, `∂F_ν = (C∘F_μ) ∂_z F_ν`.
    Primary,
    /// `∂F_μ = B∘F_μ − C∘F_μ + (C∘F_μ) ∂_z F_μ` and its mirror for `ν`.
    Alternative,
}

/// Coefficients of `h_λ, h_μ, h_ν` as polynomials in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdeFlow {
    pub lambda: Vec<Poly<Rational>>,
    pub mu: Vec<Poly<Rational>>,
    pub nu: Vec<Poly<Rational>>,
}

impl OdeFlow {
    /// `F_λ, F_μ, F_ν` at time `t`.
    pub fn at(&self, t: &Rational) -> [FSeries; 3] {
        let eval = |h: &[Poly<Rational>]| FSeries::from_coeffs(h[1..].iter().map(|p| p.eval(t)).collect());
        [eval(&self.lambda), eval(&self.mu), eval(&self.nu)]
    }
}

fn constant_poly(c: &Rational) -> Poly<Rational> {
    Poly::constant(c.clone())
}

/// `X∘F` for `X(z) = −Σ K_m z^{1−m}`, using `1/F = w/h`.
fn apply_generator(k: &[Rational], h: &TSeries, n: usize) -> TSeries {
    let mut outer = vec![Poly::zero(); n + 1];
    for (m, km) in k.iter().enumerate().take(n + 1) {
        outer[m] = constant_poly(&-km.clone());
    }
    let g = h.recip_unit().expect("h has constant term 1").shift_up().truncate(n);
    PowerSeries::new(outer).compose(&g).expect("1/F has no constant term")
}

/// `∂_z F = 1 − Σ_{j≥1} j c_j w^{j+1}`.
fn dz(h: &TSeries, n: usize) -> TSeries {
    let mut out = vec![Poly::zero(); n + 1];
    out[0] = Poly::one();
    for j in 1..n {
        out[j + 1] = h.coeff(j + 1).scale(&int(-(j as i64)));
    }
    PowerSeries::new(out)
}

/// Solve the flow with `F_ρ(0, z) = z` to truncation degree `n` (moments up to `n`).
pub fn ode_flow(gen: &CumulantGeneratingSeries, n: usize, system: OdeSystem) -> OdeFlow {
    let start = || {
        let mut h = vec![Poly::zero(); n + 1];
        h[0] = Poly::one();
        h
    };
    let (mut hl, mut hm, mut hn) = (start(), start(), start());
    for j in 0..n {
        let (sl, sm, sn) = (PowerSeries::new(hl.clone()), PowerSeries::new(hm.clone()), PowerSeries::new(hn.clone()));
        let a_mu = apply_generator(&gen.a_lambda, &sm, n);
        let c_mu = apply_generator(&gen.c_nu, &sm, n);
        let b_nu = apply_generator(&gen.b_mu, &sn, n);
        let dl = a_mu.sub(&c_mu).add(&c_mu.mul(&dz(&sl, n)));
        let (dm, dn) = match system {
            OdeSystem::Primary => (b_nu.mul(&dz(&sm, n)), c_mu.mul(&dz(&sn, n))),
            OdeSystem::Alternative => {
                let b_mu = apply_generator(&gen.b_mu, &sm, n);
                let c_nu = apply_generator(&gen.c_nu, &sn, n);
                (
                    b_mu.sub(&c_mu).add(&c_mu.mul(&dz(&sm, n))),
                    c_nu.sub(&b_nu).add(&b_nu.mul(&dz(&sn, n))),
                )
            }
        };
        hl[j + 1] = dl.coeff(j).integral();
        hm[j + 1] = dm.coeff(j).integral();
        hn[j + 1] = dn.coeff(j).integral();
    }
    OdeFlow { lambda: hl, mu: hm, nu: hn }
}

/// `F_λ, F_μ, F_ν` at time `t` from the primary system.
pub fn ode_moments(gen: &CumulantGeneratingSeries, t: &Rational, n: usize) -> [FSeries; 3] {
    ode_flow(gen, n, OdeSystem::Primary).at(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::series::f_to_moments;

    #[test]
    fn semicircle_at_time_one() {
        let k2 = q(3, 2);
        let k = vec![int(0), k2.clone(), int(0), int(0)];
        let gen = CumulantGeneratingSeries::new(k.clone(), k.clone(), k);
        let [l, m, nu] = ode_moments(&gen, &int(1), 4);
        for f in [l, m, nu] {
            let mom = f_to_moments(&f);
            assert_eq!(mom.moments(), &[int(1), int(0), k2.clone(), int(0), int(2) * k2.clone() * k2.clone()]);
        }
    }

    #[test]
    fn mean_flows_linearly() {
        let gen = CumulantGeneratingSeries::new(vec![int(2)], vec![int(3)], vec![int(5)]);
        let flow = ode_flow(&gen, 1, OdeSystem::Primary);
        assert_eq!(flow.lambda[1], Poly::new(vec![int(0), int(-2)]));
        assert_eq!(flow.mu[1], Poly::new(vec![int(0), int(-3)]));
        assert_eq!(flow.nu[1], Poly::new(vec![int(0), int(-5)]));
    }
}
