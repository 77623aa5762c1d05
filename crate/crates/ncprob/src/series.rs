//! Truncated formal power series and the analytic transforms built on them.
//!
//! Everything here works with exact scalars at a fixed truncation degree. When two
//! inputs carry different truncations the result is exact to the smaller one.
//!
//! Series "at infinity" such as `F(z) = z + c₀ + c₁/z + …` are stored through the
//! substitution `w = 1/z`, so that composition of F-transforms becomes ordinary
//! composition of power series in `w` (see [`FSeries::reciprocal_map`]).

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{from_int, Field, Rational, Ring};

/// Power series `a₀ + a₁w + … + a_N w^N + O(w^{N+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Ring> PowerSeries<C> {
    /// Series with the given coefficients, exact to degree `coeffs.len() - 1`.
    ///
    /// Panics on an empty coefficient list.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least one coefficient");
        PowerSeries { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        PowerSeries { coeffs: vec![C::zero(); degree + 1] }
    }

    pub fn constant(c: C, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.coeffs[0] = c;
        s
    }

    pub fn one(degree: usize) -> Self {
        Self::constant(C::one(), degree)
    }

    /// The variable `w` itself.
    pub fn var(degree: usize) -> Self {
        let mut s = Self::zero(degree);
        if degree >= 1 {
            s.coeffs[1] = C::one();
        }
        s
    }

    /// Truncation degree.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `w^k`; panics beyond the truncation degree.
    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    pub fn truncate(&self, degree: usize) -> Self {
        PowerSeries { coeffs: self.coeffs[..=degree.min(self.degree())].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.degree().min(other.degree());
        PowerSeries {
            coeffs: (0..=n).map(|k| self.coeffs[k].clone() + other.coeffs[k].clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.degree().min(other.degree());
        PowerSeries {
            coeffs: (0..=n).map(|k| self.coeffs[k].clone() - other.coeffs[k].clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.degree().min(other.degree());
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        PowerSeries { coeffs: out }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.degree());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `w`; the result is exact to one degree higher.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(C::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        PowerSeries { coeffs }
    }

    /// Divide by `w`. Requires a zero constant term and degree ≥ 1.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || self.degree() == 0 {
            return Err(Error::NotInvertible);
        }
        Ok(PowerSeries { coeffs: self.coeffs[1..].to_vec() })
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero(0);
        }
        PowerSeries {
            coeffs: (1..self.coeffs.len())
                .map(|k| self.coeffs[k].clone() * from_int(k as i64))
                .collect(),
        }
    }

    /// Reciprocal of a series with constant term exactly 1.
    pub fn recip_unit(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NotInvertible);
        }
        let n = self.degree();
        let mut out = vec![C::zero(); n + 1];
        out[0] = C::one();
        for k in 1..=n {
            let mut acc = C::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * out[k - j].clone();
            }
            out[k] = -acc;
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `self(inner(w))`, for `inner` without constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let n = self.degree().min(inner.degree());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        Ok(acc)
    }
}

impl<C: Field> PowerSeries<C> {
    pub fn recip(&self) -> Result<Self> {
        let a0 = self.coeffs[0].clone();
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv = C::one() / a0;
        Ok(self.scale(&inv).recip_unit()?.scale(&inv))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// Compositional inverse of a series `a₁w + a₂w² + …` with `a₁ ≠ 0`,
    /// solved one coefficient at a time.
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let n = self.degree();
        if n == 0 || self.coeffs[1].is_zero() {
            return Err(Error::NotInvertible);
        }
        let a1 = self.coeffs[1].clone();
        let mut g = Self::zero(n);
        g.coeffs[1] = C::one() / a1.clone();
        for k in 2..=n {
            let c = self.truncate(k).compose(&g.truncate(k))?.coeffs[k].clone();
            g.coeffs[k] = -c / a1.clone();
        }
        Ok(g)
    }
}

/// Moments `m₀ = 1, m₁, …, m_N` of a single-variable state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSequence<C = Rational> {
    moments: Vec<C>,
}

impl<C: Ring> MomentSequence<C> {
    pub fn new(moments: Vec<C>) -> Result<Self> {
        match moments.first() {
            Some(m0) if m0.is_one() => Ok(MomentSequence { moments }),
            _ => Err(Error::NotNormalized),
        }
    }

    /// `m_k = f(k)` for `1 ≤ k ≤ n`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> C) -> Self {
        let mut moments = vec![C::one()];
        moments.extend((1..=n).map(&mut f));
        MomentSequence { moments }
    }

    /// Moments of the point mass at `a`.
    pub fn point_mass(a: C, n: usize) -> Self {
        let mut moments = vec![C::one()];
        for k in 1..=n {
            let next = moments[k - 1].clone() * a.clone();
            moments.push(next);
        }
        MomentSequence { moments }
    }

    /// The point mass at zero, i.e. the delta state.
    pub fn delta(n: usize) -> Self {
        Self::point_mass(C::zero(), n)
    }

    /// Truncation degree `N`.
    pub fn degree(&self) -> usize {
        self.moments.len() - 1
    }

    pub fn moments(&self) -> &[C] {
        &self.moments
    }

    pub fn get(&self, k: usize) -> &C {
        &self.moments[k]
    }

    pub fn truncate(&self, n: usize) -> Self {
        MomentSequence { moments: self.moments[..=n.min(self.degree())].to_vec() }
    }

    /// `Σ m_k w^k`.
    pub fn as_series(&self) -> PowerSeries<C> {
        PowerSeries::new(self.moments.clone())
    }

    /// Moments of the image measure under `x ↦ c x`.
    pub fn dilate(&self, c: &C) -> Self {
        let mut scale = C::one();
        let mut moments = Vec::with_capacity(self.moments.len());
        for m in &self.moments {
            moments.push(m.clone() * scale.clone());
            scale = scale * c.clone();
        }
        MomentSequence { moments }
    }
}

/// Symmetric Bernoulli moments `(1, 0, 1, 0, …)`.
pub fn bernoulli(n: usize) -> MomentSequence {
    MomentSequence::from_fn(n, |k| if k % 2 == 0 { Rational::one() } else { Rational::zero() })
}

/// Reciprocal Cauchy transform `F(z) = z + c₀ + c₁z⁻¹ + … + c_{N−1}z^{−(N−1)}`.
///
/// Stored as `h(w) = w F(1/w) = 1 + c₀w + … + c_{N−1}w^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSeries {
    h: PowerSeries<Rational>,
}

impl FSeries {
    /// `F(z) = z`.
    pub fn identity(n: usize) -> Self {
        FSeries { h: PowerSeries::one(n) }
    }

    /// Build from `c₀, …, c_{N−1}`; the truncation degree is `N = coeffs.len()`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut h = vec![Rational::one()];
        h.extend(coeffs);
        FSeries { h: PowerSeries::new(h) }
    }

    /// Build from `h(w) = w F(1/w)`, which must have constant term 1.
    pub fn from_h(h: PowerSeries<Rational>) -> Result<Self> {
        if !h.coeff(0).is_one() {
            return Err(Error::NotNormalized);
        }
        Ok(FSeries { h })
    }

    /// Truncation degree `N`.
    pub fn degree(&self) -> usize {
        self.h.degree()
    }

    /// `c₀, …, c_{N−1}`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.h.coeffs()[1..]
    }

    pub fn constant(&self) -> Rational {
        self.coeffs().first().cloned().unwrap_or_else(Rational::zero)
    }

    /// `c₁, …, c_{N−1}`.
    pub fn tail(&self) -> &[Rational] {
        let c = self.coeffs();
        if c.is_empty() {
            c
        } else {
            &c[1..]
        }
    }

    pub fn h(&self) -> &PowerSeries<Rational> {
        &self.h
    }

    /// `g(w) = 1/F(1/w)`, exact to degree `N + 1`. Composition of F-transforms
    /// corresponds to composition of these maps.
    pub fn reciprocal_map(&self) -> PowerSeries<Rational> {
        self.h.recip_unit().expect("h has constant term 1").shift_up()
    }

    pub fn from_reciprocal_map(g: &PowerSeries<Rational>) -> Result<Self> {
        Ok(FSeries { h: g.shift_down()?.recip()? })
    }

    /// `self + b − c`; the result again has leading term `z`.
    pub fn sum_minus(&self, b: &FSeries, c: &FSeries) -> FSeries {
        FSeries { h: self.h.add(&b.h).sub(&c.h) }
    }

    pub fn truncate(&self, n: usize) -> FSeries {
        FSeries { h: self.h.truncate(n) }
    }
}

/// `F = 1/G` for `G(z) = Σ m_k z^{−k−1}`.
pub fn moments_to_f(m: &MomentSequence) -> FSeries {
    FSeries { h: m.as_series().recip_unit().expect("m₀ = 1") }
}

pub fn f_to_moments(f: &FSeries) -> MomentSequence {
    MomentSequence { moments: f.h.recip_unit().expect("h₀ = 1").into_coeffs() }
}

/// `outer ∘ inner`.
pub fn compose(outer: &FSeries, inner: &FSeries) -> FSeries {
    let g = outer
        .reciprocal_map()
        .compose(&inner.reciprocal_map())
        .expect("reciprocal maps have no constant term");
    FSeries::from_reciprocal_map(&g).expect("leading coefficient is 1")
}

/// Compositional inverse of an F-transform.
pub fn comp_inverse(f: &FSeries) -> FSeries {
    let g = f.reciprocal_map().reversion().expect("leading coefficient is 1");
    FSeries::from_reciprocal_map(&g).expect("leading coefficient is 1")
}

/// Coefficients `R₁, …, R_N` of `φ(z) = Σ R_n z^{−(n−1)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSeries {
    coeffs: Vec<Rational>,
}

impl PhiSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        PhiSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `R_n`, 1-based.
    pub fn r(&self, n: usize) -> &Rational {
        &self.coeffs[n - 1]
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, other: &PhiSeries) -> PhiSeries {
        PhiSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    /// `Σ R_n x^{n−1}`, exact to degree `N − 1`.
    pub fn as_power_series(&self) -> PowerSeries<Rational> {
        PowerSeries::new(self.coeffs.clone())
    }

    /// `z − φ(F(z))`, the left-hand F of the defining relation.
    pub fn apply(&self, f: &FSeries) -> FSeries {
        if self.coeffs.is_empty() {
            return FSeries::identity(0);
        }
        let inner = f.reciprocal_map();
        let p = self.as_power_series().compose(&inner).expect("g has no constant term");
        FSeries { h: PowerSeries::one(p.degree() + 1).sub(&p.shift_up()) }
    }
}

/// φ with `F(z) = z − φ(F(z))`; its coefficients are the free cumulants.
pub fn phi_transform(f: &FSeries) -> PhiSeries {
    PhiSeries { coeffs: comp_inverse(f).coeffs().to_vec() }
}

/// φ with `F_μ(z) = z − φ(F_ν(z))`.
pub fn cfree_phi_transform(f_mu: &FSeries, f_nu: &FSeries) -> PhiSeries {
    let n = f_mu.degree().min(f_nu.degree());
    let nu_inv = comp_inverse(&f_nu.truncate(n));
    let mu_nu_inv = compose(&f_mu.truncate(n), &nu_inv);
    PhiSeries {
        coeffs: nu_inv.coeffs().iter().zip(mu_nu_inv.coeffs()).map(|(a, b)| a - b).collect(),
    }
}

/// `η(z) = e₁z + … + e_N z^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaSeries<C = Rational> {
    s: PowerSeries<C>,
}

impl<C: Field> EtaSeries<C> {
    pub fn from_series(s: PowerSeries<C>) -> Result<Self> {
        if !s.coeff(0).is_zero() {
            return Err(Error::NonzeroConstant);
        }
        Ok(EtaSeries { s })
    }

    pub fn series(&self) -> &PowerSeries<C> {
        &self.s
    }

    /// `e₁, …, e_N`.
    pub fn coeffs(&self) -> &[C] {
        &self.s.coeffs()[1..]
    }

    pub fn degree(&self) -> usize {
        self.s.degree()
    }

    pub fn compose(&self, inner: &EtaSeries<C>) -> EtaSeries<C> {
        EtaSeries { s: self.s.compose(&inner.s).expect("η has no constant term") }
    }
}

/// `η(z) = 1 − z/G(1/z) = 1 − 1/M(z)` with `M(z) = Σ m_k z^k`.
pub fn eta_from_moments<C: Field>(m: &MomentSequence<C>) -> EtaSeries<C> {
    let inv = m.as_series().recip_unit().expect("m₀ = 1");
    EtaSeries { s: PowerSeries::one(m.degree()).sub(&inv) }
}

pub fn eta_to_moments<C: Field>(e: &EtaSeries<C>) -> MomentSequence<C> {
    let one = PowerSeries::one(e.degree());
    MomentSequence { moments: one.sub(&e.s).recip_unit().expect("1 − η(0) = 1").into_coeffs() }
}

pub fn eta_inverse<C: Field>(e: &EtaSeries<C>) -> Result<EtaSeries<C>> {
    if e.degree() == 0 || e.s.coeff(1).is_zero() {
        return Err(Error::ZeroFirstMoment);
    }
    Ok(EtaSeries { s: e.s.reversion()? })
}

/// `R̃_{(μ,ν)}`, determined by `R̃_{(μ,ν)}(z/(1−η_ν)) = η_μ/(1−η_ν)`.
pub fn r_tilde<C: Field>(m_mu: &MomentSequence<C>, m_nu: &MomentSequence<C>) -> PowerSeries<C> {
    let n = m_mu.degree().min(m_nu.degree());
    let eta_mu = eta_from_moments(&m_mu.truncate(n)).s;
    let eta_nu = eta_from_moments(&m_nu.truncate(n)).s;
    let one_minus = PowerSeries::one(n).sub(&eta_nu).recip_unit().expect("constant term 1");
    let u = PowerSeries::var(n).mul(&one_minus);
    let u_inv = u.reversion().expect("u(z) = z + O(z²)");
    eta_mu.mul(&one_minus).compose(&u_inv).expect("no constant term")
}

/// `T_{(μ,ν)}(z) = R̃_{(μ,ν)}(R̃_ν⁻¹(z)) / R̃_ν⁻¹(z)`, exact to degree `N − 1`.
pub fn t_transform<C: Field>(
    m_mu: &MomentSequence<C>,
    m_nu: &MomentSequence<C>,
) -> Result<PowerSeries<C>> {
    let n = m_mu.degree().min(m_nu.degree());
    if n == 0 || m_nu.get(1).is_zero() {
        return Err(Error::ZeroFirstMoment);
    }
    let r_nu_inv = r_tilde(m_nu, m_nu).truncate(n).reversion()?;
    let num = r_tilde(m_mu, m_nu).compose(&r_nu_inv)?;
    num.shift_down()?.div(&r_nu_inv.shift_down()?)
}

/// Moments of ν recovered from `T_ν`.
pub fn moments_from_t<C: Field>(t: &PowerSeries<C>) -> Result<MomentSequence<C>> {
    if t.coeff(0).is_zero() {
        return Err(Error::ZeroFirstMoment);
    }
    let r_nu = t.recip()?.shift_up().reversion()?;
    let (_, one_minus_eta_nu) = invert_r_tilde(&r_nu)?;
    let eta = PowerSeries::one(one_minus_eta_nu.degree()).sub(&one_minus_eta_nu);
    Ok(eta_to_moments(&EtaSeries::from_series(eta)?))
}

/// Moments of μ recovered from `T_{(μ,ν)}` and `T_ν`.
pub fn moments_from_t_pair<C: Field>(
    t_mu_nu: &PowerSeries<C>,
    t_nu: &PowerSeries<C>,
) -> Result<MomentSequence<C>> {
    if t_nu.coeff(0).is_zero() {
        return Err(Error::ZeroFirstMoment);
    }
    let n = t_mu_nu.degree().min(t_nu.degree());
    let r_nu = t_nu.truncate(n).recip()?.shift_up().reversion()?;
    // R̃_{(μ,ν)}(y) = T_{(μ,ν)}(R̃_ν(y)) · y
    let r_mu_nu = t_mu_nu.truncate(n).compose(&r_nu)?.shift_up();
    let (u, one_minus_eta_nu) = invert_r_tilde(&r_nu)?;
    let eta = r_mu_nu.compose(&u)?.mul(&one_minus_eta_nu);
    Ok(eta_to_moments(&EtaSeries::from_series(eta)?))
}

/// From `R̃_ν`, the substitution `u = z/(1−η_ν)` and the series `1 − η_ν`.
fn invert_r_tilde<C: Field>(r_nu: &PowerSeries<C>) -> Result<(PowerSeries<C>, PowerSeries<C>)> {
    let n = r_nu.degree();
    // ζ = η_ν/(1−η_ν) satisfies ζ = R̃_ν(u) with u = z(1+ζ), so u inverts y ↦ y/(1 + R̃_ν(y)).
    let y_over = PowerSeries::var(n).mul(&PowerSeries::one(n).add(r_nu).recip_unit()?);
    let u = y_over.reversion()?;
    let zeta = r_nu.compose(&u)?;
    let one_minus_eta_nu = PowerSeries::one(n).add(&zeta).recip_unit()?;
    Ok((u, one_minus_eta_nu))
}
