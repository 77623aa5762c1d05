use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::freeprod::{convolve_moments, random_moments, random_small_rational};
use crate::scalar::{cq, q, ComplexRational};
use crate::series::bernoulli;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn centered(m: &MomentSequence) -> MomentSequence {
    let mut v = m.moments().to_vec();
    v[1] = Rational::zero();
    MomentSequence::new(v).unwrap()
}

#[test]
fn point_masses_translate() {
    let a = MomentSequence::point_mass(q(1, 3), 6);
    let b = MomentSequence::point_mass(q(-5, 2), 6);
    let ab = MomentSequence::point_mass(q(1, 3) + q(-5, 2), 6);
    assert_eq!(free_additive(&a, &b), ab);
    assert_eq!(boolean_additive(&a, &b), ab);
    assert_eq!(monotone_additive(&a, &b), ab);
    assert_eq!(cfree_additive((&a, &a), (&b, &b)), (ab.clone(), ab.clone()));
    let t = |m: &MomentSequence| MeasureTriple::new(m.clone(), m.clone(), m.clone());
    assert_eq!(indented_additive(&t(&a), &t(&b)), t(&ab));
}

#[test]
fn delta_is_neutral() {
    let m = random_moments(7, &mut rng(1));
    let d = MomentSequence::delta(7);
    assert_eq!(free_additive(&m, &d), m);
    assert_eq!(free_additive(&d, &m), m);
    let t = MeasureTriple::new(m.clone(), random_moments(7, &mut rng(2)), random_moments(7, &mut rng(3)));
    assert_eq!(indented_additive(&t, &MeasureTriple::delta(7)), t);
    assert_eq!(indented_additive(&MeasureTriple::delta(7), &t), t);
}

#[test]
fn free_bernoulli_square() {
    let b = bernoulli(6);
    let s = free_additive(&b, &b);
    assert_eq!(s.get(2), &int(2));
    assert_eq!(s.get(4), &int(6));
    assert_eq!(vec![s], convolve_moments(ProductKind::Free, &[vec![b.clone()], vec![b]], 6).unwrap());
}

#[test]
fn every_kind_matches_word_expansion() {
    let mut r = rng(11);
    for kind in ProductKind::ALL {
        for factors in [2, 3] {
            let inputs: Vec<Vec<MomentSequence>> =
                (0..factors).map(|_| (0..kind.arity()).map(|_| random_moments(6, &mut r)).collect()).collect();
            let by_transform = derived_additive(kind, &inputs).unwrap();
            let by_words = convolve_moments(kind, &inputs, 6).unwrap();
            assert_eq!(by_transform, by_words, "{kind} with {factors} factors");
        }
    }
}

#[test]
fn named_kinds_match_closed_forms() {
    let mut r = rng(5);
    let a = random_moments(7, &mut r);
    let b = random_moments(7, &mut r);
    let one = |k: ProductKind| derived_additive(k, &[vec![a.clone()], vec![b.clone()]]).unwrap().remove(0);
    assert_eq!(one(ProductKind::Free), free_additive(&a, &b));
    assert_eq!(one(ProductKind::Boolean), boolean_additive(&a, &b));
    assert_eq!(one(ProductKind::Monotone), monotone_additive(&a, &b));
    // anti-monotone reverses the order
    assert_eq!(one(ProductKind::AntiMonotone), monotone_additive(&b, &a));
}

#[test]
fn cfree_routes_agree() {
    let mut r = rng(21);
    let [m1, n1, m2, n2] = [(); 4].map(|_| random_moments(7, &mut r));
    let (mu, nu) = cfree_additive((&m1, &n1), (&m2, &n2));
    assert_eq!(mu, cfree_three_term(&m1, &n1, &m2, &n2));
    assert_eq!(nu, free_additive(&n1, &n2));
    let by_kind = derived_additive(ProductKind::CFree, &[vec![m1, n1], vec![m2, n2]]).unwrap();
    assert_eq!(by_kind, vec![mu, nu]);
}

#[test]
fn cfree_reductions() {
    let mut r = rng(22);
    let a = random_moments(7, &mut r);
    let b = random_moments(7, &mut r);
    let d = MomentSequence::delta(7);
    assert_eq!(cfree_additive((&a, &a), (&b, &b)).0, free_additive(&a, &b));
    assert_eq!(cfree_additive((&a, &d), (&b, &d)).0, boolean_additive(&a, &b));
    // (μ, δ₀) pairs through the oracle as well
    let words = convolve_moments(ProductKind::CFree, &[vec![a.clone(), d.clone()], vec![b.clone(), d]], 7).unwrap();
    assert_eq!(words[0], boolean_additive(&a, &b));
}

#[test]
fn ofree_reductions() {
    let mut r = rng(23);
    let [m1, n1, m2, n2] = [(); 4].map(|_| random_moments(7, &mut r));
    let d = MomentSequence::delta(7);
    assert_eq!(ofree_additive((&m1, &m1), (&m2, &n2)).0, free_additive(&m1, &m2));
    assert_eq!(ofree_additive((&m1, &d), (&m2, &n2)).0, monotone_additive(&m1, &m2));
    let (mu, nu) = ofree_additive((&m1, &n1), (&m2, &n2));
    let t = indented_additive(&MeasureTriple::new(m1.clone(), m1, n1), &MeasureTriple::new(m2.clone(), m2, n2));
    assert_eq!((mu, nu), (t.mu, t.nu));
}

#[test]
fn cmonotone_characterisation() {
    // (F_{μ₁}∘F_{ν₂} + F_{μ₂} − F_{ν₂}, F_{ν₁}∘F_{ν₂})
    let mut r = rng(24);
    let [m1, n1, m2, n2] = [(); 4].map(|_| random_moments(6, &mut r));
    let inputs = [vec![m1.clone(), n1.clone()], vec![m2.clone(), n2.clone()]];
    let out = derived_additive(ProductKind::CMonotone, &inputs).unwrap();
    let [f1, f2, g2] = [&m1, &m2, &n2].map(moments_to_f);
    assert_eq!(out[0], f_to_moments(&compose(&f1, &g2).sum_minus(&f2, &g2)));
    assert_eq!(out[1], monotone_additive(&n1, &n2));
    assert_eq!(out, convolve_moments(ProductKind::CMonotone, &inputs, 6).unwrap());
}

#[test]
fn indented_and_ofree_are_associative() {
    let mut r = rng(31);
    let t: Vec<MeasureTriple> = (0..3)
        .map(|_| MeasureTriple::new(random_moments(8, &mut r), random_moments(8, &mut r), random_moments(8, &mut r)))
        .collect();
    let left = indented_additive(&indented_additive(&t[0], &t[1]), &t[2]);
    let right = indented_additive(&t[0], &indented_additive(&t[1], &t[2]));
    assert_eq!(left, right);

    let p: Vec<(MomentSequence, MomentSequence)> = t.iter().map(|x| (x.mu.clone(), x.nu.clone())).collect();
    let pair = |a: &(MomentSequence, MomentSequence), b: &(MomentSequence, MomentSequence)| {
        ofree_additive((&a.0, &a.1), (&b.0, &b.1))
    };
    assert_eq!(pair(&pair(&p[0], &p[1]), &p[2]), pair(&p[0], &pair(&p[1], &p[2])));
}

#[test]
fn nested_lower_measure_identity() {
    // (μ₁ ν₁⊞μ₂ μ₂) λ⊞μ₃ μ₃ = μ₁ ν₁⊞ρ ρ,  λ = ν₁ ν₁⊞μ₂ ν₂,  ρ = μ₂ ν₂⊞μ₃ μ₃
    let mut r = rng(32);
    let [m1, n1, m2, n2, m3] = [(); 5].map(|_| random_moments(8, &mut r));
    let (inner, lambda) = ofree_additive((&m1, &n1), (&m2, &n2));
    let lhs = ofree_additive((&inner, &lambda), (&m3, &m3)).0;
    let rho = ofree_additive((&m2, &n2), (&m3, &m3)).0;
    let rhs = ofree_additive((&m1, &n1), (&rho, &rho)).0;
    assert_eq!(lhs, rhs);
}

#[test]
fn centred_variances_add() {
    let mut r = rng(41);
    for kind in ProductKind::ALL {
        let inputs: Vec<Vec<MomentSequence>> =
            (0..3).map(|_| (0..kind.arity()).map(|_| centered(&random_moments(5, &mut r))).collect()).collect();
        let out = derived_additive(kind, &inputs).unwrap();
        for slot in 0..kind.outputs().len() {
            let sum: Rational = inputs.iter().map(|s| s[slot].get(2).clone()).sum();
            assert_eq!(out[slot].get(2), &sum, "{kind}");
        }
    }
}

#[test]
fn kesten_low_moments() {
    let t = kesten_triple(&q(2, 1), &q(1, 3), &q(3, 4), 8);
    assert_eq!(t.lambda.get(2), &int(2));
    assert_eq!(t.mu.get(2), &q(1, 3));
    assert_eq!(t.nu.get(2), &q(3, 4));
    for m in [&t.lambda, &t.mu, &t.nu] {
        assert!((0..4).all(|k| m.get(2 * k + 1).is_zero()));
    }
    // β² = γ²: semicircle, m₄ = 2β⁴
    let b = q(3, 2);
    let t = kesten_triple(&q(1, 1), &b, &b, 8);
    assert_eq!(t.mu.get(4), &(int(2) * &b * &b));
    assert_eq!(t.mu, t.nu);
    // γ² = 0: arcsine, m₄ = 3β⁴/2
    let t = kesten_triple(&q(1, 1), &b, &int(0), 8);
    assert_eq!(t.mu.get(4), &(q(3, 2) * &b * &b));
    assert_eq!(t.nu, MomentSequence::delta(8));
    // no ψ/θ variance: λ is two-point
    let t = kesten_triple(&int(1), &int(0), &int(0), 8);
    assert_eq!(t.lambda, bernoulli(8));
}

#[test]
fn kesten_fourth_moment_formula() {
    let (a, b, c) = (q(5, 3), q(1, 2), q(2, 7));
    let t = kesten_triple(&a, &b, &c, 6);
    let s = &b + &c;
    for (x, m) in [(&a, &t.lambda), (&b, &t.mu), (&c, &t.nu)] {
        assert_eq!(m.get(4), &(x * x + x * &s / int(2)));
    }
}

#[test]
fn clt_reports() {
    for (a, b, c) in [(int(1), int(1), int(1)), (q(3, 2), q(1, 2), int(0)), (q(1, 2), q(1, 2), q(1, 2))] {
        let rep = clt_verify(&a, &b, &c, 8).unwrap();
        assert!(rep.second_cumulants_match && rep.higher_cumulants_vanish, "{:?}", rep.cumulants);
        assert!(rep.errors_decrease, "{:?}", rep.max_errors);
        assert_eq!(rep.rows.len(), CLT_STEPS.len() * 3 * CLT_MOMENT_DEGREE);
    }
    // equal variances: all three components are the same semicircle
    let t = kesten_triple(&q(1, 2), &q(1, 2), &q(1, 2), 8);
    assert_eq!(t.lambda, t.mu);
}

fn complex_moments(degree: usize, r: &mut ChaCha8Rng) -> MomentSequence<ComplexRational> {
    let mut v = vec![cq(int(1), int(0))];
    for k in 1..=degree {
        let mut z = cq(random_small_rational(r), random_small_rational(r));
        if k == 1 && z.re.is_zero() && z.im.is_zero() {
            z = cq(int(1), int(0));
        }
        v.push(z);
    }
    MomentSequence::new(v).unwrap()
}

#[test]
fn circle_point_masses_multiply() {
    let w1 = cq(q(3, 5), q(4, 5));
    let w2 = cq(q(5, 13), q(-12, 13));
    let a = MomentSequence::point_mass(w1.clone(), 6);
    let b = MomentSequence::point_mass(w2.clone(), 6);
    let ab = MomentSequence::point_mass(w1 * w2, 6);
    assert_eq!(mult_free(&a, &b).unwrap(), ab);
    assert_eq!(mult_cfree((&a, &a), (&b, &b)).unwrap(), (ab.clone(), ab.clone()));
    assert_eq!(mult_ofree((&a, &a), (&b, &b)).unwrap(), (ab.clone(), ab));
}

#[test]
fn unit_mass_is_neutral() {
    let mut r = rng(51);
    let [m1, n1, n2] = [(); 3].map(|_| complex_moments(6, &mut r));
    let one = MomentSequence::point_mass(cq(int(1), int(0)), 6);
    assert_eq!(mult_free(&n1, &one).unwrap(), n1);
    assert_eq!(mult_ofree((&m1, &n1), (&one, &n2)).unwrap().0, m1);
}

#[test]
fn multiplicative_routes_match_word_expansion() {
    let mut r = rng(52);
    for _ in 0..3 {
        let [m1, n1, m2, n2] = [(); 4].map(|_| complex_moments(6, &mut r));
        let inputs = [vec![m1.clone(), n1.clone()], vec![m2.clone(), n2.clone()]];
        let words = multiplicative_moments(ProductKind::CFree, &inputs, 6).unwrap();
        let (mu, nu) = mult_cfree((&m1, &n1), (&m2, &n2)).unwrap();
        let d = mu.degree().min(nu.degree());
        assert!(d >= 5);
        assert_eq!(mu, words[0].truncate(d));
        assert_eq!(nu, words[1].truncate(d));
        assert_eq!(mult_free(&n1, &n2).unwrap(), words[1].truncate(d));
        let eta = mult_cfree_eta(&m1, &n1, &m2, &n2).unwrap();
        assert_eq!(eta, words[0].truncate(eta.degree()));

        let words = multiplicative_moments(ProductKind::OFree, &inputs, 6).unwrap();
        let (mu, nu) = mult_ofree((&m1, &n1), (&m2, &n2)).unwrap();
        assert_eq!(mu, words[0].truncate(mu.degree()));
        assert_eq!(nu, words[1].truncate(nu.degree()));
    }
}

#[test]
fn zero_first_moment_is_reported() {
    let z = MomentSequence::new(vec![cq(int(1), int(0)), cq(int(0), int(0)), cq(int(1), int(0))]).unwrap();
    let w = MomentSequence::point_mass(cq(int(1), int(0)), 2);
    assert_eq!(mult_ofree((&w, &z), (&w, &w)), Err(Error::ZeroFirstMoment));
}
