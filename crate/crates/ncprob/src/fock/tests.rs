use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::freeprod::{
    random_small_rational, words, Element, Evaluator, Functional, StateTriple, TripleNodes,
};
use crate::kind::ProductKind;
use crate::partitions::{descent_split, IndexSequence};
use crate::scalar::int;
use crate::series::{f_to_moments, moments_to_f, compose, MomentSequence};

fn random_matrix(dim: usize, r: &mut ChaCha8Rng) -> Matrix {
    (0..dim).map(|_| (0..dim).map(|_| random_small_rational(r)).collect()).collect()
}

fn random_model(dim: usize, gens: usize, r: &mut ChaCha8Rng) -> MatrixStateModel {
    let alphabet: Vec<String> = (0..gens).map(|i| alloc::format!("x{i}")).collect();
    let mut reps = || (0..gens).map(|_| random_matrix(dim, r)).collect::<Vec<_>>();
    let (pi, sigma, rho) = (reps(), reps(), reps());
    MatrixStateModel::new(dim, alphabet, pi, sigma, rho).unwrap()
}

fn triples(models: &[MatrixStateModel], n: usize) -> Vec<StateTriple> {
    models
        .iter()
        .map(|m| StateTriple {
            phi: m.state(Representation::Pi, n),
            psi: m.state(Representation::Sigma, n),
            theta: m.state(Representation::Rho, n),
        })
        .collect()
}

/// Every generator word of length ≤ n over the given models.
fn all_words(models: &[MatrixStateModel], n: usize) -> Vec<Vec<Gen>> {
    let letters: Vec<Gen> = models
        .iter()
        .enumerate()
        .flat_map(|(k, m)| (0..m.alphabet().len()).map(move |s| Gen::new(k, s as Symbol)))
        .collect();
    words(letters.len(), n).into_iter().map(|w| w.iter().map(|&i| letters[i as usize]).collect()).collect()
}

#[test]
fn identity_acts_as_identity() {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let space = TruncatedFockSpace::new(vec![random_model(3, 1, &mut r), random_model(2, 1, &mut r)], 3);
    let n = space.basis().len();
    for k in 0..2 {
        let dim = space.models()[k].dim();
        assert_eq!(space.lambda_op(k, &identity_matrix(dim)), identity_matrix(n));
    }
}

#[test]
fn single_factor_is_gns() {
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let a = random_matrix(3, &mut r);
    let space = TruncatedFockSpace::new(vec![random_model(3, 1, &mut r)], 1);
    assert_eq!(space.basis(), vec![vec![], vec![(0, 1)], vec![(0, 2)]]);
    assert_eq!(space.lambda_op(0, &a), a);
}

#[test]
fn two_factor_vacuum_expectation() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let (a, b) = (random_matrix(2, &mut r), random_matrix(2, &mut r));
    let space = TruncatedFockSpace::new(vec![MatrixStateModel::bernoulli(), MatrixStateModel::bernoulli()], 2);
    let v = space.lambda_apply(0, &a, &space.lambda_apply(1, &b, &vacuum()));
    assert_eq!(vacuum_coeff(&v), &a[0][0] * &b[0][0]);
}

#[test]
fn lambda_preserves_summands() {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    let models = vec![random_model(2, 1, &mut r), random_model(3, 1, &mut r), random_model(2, 1, &mut r)];
    let space = TruncatedFockSpace::new(models, 3);
    let basis = space.basis();
    for k in 0..3 {
        let m = space.lambda_op(k, &random_matrix(space.models()[k].dim(), &mut r));
        for (i, u) in basis.iter().enumerate() {
            for (j, t) in basis.iter().enumerate() {
                if !m[i][j].is_zero() {
                    assert_eq!(space.summand(k, u), space.summand(k, t), "{u:?} <- {t:?}");
                }
            }
        }
    }
}

#[test]
fn lambda_is_multiplicative_below_truncation() {
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let models = vec![random_model(3, 1, &mut r), random_model(2, 1, &mut r)];
    let space = TruncatedFockSpace::new(models, 3);
    for k in 0..2 {
        let dim = space.models()[k].dim();
        let (a, b) = (random_matrix(dim, &mut r), random_matrix(dim, &mut r));
        let ab = mat_mul(&a, &b);
        for t in space.basis().into_iter().filter(|t| t.len() < space.max_len()) {
            let mut v = FockVector::new();
            v.insert(t, int(1));
            let lhs = space.lambda_apply(k, &ab, &v);
            let rhs = space.lambda_apply(k, &a, &space.lambda_apply(k, &b, &v));
            assert_eq!(lhs, rhs);
        }
    }
}

fn check_against_products(models: Vec<MatrixStateModel>, n: usize) {
    let space = TruncatedFockSpace::new(models.clone(), n);
    let ts = triples(&models, n);
    let mut ev = Evaluator::new();
    let nodes: Vec<TripleNodes> = ts.iter().enumerate().map(|(k, t)| ev.state_triple(k, t)).collect();
    let top = ev.left_fold(&nodes);
    for w in all_words(&models, n) {
        assert_eq!(space.j_indented(&w).unwrap(), ev.eval(top.phi, &w).unwrap(), "J^I on {w:?}");
        assert_eq!(space.j_ofree(&w).unwrap(), ev.eval(top.psi, &w).unwrap(), "J^OF on {w:?}");
    }
}

#[test]
fn j_matches_word_expansion_2x2() {
    let mut r = ChaCha8Rng::seed_from_u64(6);
    check_against_products(vec![random_model(2, 1, &mut r), random_model(2, 1, &mut r)], 6);
    check_against_products((0..3).map(|_| random_model(2, 1, &mut r)).collect(), 5);
}

#[test]
fn j_matches_word_expansion_3x3() {
    let mut r = ChaCha8Rng::seed_from_u64(7);
    check_against_products(vec![random_model(3, 2, &mut r), random_model(3, 1, &mut r)], 4);
    check_against_products(vec![random_model(3, 1, &mut r), random_model(2, 1, &mut r), random_model(3, 1, &mut r)], 4);
}

#[test]
fn length_one_words_see_pi() {
    let mut r = ChaCha8Rng::seed_from_u64(8);
    let models = vec![random_model(3, 2, &mut r), random_model(2, 1, &mut r)];
    let space = TruncatedFockSpace::new(models.clone(), 1);
    assert_eq!(space.j_indented(&[Gen::new(0, 1)]).unwrap(), models[0].pi[1][0][0]);
    assert_eq!(space.j_ofree(&[Gen::new(1, 0)]).unwrap(), models[1].sigma[0][0][0]);
    assert_eq!(
        space.j_indented(&[Gen::new(0, 0), Gen::new(1, 0)]),
        Err(Error::WordTooLong { length: 2, limit: 1 })
    );
}

#[test]
fn equal_sigma_rho_is_free() {
    let mut r = ChaCha8Rng::seed_from_u64(9);
    let models: Vec<MatrixStateModel> = (0..2)
        .map(|_| {
            let m = random_model(3, 1, &mut r);
            MatrixStateModel::new(3, m.alphabet.clone(), m.pi.clone(), m.sigma.clone(), m.sigma.clone()).unwrap()
        })
        .collect();
    let space = TruncatedFockSpace::new(models.clone(), 5);
    let states: Vec<MultiMomentFunctional> = models.iter().map(|m| m.state(Representation::Sigma, 5)).collect();
    let mut ev = Evaluator::new();
    let nodes: Vec<TripleNodes> = states
        .iter()
        .enumerate()
        .map(|(k, s)| ev.kind_triple(ProductKind::Free, k, &[s as &dyn Functional<Rational>]).unwrap())
        .collect();
    let top = ev.left_fold(&nodes);
    for w in all_words(&models, 5) {
        assert_eq!(space.j_ofree(&w).unwrap(), ev.eval(top.phi, &w).unwrap());
    }
}

#[test]
fn zero_rho_gives_monotone() {
    let mut r = ChaCha8Rng::seed_from_u64(10);
    let n = 5;
    let models: Vec<MatrixStateModel> = (0..2)
        .map(|_| {
            let m = random_model(3, 1, &mut r);
            let zero = vec![vec![vec![Rational::zero(); 3]; 3]];
            MatrixStateModel::new(3, m.alphabet.clone(), m.pi.clone(), m.sigma.clone(), zero).unwrap()
        })
        .collect();
    let space = TruncatedFockSpace::new(models.clone(), n);
    let mut moments = vec![int(1)];
    for p in 1..=n {
        let mut m = Rational::zero();
        for w in all_words(&models, p).into_iter().filter(|w| w.len() == p) {
            m += space.j_ofree(&w).unwrap();
        }
        moments.push(m);
    }
    let single = |k: usize| models[k].state(Representation::Sigma, n).moments_of(0);
    let expected = f_to_moments(&compose(&moments_to_f(&single(0)), &moments_to_f(&single(1))));
    assert_eq!(MomentSequence::new(moments).unwrap(), expected);
}

#[test]
fn centred_letters_give_elementary_tensors() {
    let mut r = ChaCha8Rng::seed_from_u64(11);
    let models: Vec<MatrixStateModel> = (0..4).map(|_| random_model(3, 2, &mut r)).collect();
    let indices = [0usize, 1, 3, 2, 1, 2, 0, 3];
    let n = indices.len();
    let space = TruncatedFockSpace::new(models.clone(), 2 * n);
    let mut letters = Vec::new();
    let mut images = Vec::new();
    let (e, _) = descent_split(&IndexSequence::new(indices.to_vec()).unwrap());
    for (pos, &k) in indices.iter().enumerate() {
        let rep = if pos == n - 1 {
            Representation::Pi
        } else if e.contains(&(pos + 1)) {
            Representation::Sigma
        } else {
            Representation::Rho
        };
        let el = Element::from_terms(vec![
            (random_small_rational(&mut r), vec![r.gen_range(0..2)]),
            (random_small_rational(&mut r), vec![0, 1]),
        ]);
        let el = el.centered(&models[k].state(rep, 2)).unwrap();
        let mut a = vec![vec![Rational::zero(); 3]; 3];
        for (c, w) in el.terms() {
            let m = models[k].word_matrix(rep, w).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    a[i][j] += c * &m[i][j];
                }
            }
        }
        images.push(space.reduced_image(k, &a));
        letters.push((k, el));
    }
    let word = AlternatingWord::new(letters).unwrap();
    let v = space.j_element_vector(JKind::Indented, &word).unwrap();
    let mut expected = FockVector::new();
    let mut layer: Vec<(BasisTensor, Rational)> = vec![(Vec::new(), int(1))];
    for (pos, img) in images.iter().enumerate() {
        let mut next = Vec::new();
        for (t, c) in &layer {
            for (b, x) in img.iter().enumerate() {
                let mut u = t.clone();
                u.push((indices[pos], b + 1));
                next.push((u, c * x));
            }
        }
        layer = next;
    }
    for (t, c) in layer {
        if !c.is_zero() {
            expected.insert(t, c);
        }
    }
    assert_eq!(v, expected);
    assert!(vacuum_coeff(&v).is_zero());
}
