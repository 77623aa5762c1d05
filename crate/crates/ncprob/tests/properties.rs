use ncprob::convolutions::{derived_additive, indented_additive, indented_fold, ofree_additive, MeasureTriple};
use ncprob::cumulants::{single_cumulants, single_moments};
use ncprob::freeprod::{
    AlternatingWord, Element, Evaluator, MultiMomentFunctional, StateTriple, TripleNodes, Gen,
};
use ncprob::kind::{Component, ProductKind};
use ncprob::partitions::{enumerate_n, PartitionClass};
use ncprob::series::{comp_inverse, compose, f_to_moments, moments_to_f, FSeries, MomentSequence};
use ncprob::{q, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn moments(degree: usize) -> impl Strategy<Value = MomentSequence> {
    prop::collection::vec(rational(), degree).prop_map(|v| {
        let mut m = vec![q(1, 1)];
        m.extend(v);
        MomentSequence::new(m).unwrap()
    })
}

fn triple(degree: usize) -> impl Strategy<Value = MeasureTriple> {
    (moments(degree), moments(degree), moments(degree)).prop_map(|(a, b, c)| MeasureTriple::new(a, b, c))
}

fn state_triple(degree: usize) -> impl Strategy<Value = StateTriple> {
    triple(degree).prop_map(|t| StateTriple::from_moments(&t.lambda, &t.mu, &t.nu).unwrap())
}

fn centred(m: &MomentSequence) -> MomentSequence {
    let mut v = m.moments().to_vec();
    v[1] = q(0, 1);
    MomentSequence::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn indented_product_associative(ts in prop::collection::vec(state_triple(5), 3)) {
        let mut ev = Evaluator::new();
        let nodes: Vec<TripleNodes> = ts.iter().enumerate().map(|(k, t)| ev.state_triple(k, t)).collect();
        let left = ev.left_fold(&nodes);
        let right = ev.right_fold(&nodes);
        for w in ncprob::freeprod::words(3, 5) {
            let w: Vec<Gen> = w.iter().map(|&f| Gen::new(f as usize, 0)).collect();
            for c in Component::ALL {
                prop_assert_eq!(ev.eval(left.component(c), &w).unwrap(), ev.eval(right.component(c), &w).unwrap());
            }
        }
    }

    #[test]
    fn evaluation_is_multilinear(
        ts in prop::collection::vec(state_triple(4), 2),
        a in rational(), b in rational(), c in rational(),
    ) {
        // φ((a x + b x²) y (x + c)) against the expansion letter by letter
        let mut ev = Evaluator::new();
        let nodes: Vec<TripleNodes> = ts.iter().enumerate().map(|(k, t)| ev.state_triple(k, t)).collect();
        let top = ev.left_fold(&nodes);
        let first = Element::from_terms(vec![(a.clone(), vec![0]), (b.clone(), vec![0, 0])]);
        let last = Element::from_terms(vec![(q(1, 1), vec![0]), (c.clone(), vec![])]);
        let w = AlternatingWord::new(vec![(0, first), (1, Element::generator(0)), (0, last)]).unwrap();
        let g = |f: usize| Gen::new(f, 0);
        for comp in Component::ALL {
            let id = top.component(comp);
            let lhs = ev.eval_word(id, &w).unwrap();
            let terms = [
                (a.clone(), vec![g(0), g(1), g(0)]),
                (a.clone() * c.clone(), vec![g(0), g(1)]),
                (b.clone(), vec![g(0), g(0), g(1), g(0)]),
                (b.clone() * c.clone(), vec![g(0), g(0), g(1)]),
            ];
            let mut rhs = q(0, 1);
            for (k, word) in terms {
                rhs += k * ev.eval(id, &word).unwrap();
            }
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn convolutions_associative(t in prop::collection::vec(triple(6), 3)) {
        let left = indented_additive(&indented_additive(&t[0], &t[1]), &t[2]);
        let right = indented_additive(&t[0], &indented_additive(&t[1], &t[2]));
        prop_assert_eq!(left, right);
        let p: Vec<_> = t.iter().map(|x| (x.mu.clone(), x.nu.clone())).collect();
        let of = |a: &(MomentSequence, MomentSequence), b: &(MomentSequence, MomentSequence)| {
            ofree_additive((&a.0, &a.1), (&b.0, &b.1))
        };
        prop_assert_eq!(of(&of(&p[0], &p[1]), &p[2]), of(&p[0], &of(&p[1], &p[2])));
    }

    #[test]
    fn cumulants_scale_with_copies(t in triple(5), copies in 2usize..=4) {
        let s = indented_fold(&vec![t.clone(); copies]);
        let k = single_cumulants(&t.lambda, &t.mu, &t.nu, 5).unwrap();
        let ks = single_cumulants(&s.lambda, &s.mu, &s.nu, 5).unwrap();
        let n = q(copies as i64, 1);
        for i in 0..3 {
            let scaled: Vec<Rational> = k[i].iter().map(|x| x * &n).collect();
            prop_assert_eq!(&ks[i], &scaled);
        }
    }

    #[test]
    fn low_cumulants_add(t1 in triple(5), t2 in triple(5)) {
        let s = indented_additive(&t1, &t2);
        let k1 = single_cumulants(&t1.lambda, &t1.mu, &t1.nu, 2).unwrap();
        let k2 = single_cumulants(&t2.lambda, &t2.mu, &t2.nu, 2).unwrap();
        let ks = single_cumulants(&s.lambda, &s.mu, &s.nu, 2).unwrap();
        for i in 0..3 {
            let sum: Vec<Rational> = k1[i].iter().zip(&k2[i]).map(|(a, b)| a + b).collect();
            prop_assert_eq!(&ks[i], &sum);
        }
    }

    #[test]
    fn free_and_boolean_cumulants_add(a in moments(5), b in moments(5)) {
        let d = MomentSequence::delta(5);
        let free = |m: &MomentSequence| MeasureTriple::new(m.clone(), m.clone(), m.clone());
        let boolean = |m: &MomentSequence| MeasureTriple::new(m.clone(), d.clone(), d.clone());
        for make in [&free as &dyn Fn(&MomentSequence) -> MeasureTriple, &boolean] {
            let (t1, t2) = (make(&a), make(&b));
            let s = indented_additive(&t1, &t2);
            let k = |t: &MeasureTriple| single_cumulants(&t.lambda, &t.mu, &t.nu, 5).unwrap()[0].clone();
            let sum: Vec<Rational> = k(&t1).iter().zip(&k(&t2)).map(|(x, y)| x + y).collect();
            prop_assert_eq!(k(&s), sum);
        }
    }

    #[test]
    fn centred_variances_add(ms in prop::collection::vec(moments(4), 6), kind_ix in 0usize..9) {
        let kind = ProductKind::ALL[kind_ix];
        let a = kind.arity();
        let inputs: Vec<Vec<MomentSequence>> = ms.chunks(3).map(|c| c[..a].iter().map(centred).collect()).collect();
        let out = derived_additive(kind, &inputs).unwrap();
        for (slot, m) in out.iter().enumerate() {
            let sum: Rational = inputs.iter().map(|s| s[slot].get(2).clone()).sum();
            prop_assert_eq!(m.get(2), &sum);
        }
    }

    #[test]
    fn moment_cumulant_round_trip(t in triple(5)) {
        let k = single_cumulants(&t.lambda, &t.mu, &t.nu, 5).unwrap();
        let back = single_moments(&k[0], &k[1], &k[2]).unwrap();
        prop_assert_eq!(back, [t.lambda, t.mu, t.nu]);
    }

    #[test]
    fn f_transform_round_trip(m in moments(8)) {
        let f = moments_to_f(&m);
        prop_assert_eq!(f_to_moments(&f), m);
        prop_assert_eq!(compose(&f, &comp_inverse(&f)), FSeries::identity(8));
        prop_assert_eq!(compose(&comp_inverse(&f), &f), FSeries::identity(8));
    }

    #[test]
    fn tabulated_moments_round_trip(m in moments(6)) {
        prop_assert_eq!(MultiMomentFunctional::from_moments(&m).moments_of(0), m);
    }
}

#[test]
fn partition_counts() {
    let catalan = [1, 1, 2, 5, 14, 42, 132];
    for (n, &c) in catalan.iter().enumerate() {
        assert_eq!(enumerate_n(PartitionClass::NC, n).len(), c);
        assert_eq!(enumerate_n(PartitionClass::I, n).len(), 1 << n.saturating_sub(1));
    }
}

#[test]
fn monotone_cumulants_are_not_additive() {
    // K₃ of a monotone sum picks up a cross term once a mean is nonzero
    let d = MomentSequence::delta(3);
    let x = MomentSequence::new(vec![q(1, 1), q(1, 1), q(2, 1), q(4, 1)]).unwrap();
    let y = MomentSequence::new(vec![q(1, 1), q(0, 1), q(1, 1), q(0, 1)]).unwrap();
    let m = |a: &MomentSequence| MeasureTriple::new(a.clone(), a.clone(), d.clone());
    let s = indented_additive(&m(&x), &m(&y));
    let k = |t: &MeasureTriple| single_cumulants(&t.lambda, &t.mu, &t.nu, 3).unwrap()[1].clone();
    let (kx, ky, ks) = (k(&m(&x)), k(&m(&y)), k(&s));
    assert_eq!(ks[..2], [&kx[0] + &ky[0], &kx[1] + &ky[1]]);
    assert_ne!(ks[2], &kx[2] + &ky[2]);
}
