//! Randomized check suites behind `ncprob verify`.

use ncprob::convolutions::{derived_additive, indented_additive, ofree_additive, MeasureTriple};
use ncprob::fock::{Matrix, MatrixStateModel, Representation, TruncatedFockSpace};
use ncprob::freeprod::{
    convolve_moments, random_moments, random_small_rational, random_triple, verify_independence, words, Condition,
    Evaluator, Gen, StateTriple, Symbol, TripleNodes,
};
use ncprob::kind::{Component, ProductKind};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::Suite;

/// Failures listed in a report; the count is always exact.
const MAX_LISTED: usize = 20;

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
    failed: usize,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_LISTED {
                self.failures.push(what());
            }
        }
    }

    fn report(self, name: &str) -> Value {
        json!({
            "suite": name,
            "checks": self.checks,
            "failed": self.failed,
            "failures": self.failures,
            "passed": self.failed == 0,
        })
    }
}

fn gen_words(models_alphabets: &[usize], max_len: usize) -> Vec<Vec<Gen>> {
    let mut out = Vec::new();
    for w in words(models_alphabets.len(), max_len) {
        let mut partial: Vec<Vec<Gen>> = vec![Vec::new()];
        for &f in &w {
            let f = f as usize;
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    (0..models_alphabets[f] as Symbol).map(move |s| {
                        let mut q = p.clone();
                        q.push(Gen::new(f, s));
                        q
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    out
}

fn associativity(r: &mut ChaCha8Rng, trials: usize, degree: usize) -> Value {
    let mut t = Tally::default();
    let ws = gen_words(&[1, 1, 1], degree);
    for trial in 0..trials {
        let ts: Vec<StateTriple> = (0..3).map(|_| random_triple(vec!["x".into()], degree, r)).collect();
        let mut ev = Evaluator::new();
        let nodes: Vec<TripleNodes> = ts.iter().enumerate().map(|(k, s)| ev.state_triple(k, s)).collect();
        let left = ev.left_fold(&nodes);
        let right = ev.right_fold(&nodes);
        for w in &ws {
            for c in Component::ALL {
                let a = ev.eval(left.component(c), w);
                let b = ev.eval(right.component(c), w);
                t.check(a.is_ok() && a == b, || format!("product, trial {trial}, {c:?} on {w:?}"));
            }
        }
    }
    for trial in 0..trials {
        let m: Vec<MeasureTriple> = (0..3)
            .map(|_| MeasureTriple::new(random_moments(degree, r), random_moments(degree, r), random_moments(degree, r)))
            .collect();
        let left = indented_additive(&indented_additive(&m[0], &m[1]), &m[2]);
        let right = indented_additive(&m[0], &indented_additive(&m[1], &m[2]));
        t.check(left == right, || format!("indented convolution, trial {trial}"));
        let p: Vec<_> = m.iter().map(|x| (x.mu.clone(), x.nu.clone())).collect();
        let of = |a: &(_, _), b: &(_, _)| ofree_additive((&a.0, &a.1), (&b.0, &b.1));
        t.check(of(&of(&p[0], &p[1]), &p[2]) == of(&p[0], &of(&p[1], &p[2])), || {
            format!("o-free convolution, trial {trial}")
        });
    }
    t.report("associativity")
}

fn dual_route(r: &mut ChaCha8Rng, trials: usize, degree: usize) -> Value {
    let mut t = Tally::default();
    for kind in ProductKind::ALL {
        for trial in 0..trials {
            let factors = 2 + trial % 2;
            let inputs: Vec<Vec<_>> =
                (0..factors).map(|_| (0..kind.arity()).map(|_| random_moments(degree, r)).collect()).collect();
            let a = derived_additive(kind, &inputs);
            let b = convolve_moments(kind, &inputs, degree);
            t.check(a.is_ok() && a == b, || format!("{kind}, trial {trial}, {factors} factors"));
        }
    }
    t.report("dual-route")
}

fn independence(r: &mut ChaCha8Rng, trials: usize, degree: usize) -> Value {
    let mut t = Tally::default();
    let alphabet: Vec<String> = vec!["x".into(), "y".into()];
    let factors: Vec<StateTriple> = (0..3).map(|_| random_triple(alphabet.clone(), degree, r)).collect();
    for condition in Condition::ALL {
        let rep = verify_independence(condition, &factors, trials, degree, r);
        t.checks += rep.trials - rep.vacuous;
        for v in &rep.violations {
            t.failed += 1;
            if t.failures.len() < MAX_LISTED {
                let value = v.value.as_ref().map_or_else(|| "error".to_string(), ToString::to_string);
                t.failures.push(format!("{condition}: {:?} on word {:?} gave {value}", v.component, v.word.indices()));
            }
        }
    }
    t.report("independence")
}

fn random_matrix(r: &mut ChaCha8Rng, dim: usize) -> Matrix {
    (0..dim).map(|_| (0..dim).map(|_| random_small_rational(r)).collect()).collect()
}

fn random_model(r: &mut ChaCha8Rng, dim: usize) -> MatrixStateModel {
    let mut rep = || vec![random_matrix(r, dim)];
    let (pi, sigma, rho) = (rep(), rep(), rep());
    MatrixStateModel::new(dim, vec!["x".into()], pi, sigma, rho).expect("square matrices of one size")
}

fn fock(r: &mut ChaCha8Rng, degree: usize, fixture: Option<MatrixStateModel>) -> Value {
    let mut t = Tally::default();
    let models = match fixture {
        Some(m) => vec![m.clone(), MatrixStateModel::bernoulli(), m],
        None => vec![MatrixStateModel::bernoulli(), random_model(r, 2), random_model(r, 3)],
    };
    let space = TruncatedFockSpace::new(models.clone(), degree);
    let ts: Vec<StateTriple> = models
        .iter()
        .map(|m| {
            let s = |rep| m.state(rep, degree);
            StateTriple::new(s(Representation::Pi), s(Representation::Sigma), s(Representation::Rho))
                .expect("states of one model share a shape")
        })
        .collect();
    let mut ev = Evaluator::new();
    let nodes: Vec<TripleNodes> = ts.iter().enumerate().map(|(k, s)| ev.state_triple(k, s)).collect();
    let top = ev.left_fold(&nodes);
    let sizes: Vec<usize> = models.iter().map(|m| m.alphabet().len()).collect();
    for w in gen_words(&sizes, degree) {
        let ji = space.j_indented(&w);
        let phi = ev.eval(top.phi, &w);
        t.check(ji.is_ok() && ji == phi, || format!("J^I on {w:?}"));
        let jo = space.j_ofree(&w);
        let psi = ev.eval(top.psi, &w);
        t.check(jo.is_ok() && jo == psi, || format!("J^OF on {w:?}"));
    }
    t.report("fock")
}

/// Runs the selected suites; each draws from its own stream derived from `seed`,
/// so a suite reports the same result alone or within `all`.
pub fn run(
    suite: Suite,
    seed: u64,
    trials: usize,
    degree: usize,
    fixture: Option<MatrixStateModel>,
) -> Result<(Value, bool), String> {
    if fixture.is_some() && !matches!(suite, Suite::All | Suite::Fock) {
        return Err("--fixture only applies to the fock suite".into());
    }
    let rng = |stream: u64| {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        r.set_stream(stream);
        r
    };
    let mut reports = Vec::new();
    if matches!(suite, Suite::All | Suite::Associativity) {
        reports.push(associativity(&mut rng(1), trials, degree));
    }
    if matches!(suite, Suite::All | Suite::DualRoute) {
        reports.push(dual_route(&mut rng(2), trials, degree));
    }
    if matches!(suite, Suite::All | Suite::Independence) {
        reports.push(independence(&mut rng(3), trials, degree));
    }
    if matches!(suite, Suite::All | Suite::Fock) {
        reports.push(fock(&mut rng(4), degree, fixture));
    }
    let passed = reports.iter().all(|r| r["passed"] == json!(true));
    Ok((json!({ "seed": seed, "trials": trials, "degree": degree, "suites": reports, "passed": passed }), passed))
}
