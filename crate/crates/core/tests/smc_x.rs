mod common;

use bmoo::bounds::SpaceBox;
use bmoo::domination::Front;
use bmoo::gp::{Posterior, PosteriorBundle};
use bmoo::rng::stream;
use bmoo::smc_x::{
    ess, factorial_density_weight, prob_improvement, residual_resample, reweight, DensityTag, ParticleSetX, SmcXConfig,
};
use proptest::prelude::*;
use rand::RngExt;

fn post(mean: f64, sd: f64) -> Posterior {
    Posterior { mean, var: sd * sd }
}

/// Independent Monte Carlo estimate of `E[K!^tag 1{xi not dominated}]`.
fn mc_oracle(b: &PosteriorBundle, evals: &[Vec<f64>], n: usize, factorial: bool, seed: u64) -> f64 {
    let p = b.obj.len();
    let mut r = common::rng(seed);
    let mut acc = 0.0;
    for _ in 0..n {
        let y: Vec<f64> = b.iter().map(|s| s.mean + s.var.sqrt() * r.sample::<f64, _>(rand_distr::StandardNormal)).collect();
        if !common::dominated_by_any(evals, &y, p) {
            let k = y[p..].iter().filter(|&&c| c <= 0.0).count();
            acc += if factorial { (1..=k).product::<usize>() as f64 } else { 1.0 };
        }
    }
    acc / n as f64
}

fn random_state(r: &mut rand_chacha::ChaCha20Rng, p: usize, q: usize) -> (PosteriorBundle, Vec<Vec<f64>>) {
    let b = PosteriorBundle {
        obj: (0..p).map(|_| post(r.random_range(-1.0..1.0), r.random_range(0.2..1.5))).collect(),
        cons: (0..q).map(|_| post(r.random_range(-1.0..1.0), r.random_range(0.2..1.5))).collect(),
    };
    let n = r.random_range(1..4);
    let evals = (0..n).map(|_| (0..p + q).map(|_| r.random_range(-1.5..1.5)).collect()).collect();
    (b, evals)
}

fn front_of(evals: &[Vec<f64>], p: usize, q: usize) -> Front {
    Front::from_raw(p, q, evals.iter().map(|v| v.as_slice()))
}

#[test]
fn ess_examples() {
    assert_eq!(ess(&[0.25; 4]), 4.0);
    assert_eq!(ess(&[1.0, 0.0, 0.0]), 1.0);
    assert!((ess(&[0.5, 0.25, 0.25]) - 1.0 / 0.375).abs() < 1e-12);
}

#[test]
fn reweight_examples() {
    let mut w = vec![0.5, 0.5];
    reweight(&mut w, &[1.0, 1.0], &[1.0, 3.0]).unwrap();
    assert!((w[0] - 0.25).abs() < 1e-15 && (w[1] - 0.75).abs() < 1e-15);
    let mut w = vec![0.2, 0.3, 0.5];
    reweight(&mut w, &[0.5, 0.0, 1.0], &[0.5, 2.0, 1.0]).unwrap();
    assert_eq!(w[1], 0.0);
    assert!((w[0] - 0.2 / 0.7).abs() < 1e-12);
    let mut w = vec![0.5, 0.5];
    assert!(reweight(&mut w, &[1.0, 1.0], &[0.0, 0.0]).is_err());
}

#[test]
fn residual_resampling_exact_cases() {
    let mut r = stream(1, "res", 0);
    assert_eq!(residual_resample(&[0.5, 0.5], 2, &mut r), vec![0, 1]);
    assert_eq!(residual_resample(&[1.0, 0.0], 3, &mut r), vec![0, 0, 0]);
    let mut idx = residual_resample(&[0.25, 0.5, 0.25], 4, &mut r);
    idx.sort();
    assert_eq!(idx, vec![0, 1, 1, 2]);
}

#[test]
fn residual_resampling_is_unbiased() {
    let mut r = stream(2, "res", 0);
    let trials = 10_000;
    let mut ones = 0usize;
    for _ in 0..trials {
        let idx = residual_resample(&[0.3, 0.7], 3, &mut r);
        assert_eq!(idx.len(), 3);
        // floor(0.9) = 0 and floor(2.1) = 2 copies are deterministic
        assert!(idx.iter().filter(|&&k| k == 1).count() >= 2);
        ones += idx.iter().filter(|&&k| k == 1).count();
    }
    let mean = ones as f64 / trials as f64;
    // one residual draw, index 1 with probability 0.1 / 1.0
    assert!((mean - 2.1).abs() < 4.0 * (0.1f64 * 0.9 / trials as f64).sqrt(), "{mean}");
}

#[test]
fn prob_improvement_matches_monte_carlo() {
    let mut r = common::rng(30);
    for s in 0..20 {
        let (p, q) = (1 + s % 2, 1 + (s / 2) % 2);
        let (b, evals) = random_state(&mut r, p, q);
        let front = front_of(&evals, p, q);
        let got = prob_improvement(&b, &front, 100_000, &mut stream(s as u64, "pi", 0));
        let want = mc_oracle(&b, &evals, 100_000, false, s as u64 + 1000);
        let tol = 4.0 * (2.0 * want.max(0.01) * (1.0 - want).max(0.01) / 100_000.0).sqrt();
        assert!((got - want).abs() <= tol, "state {s}: {got} vs {want}");
    }
}

#[test]
fn prob_improvement_closed_form_single_objective() {
    // p = 1 with a feasible evaluation: Phi((t - mu) / sd) prod Phi(-mu_j / sd_j)
    let b = PosteriorBundle { obj: vec![post(0.3, 0.8)], cons: vec![post(-0.2, 0.5), post(0.4, 1.1)] };
    let evals = vec![vec![0.5, -0.1, -0.3], vec![0.1, 0.2, -1.0]];
    let front = front_of(&evals, 1, 2);
    let want = common::below(0.5, 0.3, 0.8) * common::below(0.0, -0.2, 0.5) * common::below(0.0, 0.4, 1.1);
    let got = prob_improvement(&b, &front, 10, &mut stream(3, "pi", 0));
    assert!((got - want).abs() < 1e-12);
    let mc = mc_oracle(&b, &evals, 200_000, false, 4);
    assert!((mc - want).abs() < 4.0 * (want / 200_000.0).sqrt());
}

#[test]
fn prob_improvement_limits() {
    let b = PosteriorBundle { obj: vec![post(0.0, 1.0), post(0.0, 1.0)], cons: vec![post(0.5, 1.0)] };
    let mut r = stream(5, "pi", 0);
    assert_eq!(prob_improvement(&b, &Front::empty(2, 1), 1000, &mut r), 1.0);
    let dominated = PosteriorBundle::deterministic(&[1.0, 1.0], &[-1.0]);
    let front = front_of(&[vec![0.0, 0.0, -2.0]], 2, 1);
    assert_eq!(prob_improvement(&dominated, &front, 1000, &mut r), 0.0);
}

#[test]
fn factorial_weight_examples() {
    let mut r = stream(6, "fact", 0);
    // deterministic, all three constraints satisfied, nothing on the front
    let b = PosteriorBundle::deterministic(&[0.0], &[-1.0, -2.0, -0.5]);
    assert_eq!(factorial_density_weight(&b, &Front::empty(1, 3), 50, &mut r), 6.0);
    let b = PosteriorBundle::deterministic(&[0.0], &[-1.0, 2.0, -0.5]);
    assert_eq!(factorial_density_weight(&b, &Front::empty(1, 3), 50, &mut r), 2.0);
    let mut s = common::rng(7);
    for i in 0..5 {
        let (b, evals) = random_state(&mut s, 2, 3);
        let front = front_of(&evals, 2, 3);
        let got = factorial_density_weight(&b, &front, 200_000, &mut stream(i, "fact", 1));
        let want = mc_oracle(&b, &evals, 200_000, true, 100 + i);
        assert!((got - want).abs() <= 0.03 * want.max(0.05), "{got} vs {want}");
    }
}

/// Near-perfect models of `c_j(x) = |x_j| - eps / 2` on `[-1/2, 1/2]^5`.
fn box_bundle(x: &[f64], eps: f64) -> PosteriorBundle {
    PosteriorBundle { obj: vec![post(0.0, 1.0)], cons: x.iter().map(|v| post(v.abs() - eps / 2.0, 1e-3)).collect() }
}

/// Particles inside `C` after ten steps toward the front of `xi(1/2, ..., 1/2)`.
pub fn feasible_particle_count(tag: DensityTag, seed: u64) -> usize {
    let (q, eps) = (5, 0.2);
    let cfg = SmcXConfig { m: 1000, density: tag, ..SmcXConfig::default() };
    let (lower, upper) = (vec![-0.5; q], vec![0.5; q]);
    let mut raw = vec![0.0];
    raw.extend(std::iter::repeat_n(0.5 - eps / 2.0, q));
    let target = Front::from_raw(1, q, [raw.as_slice()]);
    let space = SpaceBox { p: 1, low: [vec![-5.0], vec![-0.2; q]].concat(), upp: [vec![5.0], vec![0.5; q]].concat() };
    let mut set = ParticleSetX::init(&lower, &upper, 1, q, &cfg, stream(seed, "factorial", 0));
    let mut model = |x: &[f64]| box_bundle(x, eps);
    for _ in 0..10 {
        set.step(&mut model, &target, &space, &cfg);
    }
    set.particles().filter(|x| x.iter().all(|v| v.abs() <= eps / 2.0)).count()
}

#[test]
fn factorial_density_favours_the_feasible_set() {
    // uniform sampling puts m eps^5 = 0.32 particles in C; the factorial density
    // raises the share to 120 eps^5 / E[K!] = 0.023
    let wins = (0..10)
        .filter(|&s| feasible_particle_count(DensityTag::Factorial, s) > feasible_particle_count(DensityTag::Plain, s))
        .count();
    assert!(wins >= 8, "factorial ahead in {wins}/10 seeds");
}

#[test]
fn steps_keep_weights_normalized_and_ess() {
    let cfg = SmcXConfig { m: 500, ..SmcXConfig::default() };
    let mut set = ParticleSetX::init(&[0.0, 0.0], &[1.0, 1.0], 2, 1, &cfg, stream(8, "step", 0));
    let space = SpaceBox { p: 2, low: vec![-3.0, -3.0, -2.0], upp: vec![3.0, 3.0, 2.0] };
    let mut model = |x: &[f64]| PosteriorBundle {
        obj: vec![post(x[0] - 0.5, 0.3), post(0.5 - x[0] + x[1], 0.3)],
        cons: vec![post(x[1] - 0.6, 0.2)],
    };
    let mut evals: Vec<Vec<f64>> = Vec::new();
    let mut r = common::rng(9);
    for _ in 0..4 {
        evals.push(vec![r.random_range(-1.0..1.0), r.random_range(-1.0..1.0), r.random_range(-0.5..0.5)]);
        let target = front_of(&evals, 2, 1);
        let stats = set.step(&mut model, &target, &space, &cfg);
        let total: f64 = set.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(set.weights().iter().all(|&w| w >= 0.0));
        assert!(stats.restarted || stats.ess_after_reweight >= cfg.nu * cfg.m as f64);
        assert!(set.front().same_set(&target));
        assert!(set.particles().all(|x| x.iter().all(|v| (0.0..=1.0).contains(v))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reweight_normalizes(w in prop::collection::vec(0.01f64..1.0, 2..20), seed in any::<u64>()) {
        let s: f64 = w.iter().sum();
        let mut w: Vec<f64> = w.iter().map(|v| v / s).collect();
        let mut r = common::rng(seed);
        let old: Vec<f64> = w.iter().map(|_| r.random_range(0.1..2.0)).collect();
        let new: Vec<f64> = w.iter().map(|_| r.random_range(0.0..2.0)).collect();
        if reweight(&mut w, &old, &new).is_ok() {
            prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let e = ess(&w);
            prop_assert!(e >= 1.0 - 1e-9 && e <= w.len() as f64 + 1e-9);
        }
    }

    #[test]
    fn residual_keeps_deterministic_copies(w in prop::collection::vec(0.0f64..1.0, 1..10), m in 1usize..50, seed in any::<u64>()) {
        let s: f64 = w.iter().sum();
        prop_assume!(s > 0.0);
        let w: Vec<f64> = w.iter().map(|v| v / s).collect();
        let idx = residual_resample(&w, m, &mut stream(seed, "res", 0));
        prop_assert_eq!(idx.len(), m);
        for (k, wk) in w.iter().enumerate() {
            let c = idx.iter().filter(|&&i| i == k).count();
            prop_assert!(c as f64 >= (m as f64 * wk).floor() - 1e-9);
        }
    }
}
