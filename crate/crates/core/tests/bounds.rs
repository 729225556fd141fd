mod common;

use bmoo::bounds::{volume_h1_feasible, volume_h1_infeasible, BoxBounds};
use bmoo::gp::{Posterior, PosteriorBundle};
use proptest::prelude::*;
use rand::RngExt;

/// Random box with `0` interior to the constraint ranges.
pub fn random_box(r: &mut rand_chacha::ChaCha20Rng, p: usize, q: usize) -> BoxBounds {
    let mut b = BoxBounds { low_obj: vec![], upp_obj: vec![], low_cons: vec![], upp_cons: vec![] };
    for _ in 0..p {
        let lo = r.random_range(-3.0..1.0);
        b.low_obj.push(lo);
        b.upp_obj.push(lo + r.random_range(0.5..4.0));
    }
    for _ in 0..q {
        b.low_cons.push(-r.random_range(0.2..2.0));
        b.upp_cons.push(r.random_range(0.2..2.0));
    }
    b
}

/// Monte Carlo volume of the part of `B` dominated by the raw point `e`.
fn mc_volume(b: &BoxBounds, e: &[f64], p: usize, n: usize, seed: u64) -> f64 {
    let full = b.full();
    let mut r = common::rng(seed);
    let ev = vec![e.to_vec()];
    let hits = (0..n).filter(|_| common::dominated_by_any(&ev, &common::uniform_in(&mut r, &full.low, &full.upp), p)).count();
    b.volume() * hits as f64 / n as f64
}

#[test]
fn single_point_volume_examples() {
    let b = BoxBounds { low_obj: vec![0.0], upp_obj: vec![2.0], low_cons: vec![-1.0], upp_cons: vec![1.0] };
    assert!((volume_h1_infeasible(&b, &[0.5]).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(volume_h1_infeasible(&b, &[1.0]).unwrap(), 0.0);
    assert!((volume_h1_feasible(&b, &[1.0]) - 3.0).abs() < 1e-12);
    assert!((volume_h1_feasible(&b, &[0.0]) - b.volume()).abs() < 1e-12);
    assert!((volume_h1_feasible(&b, &[2.0]) - 2.0).abs() < 1e-12);
}

#[test]
fn satisfied_constraint_jump() {
    // a violation shrinking to zero gains |low_cons| times the other factors
    let b = BoxBounds { low_obj: vec![0.0], upp_obj: vec![2.0], low_cons: vec![-1.0, -0.5], upp_cons: vec![1.0, 1.0] };
    let before = volume_h1_infeasible(&b, &[1e-12, 0.4]).unwrap();
    let after = volume_h1_infeasible(&b, &[0.0, 0.4]).unwrap();
    assert!((after - before - 2.0 * 1.0 * 0.6).abs() < 1e-9);
}

#[test]
fn volumes_match_monte_carlo() {
    // twenty configurations with p, q <= 3, half with a feasible evaluation
    let mut r = common::rng(2024);
    for cfg in 0..20 {
        let p = 1 + cfg % 3;
        let q = 1 + (cfg / 3) % 3;
        // redraw until the dominated share of B is at least 5%, so that
        // 1e6 samples resolve 2% relative error (binomial sd < 0.5%)
        let (b, e, exact) = loop {
            let b = random_box(&mut r, p, q);
            let full = b.full();
            let mut e = common::uniform_in(&mut r, &full.low, &full.upp);
            let exact = if cfg % 2 == 0 {
                for j in p..p + q {
                    e[j] = -e[j].abs() * 0.5;
                }
                volume_h1_feasible(&b, &e[..p])
            } else {
                e[p] = e[p].abs().max(0.05);
                volume_h1_infeasible(&b, &e[p..]).unwrap()
            };
            if exact >= 0.05 * b.volume() {
                break (b, e, exact);
            }
        };
        let mc = mc_volume(&b, &e, p, 1_000_000, cfg as u64);
        assert!((mc - exact).abs() <= 0.02 * exact, "config {cfg}: exact {exact} mc {mc}");
    }
}

fn bundle(r: &mut rand_chacha::ChaCha20Rng, k: usize, p: usize) -> PosteriorBundle {
    let mut post = || Posterior { mean: r.random_range(-5.0..5.0), var: r.random_range(0.0..2.0) };
    PosteriorBundle { obj: (0..p).map(|_| post()).collect(), cons: (p..k).map(|_| post()).collect() }
}

proptest! {
    #[test]
    fn bounds_contain_data_and_grow(seed in any::<u64>(), n in 1usize..10, p in 1usize..3, q in 1usize..3) {
        let mut r = common::rng(seed);
        let k = p + q;
        let evals: Vec<Vec<f64>> = (0..n).map(|_| (0..k).map(|_| r.random_range(-10.0..10.0)).collect()).collect();
        let cands: Vec<PosteriorBundle> = (0..5).map(|_| bundle(&mut r, k, p)).collect();
        let b = BoxBounds::update(&evals, &cands, p, 5.0, 5.0).unwrap();
        for e in &evals {
            prop_assert!(b.contains(e));
        }
        for j in 0..q {
            prop_assert!(b.low_cons[j] < 0.0 && b.upp_cons[j] > 0.0);
        }
        for i in 0..p {
            prop_assert!(b.low_obj[i] < b.upp_obj[i]);
        }
        let mut more = evals.clone();
        more.push((0..k).map(|_| r.random_range(-20.0..20.0)).collect());
        let b2 = BoxBounds::update(&more, &cands, p, 5.0, 5.0).unwrap();
        let (f1, f2) = (b.full(), b2.full());
        for i in 0..k {
            prop_assert!(f2.low[i] <= f1.low[i] && f2.upp[i] >= f1.upp[i]);
        }
        prop_assert!(b2.contains(more.last().unwrap()));
    }
}

#[test]
fn positive_only_constraint_gets_negative_corner() {
    let evals = vec![vec![1.0, 2.0], vec![3.0, 5.0]];
    let cand = vec![PosteriorBundle::deterministic(&[2.0], &[3.0])];
    let b = BoxBounds::update(&evals, &cand, 1, 0.0, 0.0).unwrap();
    assert!(b.low_cons[0] < 0.0 && b.low_cons[0] >= -1e-5);
}
