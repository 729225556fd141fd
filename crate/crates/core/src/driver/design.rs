//! Maximin Latin hypercube designs.

use crate::rng::StreamRng;
use rand::seq::SliceRandom;
use rand::RngExt;

/// Unit-cube Latin hypercube with `n` points in `d` dimensions.
pub fn latin_hypercube(n: usize, d: usize, rng: &mut StreamRng) -> Vec<Vec<f64>> {
    let mut pts = vec![vec![0.0; d]; n];
    let mut perm: Vec<usize> = (0..n).collect();
    for j in 0..d {
        perm.shuffle(rng);
        for (i, &s) in perm.iter().enumerate() {
            pts[i][j] = (s as f64 + rng.random::<f64>()) / n as f64;
        }
    }
    pts
}

pub fn min_pairwise_distance(pts: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d2: f64 = pts[i].iter().zip(&pts[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            best = best.min(d2);
        }
    }
    best.sqrt()
}

/// Best of `candidates` random Latin hypercubes by minimum pairwise distance,
/// scaled to `[lower, upper]`.
pub fn initial_design(n: usize, lower: &[f64], upper: &[f64], candidates: usize, rng: &mut StreamRng) -> Vec<Vec<f64>> {
    let d = lower.len();
    let mut best = latin_hypercube(n, d, rng);
    let mut score = min_pairwise_distance(&best);
    for _ in 1..candidates {
        let c = latin_hypercube(n, d, rng);
        let s = min_pairwise_distance(&c);
        if s > score {
            best = c;
            score = s;
        }
    }
    best.iter()
        .map(|u| u.iter().enumerate().map(|(j, v)| lower[j] + v * (upper[j] - lower[j])).collect())
        .collect()
}
