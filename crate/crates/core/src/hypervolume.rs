//! Dominated hyper-volume of feasible objective vectors below a reference point.
//!
//! Boxes are half-open: a coordinate equal to the reference contributes zero measure.

use crate::error::{BmooError, Result};
use crate::rng::StreamRng;
use rand::{RngExt, SeedableRng};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HvReference {
    pub ref_point: Vec<f64>,
    pub ref_volume: f64,
    /// Lower corner of the Monte Carlo sampling box.
    pub lower: Option<Vec<f64>>,
}

/// Exact area dominated by 2-D points inside `[., ref]`.
pub fn hv_exact_2d(points: &[Vec<f64>], reference: &[f64]) -> Result<f64> {
    if reference.len() != 2 || points.iter().any(|p| p.len() != 2) {
        return Err(BmooError::Dimension { expected: 2, got: reference.len() });
    }
    let mut pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p[0] < reference[0] && p[1] < reference[1])
        .map(|p| (p[0], p[1]))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut area = 0.0;
    let mut level = reference[1];
    for (x, y) in pts {
        if y < level {
            area += (reference[0] - x) * (level - y);
            level = y;
        }
    }
    Ok(area)
}

/// Uniform samples in `[lower, reference]` with an incrementally updated
/// dominated flag, so successive estimates share the same samples.
#[derive(Debug, Clone)]
pub struct MonteCarloHv {
    samples: Vec<f64>,
    dominated: Vec<bool>,
    count: usize,
    dim: usize,
    box_volume: f64,
}

impl MonteCarloHv {
    pub fn new(lower: &[f64], reference: &[f64], n_samples: usize, seed: u64) -> Self {
        let dim = reference.len();
        let mut rng = StreamRng::seed_from_u64(seed);
        let mut samples = Vec::with_capacity(n_samples * dim);
        for _ in 0..n_samples {
            for i in 0..dim {
                samples.push(lower[i] + rng.random::<f64>() * (reference[i] - lower[i]));
            }
        }
        let box_volume = lower.iter().zip(reference).map(|(l, r)| (r - l).max(0.0)).product();
        MonteCarloHv { samples, dominated: vec![false; n_samples], count: 0, dim, box_volume }
    }

    pub fn add(&mut self, point: &[f64]) {
        for (s, flag) in self.samples.chunks_exact(self.dim).zip(self.dominated.iter_mut()) {
            if !*flag && point.iter().zip(s).all(|(a, b)| a <= b) {
                *flag = true;
                self.count += 1;
            }
        }
    }

    /// `(estimate, binomial sd)`.
    pub fn estimate(&self) -> (f64, f64) {
        let n = self.dominated.len() as f64;
        let f = self.count as f64 / n;
        (self.box_volume * f, self.box_volume * (f * (1.0 - f) / n).sqrt())
    }
}

/// Monte Carlo estimate of the volume dominated by `points` inside `[lower, reference]`.
pub fn hv_monte_carlo(points: &[Vec<f64>], lower: &[f64], reference: &[f64], n_samples: usize, seed: u64) -> (f64, f64) {
    let mut mc = MonteCarloHv::new(lower, reference, n_samples, seed);
    for p in points {
        mc.add(p);
    }
    mc.estimate()
}

pub const MC_SAMPLES: usize = 200_000;
pub const MC_SEED: u64 = 0x4856;

/// Fraction of the reference volume dominated after each evaluation,
/// counting feasible points only, capped at 1.
pub fn hv_fraction(objectives: &[Vec<f64>], feasible: &[bool], reference: &HvReference) -> Result<Vec<f64>> {
    let p = reference.ref_point.len();
    let mut out = Vec::with_capacity(objectives.len());
    if p == 2 {
        let mut front: Vec<Vec<f64>> = Vec::new();
        let mut last = 0.0;
        for (f, &ok) in objectives.iter().zip(feasible) {
            if ok {
                front.push(f.clone());
                last = hv_exact_2d(&front, &reference.ref_point)?;
            }
            out.push((last / reference.ref_volume).min(1.0));
        }
    } else {
        let lower = match &reference.lower {
            Some(l) => l.clone(),
            None => {
                let mut l = reference.ref_point.clone();
                for (f, &ok) in objectives.iter().zip(feasible) {
                    if ok {
                        for i in 0..p {
                            l[i] = l[i].min(f[i]);
                        }
                    }
                }
                l
            }
        };
        let mut mc = MonteCarloHv::new(&lower, &reference.ref_point, MC_SAMPLES, MC_SEED);
        for (f, &ok) in objectives.iter().zip(feasible) {
            if ok {
                mc.add(f);
            }
            out.push((mc.estimate().0 / reference.ref_volume).min(1.0));
        }
    }
    Ok(out)
}
