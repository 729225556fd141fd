//! Particles uniformly distributed on the non-dominated region `G` of a box,
//! maintained by subset simulation as the front grows.

pub mod levels;

use crate::bounds::SpaceBox;
use crate::domination::{psi_into, Front};
use crate::error::{BmooError, Result};
use crate::rng::StreamRng;
use rand::RngExt;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmcYConfig {
    pub m: usize,
    /// Minimal surviving fraction per level.
    pub nu: f64,
    pub mh_sweeps: usize,
    /// Random-walk scale relative to the particle spread.
    pub step_scale: f64,
    pub max_bisect: usize,
    pub max_levels: usize,
    pub max_restarts: usize,
}

impl Default for SmcYConfig {
    fn default() -> Self {
        SmcYConfig {
            m: 1000,
            nu: 0.2,
            mh_sweeps: 10,
            step_scale: 0.2,
            max_bisect: 30,
            max_levels: 500,
            max_restarts: 3,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AdvanceStats {
    pub levels: usize,
    /// Surviving particle count at each level.
    pub survivors: Vec<usize>,
    pub restarts: usize,
}

#[derive(Debug, Clone)]
pub struct ParticleSetY {
    space: SpaceBox,
    /// Row-major `m x k` particle coordinates.
    y: Vec<f64>,
    m: usize,
    front: Front,
    /// `ln(|G| / |B|)` accumulated from survival fractions.
    log_ratio: f64,
    rng: StreamRng,
}

impl ParticleSetY {
    /// `m` i.i.d. uniform points on the box; empty front.
    pub fn init_uniform(space: SpaceBox, m: usize, mut rng: StreamRng) -> Self {
        let k = space.dim();
        let mut y = vec![0.0; m * k];
        for r in 0..m {
            for i in 0..k {
                y[r * k + i] = space.low[i] + rng.random::<f64>() * (space.upp[i] - space.low[i]);
            }
        }
        let front = Front::empty(space.p, space.q());
        ParticleSetY { space, y, m, front, log_ratio: 0.0, rng }
    }

    /// Uniform particles on `G(target)`, restarting from the empty front on collapse.
    pub fn build(space: SpaceBox, target: &Front, cfg: &SmcYConfig, rng: StreamRng) -> Result<(Self, AdvanceStats)> {
        let mut set = ParticleSetY::init_uniform(space.clone(), cfg.m, rng);
        let mut restarts = 0;
        loop {
            match set.advance_front(target, cfg) {
                Ok(mut stats) => {
                    stats.restarts = restarts;
                    return Ok((set, stats));
                }
                Err(e) if restarts >= cfg.max_restarts => return Err(e),
                Err(_) => {
                    restarts += 1;
                    let rng = set.rng.clone();
                    set = ParticleSetY::init_uniform(space.clone(), cfg.m, rng);
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn space(&self) -> &SpaceBox {
        &self.space
    }

    pub fn front(&self) -> &Front {
        &self.front
    }

    pub fn particle(&self, i: usize) -> &[f64] {
        let k = self.space.dim();
        &self.y[i * k..(i + 1) * k]
    }

    pub fn particles(&self) -> impl Iterator<Item = &[f64]> {
        self.y.chunks_exact(self.space.dim())
    }

    /// Estimate of `|G|` from the product of level survival fractions.
    pub fn region_volume(&self) -> f64 {
        self.space.volume() * self.log_ratio.exp()
    }

    /// Number of particles not dominated by `front`.
    pub fn count_in_region(&self, front: &Front) -> usize {
        let mut buf = vec![0.0; self.space.dim()];
        self.particles().filter(|y| !front.dominates_raw(y, &mut buf)).count()
    }

    /// Moves the population from `G(self.front)` to `G(target)` through
    /// intermediate fronts that keep at least `nu * m` survivors per level.
    pub fn advance_front(&mut self, target: &Front, cfg: &SmcYConfig) -> Result<AdvanceStats> {
        let mut stats = AdvanceStats::default();
        let threshold = cfg.nu * self.m as f64;
        while !self.front.same_set(target) {
            if stats.levels >= cfg.max_levels {
                return Err(BmooError::Degenerate("too many intermediate levels".into()));
            }
            let current = self.front.clone();
            let mut rng = self.rng.clone();
            let next = {
                let mut score = |f: &Front| self.count_in_region(f) as f64;
                levels::next_front(&current, target, &self.space, threshold, &mut score, &mut rng, cfg.max_bisect)
            };
            self.rng = rng;
            let survivors = self.remove_resample(&next)?;
            stats.survivors.push(survivors);
            stats.levels += 1;
            self.move_mh(cfg.mh_sweeps, cfg.step_scale);
        }
        Ok(stats)
    }

    /// Remove particles dominated by `front`, replicate survivors uniformly.
    fn remove_resample(&mut self, front: &Front) -> Result<usize> {
        let k = self.space.dim();
        let mut buf = vec![0.0; k];
        let alive: Vec<usize> = (0..self.m).filter(|&i| !front.dominates_raw(self.particle(i), &mut buf)).collect();
        if alive.is_empty() {
            return Err(BmooError::Degenerate("no particle survived".into()));
        }
        let mut y = Vec::with_capacity(self.m * k);
        for &i in &alive {
            y.extend_from_slice(self.particle(i));
        }
        for _ in alive.len()..self.m {
            let i = alive[self.rng.random_range(0..alive.len())];
            y.extend_from_slice(self.particle(i));
        }
        self.y = y;
        self.log_ratio += (alive.len() as f64 / self.m as f64).ln();
        self.front = front.clone();
        Ok(alive.len())
    }

    /// Random-walk Metropolis sweeps targeting the uniform law on `G`.
    /// Returns the acceptance rate.
    pub fn move_mh(&mut self, sweeps: usize, step_scale: f64) -> f64 {
        let k = self.space.dim();
        let m = self.m;
        let mut scale = vec![0.0; k];
        for i in 0..k {
            let mean = (0..m).map(|r| self.y[r * k + i]).sum::<f64>() / m as f64;
            let var = (0..m).map(|r| (self.y[r * k + i] - mean).powi(2)).sum::<f64>() / m as f64;
            let span = self.space.upp[i] - self.space.low[i];
            scale[i] = (step_scale * var.sqrt()).max(1e-6 * span);
        }
        let mut prop = vec![0.0; k];
        let mut buf = vec![0.0; k];
        let mut accepted = 0usize;
        for _ in 0..sweeps {
            for r in 0..m {
                for i in 0..k {
                    let z: f64 = StandardNormal.sample(&mut self.rng);
                    prop[i] = self.y[r * k + i] + scale[i] * z;
                }
                if self.space.contains(&prop) && !self.front.dominates_raw(&prop, &mut buf) {
                    self.y[r * k..(r + 1) * k].copy_from_slice(&prop);
                    accepted += 1;
                }
            }
        }
        accepted as f64 / (sweeps * m).max(1) as f64
    }

    /// `|G| * mean_k integrand(y_k)`.
    pub fn estimate_integral<F: FnMut(&[f64]) -> f64>(&self, mut integrand: F) -> f64 {
        let s: f64 = self.particles().map(&mut integrand).sum();
        self.region_volume() * s / self.m as f64
    }

    /// Whether every particle lies in the box and outside the dominated region.
    pub fn all_in_region(&self) -> bool {
        let mut buf = vec![0.0; self.space.dim()];
        self.particles().all(|y| self.space.contains(y) && !self.front.dominates_raw(y, &mut buf))
    }
}

/// Mapped image helper for callers holding raw points.
pub fn map_point(y: &[f64], p: usize) -> Vec<f64> {
    let mut out = vec![0.0; y.len()];
    psi_into(y, p, &mut out);
    out
}
