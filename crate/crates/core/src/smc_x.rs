//! Weighted particles on the search domain targeting the probability of
//! improvement `P_n(xi(x) in G_n)`, updated by reweighting, residual
//! resampling and pseudo-marginal Metropolis moves.

use crate::bounds::SpaceBox;
use crate::domination::{psi_into, Front};
use crate::error::{BmooError, Result};
use crate::gp::PosteriorBundle;
use crate::normal::prob_below;
use crate::rng::StreamRng;
use crate::smc_y::levels::next_front;
use rand::{Rng, RngExt};
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityTag {
    Plain,
    /// `E[K! 1{xi in G}]` with `K` the number of satisfied constraints.
    Factorial,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmcXConfig {
    pub m: usize,
    /// ESS fraction below which intermediate densities are inserted.
    pub nu: f64,
    pub mh_sweeps: usize,
    /// Gaussian draws per density estimate.
    pub n_draws: usize,
    pub target_accept: f64,
    pub density: DensityTag,
    pub max_levels: usize,
    pub max_bisect: usize,
}

impl Default for SmcXConfig {
    fn default() -> Self {
        SmcXConfig {
            m: 1000,
            nu: 0.2,
            mh_sweeps: 5,
            n_draws: 100,
            target_accept: 0.3,
            density: DensityTag::Plain,
            max_levels: 50,
            max_bisect: 30,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StepStats {
    pub levels: usize,
    pub restarted: bool,
    pub ess_after_reweight: f64,
    pub acceptance: f64,
}

/// `1 / sum w^2` for normalized weights.
pub fn ess(w: &[f64]) -> f64 {
    1.0 / w.iter().map(|v| v * v).sum::<f64>()
}

/// `w_k <- w_k new_k / old_k`, renormalized. Zero-weight particles stay at zero.
pub fn reweight(w: &mut [f64], old: &[f64], new: &[f64]) -> Result<()> {
    for k in 0..w.len() {
        w[k] = if w[k] > 0.0 && old[k] > 0.0 { w[k] * new[k] / old[k] } else { 0.0 };
    }
    let s: f64 = w.iter().sum();
    if !(s > 0.0) || !s.is_finite() {
        return Err(BmooError::Degenerate("all importance weights vanished".into()));
    }
    w.iter_mut().for_each(|v| *v /= s);
    Ok(())
}

/// Residual resampling: `floor(m w_k)` deterministic copies, the remainder
/// drawn multinomially from the residual weights.
pub fn residual_resample<R: Rng + ?Sized>(w: &[f64], m: usize, rng: &mut R) -> Vec<usize> {
    let mut idx = Vec::with_capacity(m);
    let mut resid = vec![0.0; w.len()];
    for (k, &wk) in w.iter().enumerate() {
        let c = (m as f64 * wk).floor() as usize;
        idx.extend(std::iter::repeat_n(k, c));
        resid[k] = m as f64 * wk - c as f64;
    }
    let rest = m.saturating_sub(idx.len());
    if rest > 0 {
        let total: f64 = resid.iter().sum();
        let mut cum = Vec::with_capacity(resid.len());
        let mut acc = 0.0;
        for r in &resid {
            acc += r / total;
            cum.push(acc);
        }
        for _ in 0..rest {
            let u: f64 = rng.random::<f64>() * acc;
            let k = cum.partition_point(|&c| c <= u).min(w.len() - 1);
            idx.push(k);
        }
    }
    idx.truncate(m);
    idx
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// Probability of improvement in closed form when `p = 1` and the front
/// holds a feasible point, so only `(t, 0)` matters.
fn closed_form(bundle: &PosteriorBundle, front: &Front) -> Option<f64> {
    if bundle.obj.len() != 1 || !front.has_feasible() {
        return None;
    }
    let t = front
        .points
        .iter()
        .filter(|a| a[1..].iter().all(|&c| c == 0.0))
        .map(|a| a[0])
        .fold(f64::INFINITY, f64::min);
    let o = &bundle.obj[0];
    let pf: f64 = bundle.cons.iter().map(|c| prob_below(0.0, c.mean, c.sd())).product();
    Some(prob_below(t, o.mean, o.sd()) * pf)
}

/// Mapped draws `psi(mu + sd z)` and their weights (`K!` or 1).
fn draw_images(mean: &[f64], sd: &[f64], z: &[f64], p: usize, tag: DensityTag, img: &mut [f64], val: &mut [f64]) {
    let k = mean.len();
    let mut raw = vec![0.0; k];
    for (j, (zj, out)) in z.chunks_exact(k).zip(img.chunks_exact_mut(k)).enumerate() {
        for i in 0..k {
            raw[i] = mean[i] + sd[i] * zj[i];
        }
        psi_into(&raw, p, out);
        val[j] = match tag {
            DensityTag::Plain => 1.0,
            DensityTag::Factorial => factorial(raw[p..].iter().filter(|&&c| c <= 0.0).count()),
        };
    }
}

fn sample_z<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    for v in out.iter_mut() {
        *v = StandardNormal.sample(rng);
    }
}

fn mc_estimate<R: Rng + ?Sized>(bundle: &PosteriorBundle, front: &Front, n: usize, tag: DensityTag, rng: &mut R) -> f64 {
    let p = bundle.obj.len();
    let k = p + bundle.cons.len();
    let mean: Vec<f64> = bundle.iter().map(|b| b.mean).collect();
    let sd: Vec<f64> = bundle.iter().map(|b| b.sd()).collect();
    let mut z = vec![0.0; n * k];
    sample_z(rng, &mut z);
    let mut img = vec![0.0; n * k];
    let mut val = vec![0.0; n];
    draw_images(&mean, &sd, &z, p, tag, &mut img, &mut val);
    img.chunks_exact(k).zip(&val).filter(|(y, _)| !front.dominates_mapped(y)).map(|(_, v)| v).sum::<f64>() / n as f64
}

/// `P_n(xi(x) in G)`: closed form for a single objective once a feasible
/// point is on the front, otherwise the mean of `n` non-domination indicators.
pub fn prob_improvement<R: Rng + ?Sized>(bundle: &PosteriorBundle, front: &Front, n: usize, rng: &mut R) -> f64 {
    closed_form(bundle, front).unwrap_or_else(|| mc_estimate(bundle, front, n, DensityTag::Plain, rng))
}

/// Monte Carlo estimate of `E[K! 1{xi(x) in G}]`.
pub fn factorial_density_weight<R: Rng + ?Sized>(bundle: &PosteriorBundle, front: &Front, n: usize, rng: &mut R) -> f64 {
    if let Some(c) = closed_form(bundle, front) {
        return factorial(bundle.cons.len()) * c;
    }
    mc_estimate(bundle, front, n, DensityTag::Factorial, rng)
}

/// Source of posterior bundles at arbitrary points.
pub type PosteriorFn<'a> = dyn FnMut(&[f64]) -> PosteriorBundle + 'a;

#[derive(Debug, Clone)]
pub struct ParticleSetX {
    lower: Vec<f64>,
    upper: Vec<f64>,
    p: usize,
    q: usize,
    m: usize,
    n_draws: usize,
    tag: DensityTag,
    x: Vec<f64>,
    w: Vec<f64>,
    /// Density estimate of the current target at each particle.
    dens: Vec<f64>,
    mean: Vec<f64>,
    sd: Vec<f64>,
    z: Vec<f64>,
    img: Vec<f64>,
    val: Vec<f64>,
    /// Draw not dominated by the current front.
    alive: Vec<bool>,
    /// Posterior cache is for the current models.
    has_post: bool,
    front: Front,
    log_lambda: f64,
    sweeps_done: usize,
    rng: StreamRng,
}

impl ParticleSetX {
    pub fn init(lower: &[f64], upper: &[f64], p: usize, q: usize, cfg: &SmcXConfig, rng: StreamRng) -> Self {
        let d = lower.len();
        let mut s = ParticleSetX {
            lower: lower.to_vec(),
            upper: upper.to_vec(),
            p,
            q,
            m: cfg.m,
            n_draws: cfg.n_draws,
            tag: cfg.density,
            x: vec![0.0; cfg.m * d],
            w: vec![1.0 / cfg.m as f64; cfg.m],
            dens: vec![1.0; cfg.m],
            mean: vec![0.0; cfg.m * (p + q)],
            sd: vec![0.0; cfg.m * (p + q)],
            z: vec![0.0; cfg.m * cfg.n_draws * (p + q)],
            img: vec![0.0; cfg.m * cfg.n_draws * (p + q)],
            val: vec![1.0; cfg.m * cfg.n_draws],
            alive: vec![true; cfg.m * cfg.n_draws],
            has_post: false,
            front: Front::empty(p, q),
            log_lambda: (2.38 / (d as f64).sqrt()).ln(),
            sweeps_done: 0,
            rng,
        };
        s.reset_uniform();
        s
    }

    fn reset_uniform(&mut self) {
        let d = self.dim();
        for r in 0..self.m {
            for i in 0..d {
                self.x[r * d + i] = self.lower[i] + self.rng.random::<f64>() * (self.upper[i] - self.lower[i]);
            }
        }
        self.w.iter_mut().for_each(|v| *v = 1.0 / self.m as f64);
        self.dens.iter_mut().for_each(|v| *v = 1.0);
        self.front = Front::empty(self.p, self.q);
        self.has_post = false;
        sample_z(&mut self.rng, &mut self.z);
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn densities(&self) -> &[f64] {
        &self.dens
    }

    pub fn front(&self) -> &Front {
        &self.front
    }

    pub fn particle(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.x[i * d..(i + 1) * d]
    }

    pub fn particles(&self) -> impl Iterator<Item = &[f64]> {
        self.x.chunks_exact(self.dim())
    }

    pub fn ess(&self) -> f64 {
        ess(&self.w)
    }

    fn k(&self) -> usize {
        self.p + self.q
    }

    /// Cached posterior at particle `r` under the models of the last step.
    pub fn posterior(&self, r: usize) -> PosteriorBundle {
        self.bundle_at(r)
    }

    fn bundle_at(&self, r: usize) -> PosteriorBundle {
        let k = self.k();
        let mk = |s: usize, e: usize| {
            (s..e)
                .map(|i| crate::gp::Posterior { mean: self.mean[r * k + i], var: self.sd[r * k + i].powi(2) })
                .collect()
        };
        PosteriorBundle { obj: mk(0, self.p), cons: mk(self.p, k) }
    }

    fn store_posterior(&mut self, r: usize, b: &PosteriorBundle) {
        let k = self.k();
        for (i, post) in b.iter().enumerate() {
            self.mean[r * k + i] = post.mean;
            self.sd[r * k + i] = post.sd();
        }
        let nk = self.n_draws * k;
        let n = self.n_draws;
        draw_images(
            &self.mean[r * k..(r + 1) * k],
            &self.sd[r * k..(r + 1) * k],
            &self.z[r * nk..(r + 1) * nk],
            self.p,
            self.tag,
            &mut self.img[r * nk..(r + 1) * nk],
            &mut self.val[r * n..(r + 1) * n],
        );
    }

    /// Marks draws against the full `front` and returns the density estimate.
    fn mark_alive(&mut self, r: usize, front: &Front) -> f64 {
        if let Some(c) = self.closed_form_scaled(r, front) {
            return c;
        }
        let k = self.k();
        let n = self.n_draws;
        let mut s = 0.0;
        for j in 0..n {
            let a = !front.dominates_mapped(&self.img[(r * n + j) * k..(r * n + j + 1) * k]);
            self.alive[r * n + j] = a;
            if a {
                s += self.val[r * n + j];
            }
        }
        s / n as f64
    }

    fn closed_form_scaled(&self, r: usize, front: &Front) -> Option<f64> {
        let c = closed_form(&self.bundle_at(r), front)?;
        Some(match self.tag {
            DensityTag::Plain => c,
            DensityTag::Factorial => factorial(self.q) * c,
        })
    }

    /// Density for a front that only adds points to the current one.
    fn density_extending(&self, r: usize, added: &[&Vec<f64>], front: &Front) -> f64 {
        if let Some(c) = self.closed_form_scaled(r, front) {
            return c;
        }
        let k = self.k();
        let n = self.n_draws;
        let mut s = 0.0;
        for j in 0..n {
            if !self.alive[r * n + j] {
                continue;
            }
            let y = &self.img[(r * n + j) * k..(r * n + j + 1) * k];
            if !added.iter().any(|a| crate::domination::pareto_dominates(a, y)) {
                s += self.val[r * n + j];
            }
        }
        s / n as f64
    }

    fn densities_for(&self, front: &Front) -> Vec<f64> {
        let added: Vec<&Vec<f64>> = front.points.iter().filter(|a| !self.front.contains(a)).collect();
        (0..self.m)
            .map(|r| if self.w[r] > 0.0 { self.density_extending(r, &added, front) } else { 0.0 })
            .collect()
    }

    fn refresh_posteriors(&mut self, post: &mut PosteriorFn) {
        for r in 0..self.m {
            let b = post(self.particle(r));
            self.store_posterior(r, &b);
        }
        self.has_post = true;
    }

    /// Reweights to the current front under freshly refit models.
    fn reweight_models(&mut self, post: &mut PosteriorFn) -> Result<()> {
        self.refresh_posteriors(post);
        let front = self.front.clone();
        let new: Vec<f64> = (0..self.m).map(|r| self.mark_alive(r, &front)).collect();
        let old = std::mem::replace(&mut self.dens, new);
        reweight(&mut self.w, &old, &self.dens)
    }

    fn set_front(&mut self, front: &Front) -> Result<()> {
        let new = self.densities_for(front);
        let mut w = self.w.clone();
        reweight(&mut w, &self.dens, &new)?;
        self.w = w;
        self.front = front.clone();
        for r in 0..self.m {
            self.dens[r] = self.mark_alive(r, front);
        }
        Ok(())
    }

    fn resample(&mut self) {
        let idx = residual_resample(&self.w, self.m, &mut self.rng);
        let d = self.dim();
        let k = self.k();
        let nk = self.n_draws * k;
        let n = self.n_draws;
        let pick = |v: &[f64], s: usize| idx.iter().flat_map(|&i| v[i * s..(i + 1) * s].iter().copied()).collect::<Vec<f64>>();
        self.x = pick(&self.x, d);
        self.dens = pick(&self.dens, 1);
        self.mean = pick(&self.mean, k);
        self.sd = pick(&self.sd, k);
        self.z = pick(&self.z, nk);
        self.img = pick(&self.img, nk);
        self.val = pick(&self.val, n);
        self.alive = idx.iter().flat_map(|&i| self.alive[i * n..(i + 1) * n].iter().copied()).collect();
        self.w = vec![1.0 / self.m as f64; self.m];
    }

    /// Pseudo-marginal random-walk Metropolis sweeps on the current target
    /// with per-coordinate scales proportional to the particle spread.
    /// Returns the mean acceptance rate.
    pub fn move_mh(&mut self, post: &mut PosteriorFn, sweeps: usize, target_accept: f64) -> f64 {
        if !self.has_post {
            self.refresh_posteriors(post);
            let front = self.front.clone();
            for r in 0..self.m {
                self.dens[r] = self.mark_alive(r, &front);
            }
        }
        let d = self.dim();
        let k = self.k();
        let n = self.n_draws;
        let nk = n * k;
        let mut spread = vec![0.0; d];
        for i in 0..d {
            let mean: f64 = (0..self.m).map(|r| self.w[r] * self.x[r * d + i]).sum();
            let var: f64 = (0..self.m).map(|r| self.w[r] * (self.x[r * d + i] - mean).powi(2)).sum();
            let span = self.upper[i] - self.lower[i];
            spread[i] = var.sqrt().max(1e-3 * span);
        }
        let front = self.front.clone();
        let mut prop = vec![0.0; d];
        let mut z_new = vec![0.0; nk];
        let mut img_new = vec![0.0; nk];
        let mut val_new = vec![0.0; n];
        let mut alive_new = vec![false; n];
        let mut total_acc = 0usize;
        for _ in 0..sweeps {
            let lambda = self.log_lambda.exp();
            let mut acc = 0usize;
            for r in 0..self.m {
                for i in 0..d {
                    let e: f64 = StandardNormal.sample(&mut self.rng);
                    prop[i] = self.x[r * d + i] + lambda * spread[i] * e;
                }
                let inside = (0..d).all(|i| prop[i] >= self.lower[i] && prop[i] <= self.upper[i]);
                if !inside {
                    continue;
                }
                let b = post(&prop);
                let mean: Vec<f64> = b.iter().map(|v| v.mean).collect();
                let sd: Vec<f64> = b.iter().map(|v| v.sd()).collect();
                sample_z(&mut self.rng, &mut z_new);
                draw_images(&mean, &sd, &z_new, self.p, self.tag, &mut img_new, &mut val_new);
                for j in 0..n {
                    alive_new[j] = !front.dominates_mapped(&img_new[j * k..(j + 1) * k]);
                }
                let dens_new = match closed_form(&b, &front) {
                    Some(c) if self.tag == DensityTag::Plain => c,
                    Some(c) => factorial(self.q) * c,
                    None => (0..n).filter(|&j| alive_new[j]).map(|j| val_new[j]).sum::<f64>() / n as f64,
                };
                let cur = self.dens[r];
                let ok = if cur > 0.0 {
                    dens_new >= cur || self.rng.random::<f64>() * cur < dens_new
                } else {
                    true
                };
                if ok {
                    acc += 1;
                    self.x[r * d..(r + 1) * d].copy_from_slice(&prop);
                    self.mean[r * k..(r + 1) * k].copy_from_slice(&mean);
                    self.sd[r * k..(r + 1) * k].copy_from_slice(&sd);
                    self.z[r * nk..(r + 1) * nk].copy_from_slice(&z_new);
                    self.img[r * nk..(r + 1) * nk].copy_from_slice(&img_new);
                    self.val[r * n..(r + 1) * n].copy_from_slice(&val_new);
                    self.alive[r * n..(r + 1) * n].copy_from_slice(&alive_new);
                    self.dens[r] = dens_new;
                }
            }
            let rate = acc as f64 / self.m as f64;
            total_acc += acc;
            self.sweeps_done += 1;
            let gain = 1.0 / (self.sweeps_done as f64).powf(0.6);
            self.log_lambda = (self.log_lambda + gain * (rate - target_accept)).clamp(-12.0, 3.0);
        }
        total_acc as f64 / (sweeps * self.m).max(1) as f64
    }

    /// One reweight-resample-move transition to the target `P(xi(x) in G(target))`
    /// under the models given by `post`. `space` supplies anchors for
    /// intermediate fronts.
    pub fn step(&mut self, post: &mut PosteriorFn, target: &Front, space: &SpaceBox, cfg: &SmcXConfig) -> StepStats {
        let mut stats = StepStats::default();
        let threshold = cfg.nu * self.m as f64;
        let ok = self.reweight_models(post).is_ok() && self.ess() >= threshold;
        if !ok {
            self.restart(post);
            stats.restarted = true;
        }
        stats.ess_after_reweight = self.ess();
        let mut moved = false;
        while !self.front.same_set(target) {
            if stats.levels >= cfg.max_levels {
                if stats.restarted {
                    self.force_front(target);
                } else {
                    self.restart(post);
                    stats.restarted = true;
                    stats.levels = 0;
                    continue;
                }
                break;
            }
            let current = self.front.clone();
            let mut rng = self.rng.clone();
            let next = {
                let mut score = |f: &Front| {
                    let new = self.densities_for(f);
                    let mut w = self.w.clone();
                    match reweight(&mut w, &self.dens, &new) {
                        Ok(()) => ess(&w),
                        Err(_) => 0.0,
                    }
                };
                next_front(&current, target, space, threshold, &mut score, &mut rng, cfg.max_bisect)
            };
            self.rng = rng;
            if self.set_front(&next).is_err() {
                self.force_front(&next);
            }
            stats.levels += 1;
            self.resample();
            stats.acceptance = self.move_mh(post, cfg.mh_sweeps, cfg.target_accept);
            moved = true;
        }
        if !moved {
            self.resample();
            stats.acceptance = self.move_mh(post, cfg.mh_sweeps, cfg.target_accept);
        }
        stats
    }

    /// Uniform particles and empty front under the current models.
    fn restart(&mut self, post: &mut PosteriorFn) {
        self.reset_uniform();
        self.refresh_posteriors(post);
        let empty = self.front.clone();
        let dens: Vec<f64> = (0..self.m).map(|r| self.mark_alive(r, &empty)).collect();
        let _ = reweight(&mut self.w, &vec![1.0; self.m], &dens);
        self.dens = dens;
    }

    /// Adopts `front` even when every weight vanishes; particles then move
    /// freely until they reach positive density.
    fn force_front(&mut self, front: &Front) {
        if self.set_front(front).is_err() {
            self.front = front.clone();
            for r in 0..self.m {
                self.dens[r] = self.mark_alive(r, front);
            }
            self.w = vec![1.0 / self.m as f64; self.m];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn ess_identities() {
        assert_eq!(ess(&[0.25; 4]), 4.0);
        assert_eq!(ess(&[1.0, 0.0]), 1.0);
    }

    #[test]
    fn reweight_arithmetic() {
        let mut w = vec![0.5, 0.5];
        reweight(&mut w, &[1.0, 1.0], &[1.0, 3.0]).unwrap();
        assert!((w[0] - 0.25).abs() < 1e-15 && (w[1] - 0.75).abs() < 1e-15);
        assert!(reweight(&mut w, &[1.0, 1.0], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn residual_exact_cases() {
        let mut rng = StreamRng::seed_from_u64(1);
        assert_eq!(residual_resample(&[0.5, 0.5], 2, &mut rng), vec![0, 1]);
        assert_eq!(residual_resample(&[1.0, 0.0], 3, &mut rng), vec![0, 0, 0]);
    }
}
