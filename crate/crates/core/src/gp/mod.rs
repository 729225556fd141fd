//! Kriging models: Matérn 5/2 anisotropic covariance, constant unknown mean,
//! small relative nugget, MAP hyperparameters.
//!
//! Inputs are scaled to `[0, 1]^d` and outputs standardized before fitting;
//! predictions are returned in original units.

mod kernel;
mod optim;

pub use kernel::{matern52, scaled_distance};
pub use optim::minimize;

use crate::error::{BmooError, Result};
use crate::rng;
use nalgebra::{DMatrix, DVector};
use rand::RngExt;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpConfig {
    /// Starting points for MAP estimation. With a warm start, local search runs
    /// from the warm point and the best of the others by objective value.
    pub starts: usize,
    pub max_iter: usize,
    /// Nugget relative to the process variance.
    pub nugget_rel: f64,
    /// Largest relative nugget tried when factorization fails.
    pub nugget_max: f64,
    /// Range bounds as multiples of the domain width.
    pub theta_min: f64,
    pub theta_max: f64,
    /// Bounds on the process variance relative to the empirical variance.
    pub sigma2_min: f64,
    pub sigma2_max: f64,
    /// Prior standard deviations in log10 space.
    pub theta_prior_sd: f64,
    pub sigma2_prior_sd: f64,
    pub seed: u64,
}

impl Default for GpConfig {
    fn default() -> Self {
        GpConfig {
            starts: 5,
            max_iter: 100,
            nugget_rel: 1e-10,
            nugget_max: 1e-2,
            theta_min: 1e-3,
            theta_max: 1e3,
            sigma2_min: 1e-6,
            sigma2_max: 1e6,
            theta_prior_sd: 1.0,
            sigma2_prior_sd: 2.0,
            seed: 0,
        }
    }
}

/// Hyperparameters in original units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpHyperparameters {
    pub sigma2: f64,
    pub theta: Vec<f64>,
    pub nugget: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Posterior {
    pub mean: f64,
    pub var: f64,
}

impl Posterior {
    pub fn sd(&self) -> f64 {
        self.var.sqrt()
    }
}

#[derive(Debug, Clone)]
pub struct GpModel {
    d: usize,
    n: usize,
    lower: Vec<f64>,
    width: Vec<f64>,
    y_mean: f64,
    y_scale: f64,
    /// Normalized design, row-major `n x d`.
    xs: Vec<f64>,
    train_y: Vec<f64>,
    theta: Vec<f64>,
    sigma2: f64,
    eta: f64,
    mu: f64,
    /// Lower Cholesky factor, row-major.
    chol: Vec<f64>,
    alpha: Vec<f64>,
    v1: Vec<f64>,
    s1: f64,
    constant: bool,
    log_posterior: f64,
}

/// Per-dataset quantities reused across likelihood evaluations.
struct FitData {
    n: usize,
    d: usize,
    y: Vec<f64>,
    /// Squared coordinate differences for pairs `j < k`, `d` per pair.
    diff2: Vec<f64>,
}

struct Factored {
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    mu: f64,
    alpha: DVector<f64>,
    quad: f64,
    logdet: f64,
    /// Kernel derivative factor per pair.
    dfac: Vec<f64>,
}

impl FitData {
    fn new(xs: &[f64], y: Vec<f64>, n: usize, d: usize) -> Self {
        let mut diff2 = Vec::with_capacity(n * (n - 1) / 2 * d);
        for j in 0..n {
            for k in j + 1..n {
                for i in 0..d {
                    diff2.push((xs[j * d + i] - xs[k * d + i]).powi(2));
                }
            }
        }
        FitData { n, d, y, diff2 }
    }

    fn factor(&self, theta: &[f64], eta: f64) -> Option<Factored> {
        let (n, d) = (self.n, self.d);
        let inv_t2: Vec<f64> = theta.iter().map(|t| 1.0 / (t * t)).collect();
        let mut c = DMatrix::<f64>::zeros(n, n);
        let mut dfac = Vec::with_capacity(n * (n - 1) / 2);
        let mut p = 0;
        for j in 0..n {
            c[(j, j)] = 1.0 + eta;
            for k in j + 1..n {
                let h2: f64 = (0..d).map(|i| self.diff2[p * d + i] * inv_t2[i]).sum();
                let (kv, g) = kernel::matern52_with_grad(h2.sqrt());
                c[(j, k)] = kv;
                c[(k, j)] = kv;
                dfac.push(g);
                p += 1;
            }
        }
        let chol = c.cholesky()?;
        let ones = DVector::from_element(n, 1.0);
        let y = DVector::from_column_slice(&self.y);
        let cinv1 = chol.solve(&ones);
        let s = cinv1.sum();
        let mu = cinv1.dot(&y) / s;
        let r = y.add_scalar(-mu);
        let alpha = chol.solve(&r);
        let quad = r.dot(&alpha);
        let l = chol.l_dirty();
        let logdet = 2.0 * (0..n).map(|i| l[(i, i)].ln()).sum::<f64>();
        if !logdet.is_finite() || !quad.is_finite() {
            return None;
        }
        Some(Factored { chol, mu, alpha, quad, logdet, dfac })
    }

    /// Negative log posterior and gradient in `(ln sigma2, ln theta_1..d)`.
    fn objective(&self, phi: &[f64], eta: f64, cfg: &GpConfig) -> (f64, Vec<f64>) {
        let (n, d) = (self.n, self.d);
        let sigma2 = phi[0].exp();
        let theta: Vec<f64> = phi[1..].iter().map(|v| v.exp()).collect();
        let Some(fa) = self.factor(&theta, eta) else {
            return (f64::INFINITY, vec![0.0; d + 1]);
        };
        let nf = n as f64;
        let mut val = 0.5 * (nf * phi[0] + fa.logdet + fa.quad / sigma2);
        let ps = cfg.sigma2_prior_sd;
        let pt = cfg.theta_prior_sd;
        val += 0.5 * (phi[0] / LN_10 / ps).powi(2);
        let mut grad = vec![0.0; d + 1];
        grad[0] = 0.5 * (nf - fa.quad / sigma2) + phi[0] / (LN_10 * LN_10 * ps * ps);
        for i in 0..d {
            val += 0.5 * (phi[1 + i] / LN_10 / pt).powi(2);
            grad[1 + i] = phi[1 + i] / (LN_10 * LN_10 * pt * pt);
        }
        let cinv = fa.chol.inverse();
        let inv_t2: Vec<f64> = theta.iter().map(|t| 1.0 / (t * t)).collect();
        let mut p = 0;
        for j in 0..n {
            for k in j + 1..n {
                let w = fa.dfac[p] * (cinv[(j, k)] - fa.alpha[j] * fa.alpha[k] / sigma2);
                for i in 0..d {
                    grad[1 + i] += w * self.diff2[p * d + i] * inv_t2[i];
                }
                p += 1;
            }
        }
        (val, grad)
    }
}

fn normalize(x: &[f64], lower: &[f64], width: &[f64], out: &mut [f64]) {
    for i in 0..x.len() {
        out[i] = (x[i] - lower[i]) / width[i];
    }
}

impl GpModel {
    /// MAP fit. `warm` seeds the first local search with previous hyperparameters.
    pub fn fit_map(
        train_x: &[Vec<f64>],
        train_y: &[f64],
        lower: &[f64],
        upper: &[f64],
        cfg: &GpConfig,
        warm: Option<&GpHyperparameters>,
    ) -> Result<GpModel> {
        let mut m = Self::prepare(train_x, train_y, lower, upper)?;
        if m.constant {
            return Ok(m);
        }
        let data = FitData::new(&m.xs, m.standardized_y(), m.n, m.d);
        let d = m.d;
        let mut lo = vec![cfg.sigma2_min.ln()];
        let mut hi = vec![cfg.sigma2_max.ln()];
        lo.extend(std::iter::repeat_n(cfg.theta_min.ln(), d));
        hi.extend(std::iter::repeat_n(cfg.theta_max.ln(), d));

        let mut starts: Vec<Vec<f64>> = Vec::new();
        if let Some(w) = warm {
            let mut s = vec![(w.sigma2 / (m.y_scale * m.y_scale)).ln()];
            s.extend(w.theta.iter().zip(&m.width).map(|(t, wd)| (t / wd).ln()));
            starts.push(s);
        }
        let mut base = vec![0.0];
        base.extend(std::iter::repeat_n(0.3f64.ln(), d));
        starts.push(base);
        let mut r = rng::stream(cfg.seed, "gp-starts", m.n as u64);
        while starts.len() < cfg.starts.max(1) {
            let mut s = vec![r.random_range(-1.0..1.0) * LN_10];
            for _ in 0..d {
                s.push(r.random_range(-1.5..0.5) * LN_10);
            }
            starts.push(s);
        }
        starts.truncate(cfg.starts.max(1));

        let mut eta = cfg.nugget_rel;
        loop {
            let mut chosen = starts.clone();
            if warm.is_some() && chosen.len() > 2 {
                // warm start plus the best of the other starts by objective value
                let best_other = chosen[1..]
                    .iter()
                    .map(|s| (data.objective(s, eta, cfg).0, s))
                    .filter(|(f, _)| f.is_finite())
                    .min_by(|a, b| a.0.total_cmp(&b.0))
                    .map(|(_, s)| s.clone());
                chosen.truncate(1);
                chosen.extend(best_other);
            }
            let mut best: Option<(Vec<f64>, f64)> = None;
            for s in &chosen {
                let out = optim::minimize(|phi| data.objective(phi, eta, cfg), s, &lo, &hi, cfg.max_iter);
                if out.f.is_finite() && best.as_ref().is_none_or(|b| out.f < b.1) {
                    best = Some((out.x, out.f));
                }
            }
            if let Some((phi, f)) = best {
                let theta: Vec<f64> = phi[1..].iter().map(|v| v.exp()).collect();
                if m.finish(&data, phi[0].exp(), theta, eta) {
                    m.log_posterior = -f;
                    return Ok(m);
                }
            }
            eta *= 10.0;
            if eta > cfg.nugget_max * (1.0 + 1e-9) {
                return Err(BmooError::Factorization);
            }
        }
    }

    /// Model with given hyperparameters (original units).
    pub fn with_hyperparameters(
        train_x: &[Vec<f64>],
        train_y: &[f64],
        lower: &[f64],
        upper: &[f64],
        hyper: &GpHyperparameters,
    ) -> Result<GpModel> {
        let mut m = Self::prepare(train_x, train_y, lower, upper)?;
        if m.constant {
            return Ok(m);
        }
        let data = FitData::new(&m.xs, m.standardized_y(), m.n, m.d);
        let s2 = hyper.sigma2 / (m.y_scale * m.y_scale);
        let theta: Vec<f64> = hyper.theta.iter().zip(&m.width).map(|(t, w)| t / w).collect();
        let eta = hyper.nugget / hyper.sigma2;
        if m.finish(&data, s2, theta, eta) {
            Ok(m)
        } else {
            Err(BmooError::Factorization)
        }
    }

    fn prepare(train_x: &[Vec<f64>], train_y: &[f64], lower: &[f64], upper: &[f64]) -> Result<GpModel> {
        let n = train_x.len();
        let d = lower.len();
        if n < 2 || train_y.len() != n {
            return Err(BmooError::Config("GP needs at least two observations".into()));
        }
        if let Some(x) = train_x.iter().find(|x| x.len() != d) {
            return Err(BmooError::Dimension { expected: d, got: x.len() });
        }
        if train_y.iter().any(|v| !v.is_finite()) {
            return Err(BmooError::Config("non-finite training output".into()));
        }
        let width: Vec<f64> = lower.iter().zip(upper).map(|(l, u)| u - l).collect();
        let mut xs = vec![0.0; n * d];
        for (j, x) in train_x.iter().enumerate() {
            normalize(x, lower, &width, &mut xs[j * d..(j + 1) * d]);
        }
        let nf = n as f64;
        let y_mean = train_y.iter().sum::<f64>() / nf;
        let var = train_y.iter().map(|v| (v - y_mean).powi(2)).sum::<f64>() / nf;
        let constant = var <= (1e-14 * y_mean.abs().max(1e-300)).powi(2) || var == 0.0;
        let y_scale = if constant { 1.0 } else { var.sqrt() };
        Ok(GpModel {
            d,
            n,
            lower: lower.to_vec(),
            width,
            y_mean,
            y_scale,
            xs,
            train_y: train_y.to_vec(),
            theta: vec![1.0; d],
            sigma2: 1e-12,
            eta: 0.0,
            mu: 0.0,
            chol: Vec::new(),
            alpha: Vec::new(),
            v1: Vec::new(),
            s1: 1.0,
            constant,
            log_posterior: 0.0,
        })
    }

    fn standardized_y(&self) -> Vec<f64> {
        self.train_y.iter().map(|v| (v - self.y_mean) / self.y_scale).collect()
    }

    fn finish(&mut self, data: &FitData, sigma2: f64, theta: Vec<f64>, eta: f64) -> bool {
        let Some(fa) = data.factor(&theta, eta) else { return false };
        let n = self.n;
        let l = fa.chol.l();
        let mut chol = vec![0.0; n * n];
        for j in 0..n {
            for k in 0..=j {
                chol[j * n + k] = l[(j, k)];
            }
        }
        let ones = vec![1.0; n];
        let v1 = forward_solve(&chol, n, &ones);
        self.s1 = v1.iter().map(|v| v * v).sum();
        self.v1 = v1;
        self.chol = chol;
        self.alpha = fa.alpha.as_slice().to_vec();
        self.mu = fa.mu;
        self.sigma2 = sigma2;
        self.theta = theta;
        self.eta = eta;
        true
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn n_train(&self) -> usize {
        self.n
    }

    pub fn is_constant(&self) -> bool {
        self.constant
    }

    pub fn log_posterior(&self) -> f64 {
        self.log_posterior
    }

    pub fn hyperparameters(&self) -> GpHyperparameters {
        let s2 = self.y_scale * self.y_scale;
        GpHyperparameters {
            sigma2: self.sigma2 * s2,
            theta: self.theta.iter().zip(&self.width).map(|(t, w)| t * w).collect(),
            nugget: self.eta * self.sigma2 * s2,
        }
    }

    /// Generalized least-squares estimate of the constant mean (original units).
    pub fn mean_coefficient(&self) -> f64 {
        if self.constant {
            self.y_mean
        } else {
            self.y_mean + self.y_scale * self.mu
        }
    }

    pub fn predict(&self, x: &[f64]) -> Posterior {
        let mut buf = vec![0.0; self.n + self.d];
        self.predict_with(x, &mut buf)
    }

    /// Prediction using caller-provided scratch space of length at least `n + d`.
    pub fn predict_with(&self, x: &[f64], buf: &mut [f64]) -> Posterior {
        if self.constant {
            return Posterior { mean: self.y_mean, var: 1e-12 * self.y_mean.abs().max(1.0).powi(2) };
        }
        let (n, d) = (self.n, self.d);
        let (r, u) = buf.split_at_mut(n);
        let u = &mut u[..d];
        normalize(x, &self.lower, &self.width, u);
        let mut mean = self.mu;
        for j in 0..n {
            let row = &self.xs[j * d..(j + 1) * d];
            let mut h2 = 0.0;
            for i in 0..d {
                let t = (u[i] - row[i]) / self.theta[i];
                h2 += t * t;
            }
            r[j] = matern52(h2.sqrt());
            mean += r[j] * self.alpha[j];
        }
        // r <- L^{-1} r in place
        for j in 0..n {
            let row = &self.chol[j * n..j * n + j];
            let mut s = r[j];
            for k in 0..j {
                s -= row[k] * r[k];
            }
            r[j] = s / self.chol[j * n + j];
        }
        let ww: f64 = r.iter().map(|v| v * v).sum();
        let vw: f64 = r.iter().zip(&self.v1).map(|(a, b)| a * b).sum();
        let var_s = self.sigma2 * (1.0 - ww + (1.0 - vw).powi(2) / self.s1);
        Posterior {
            mean: self.y_mean + self.y_scale * mean,
            var: var_s.max(0.0) * self.y_scale * self.y_scale,
        }
    }
}

fn forward_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut x = b.to_vec();
    for j in 0..n {
        let mut s = x[j];
        for k in 0..j {
            s -= l[j * n + k] * x[k];
        }
        x[j] = s / l[j * n + j];
    }
    x
}


/// Posteriors of all objectives and constraints at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorBundle {
    pub obj: Vec<Posterior>,
    pub cons: Vec<Posterior>,
}

impl PosteriorBundle {
    pub fn from_models(obj: &[GpModel], cons: &[GpModel], x: &[f64], buf: &mut Vec<f64>) -> Self {
        let need = obj.iter().chain(cons).map(|m| m.n + m.d).max().unwrap_or(0);
        if buf.len() < need {
            buf.resize(need, 0.0);
        }
        PosteriorBundle {
            obj: obj.iter().map(|m| m.predict_with(x, buf)).collect(),
            cons: cons.iter().map(|m| m.predict_with(x, buf)).collect(),
        }
    }

    /// Bundle with zero variances.
    pub fn deterministic(f: &[f64], c: &[f64]) -> Self {
        let mk = |v: &[f64]| v.iter().map(|&m| Posterior { mean: m, var: 0.0 }).collect();
        PosteriorBundle { obj: mk(f), cons: mk(c) }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Posterior> {
        self.obj.iter().chain(&self.cons)
    }
}
