//! The optimization loop: initial design, model refits, particle updates,
//! criterion maximization over candidates, and the run record.

pub mod bench;
pub mod design;

use crate::bounds::BoxBounds;
use crate::criterion::{expected_improvement, CriterionState};
use crate::domination::Front;
use crate::error::{BmooError, Result};
use crate::gp::{GpConfig, GpHyperparameters, GpModel, PosteriorBundle};
use crate::hypervolume::{hv_fraction, HvReference};
use crate::problems::{self, is_feasible, Problem, ProblemMeta, Suite};
use crate::rng::stream;
use crate::smc_x::{DensityTag, ParticleSetX, SmcXConfig};
use crate::smc_y::SmcYConfig;
use rand::RngExt;
use serde::{Deserialize, Serialize};
use std::time::Instant;

pub const SCHEMA_VERSION: u32 = 1;
pub const HV_LEVELS: [f64; 3] = [0.90, 0.95, 0.99];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: String,
    pub budget: usize,
    /// Defaults to the problem's configured size, else `3d`.
    pub n_init: Option<usize>,
    pub m_x: usize,
    pub m_y: usize,
    pub nu: f64,
    pub lambda_obj: f64,
    pub lambda_cons: f64,
    pub seed: u64,
    pub feasibility_tol: f64,
    pub factorial_density: bool,
    pub exact_single_objective_path: bool,
    pub lhs_candidates: usize,
    pub gp: GpConfig,
    /// Between full multi-start refits, hyperparameters are only refined
    /// locally from the previous estimate.
    pub full_refit_every: usize,
    pub record_particles: bool,
    pub record_timing: bool,
}

impl RunConfig {
    pub fn new(problem: &str, budget: usize, seed: u64) -> Self {
        RunConfig {
            problem: problem.to_string(),
            budget,
            n_init: None,
            m_x: 1000,
            m_y: 1000,
            nu: 0.2,
            lambda_obj: 5.0,
            lambda_cons: 5.0,
            seed,
            feasibility_tol: 1e-5,
            factorial_density: false,
            exact_single_objective_path: true,
            lhs_candidates: 1000,
            gp: GpConfig::default(),
            full_refit_every: 5,
            record_particles: false,
            record_timing: true,
        }
    }

    pub fn initial_size(&self, meta: &ProblemMeta) -> usize {
        self.n_init.or(meta.n_init).unwrap_or(3 * meta.d)
    }

    pub fn validate(&self, meta: &ProblemMeta) -> Result<()> {
        let n0 = self.initial_size(meta);
        if n0 < 2 || self.budget <= n0 {
            return Err(BmooError::Config(format!("need budget > n_init >= 2, got budget {} and n_init {n0}", self.budget)));
        }
        if self.m_x < 10 || self.m_y < 10 {
            return Err(BmooError::Config("particle counts must be at least 10".into()));
        }
        if !(self.nu > 0.0 && self.nu < 1.0) {
            return Err(BmooError::Config("nu must lie in (0, 1)".into()));
        }
        Ok(())
    }

    fn smc_x(&self) -> SmcXConfig {
        SmcXConfig {
            m: self.m_x,
            nu: self.nu,
            density: if self.factorial_density { DensityTag::Factorial } else { DensityTag::Plain },
            ..SmcXConfig::default()
        }
    }

    fn smc_y(&self) -> SmcYConfig {
        SmcYConfig { m: self.m_y, nu: self.nu, ..SmcYConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationEntry {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub c: Vec<f64>,
    pub feasible: bool,
    /// Criterion value at the selected point; absent for the initial design.
    pub ei: Option<f64>,
    pub bounds: Option<BoxBounds>,
    pub x_restarted: bool,
    pub x_levels: usize,
    pub y_levels: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleSnapshot {
    pub iteration: usize,
    pub x: Vec<Vec<f64>>,
    /// Integration particles, in the subspace used by the criterion.
    pub y: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Evaluations (1-based) up to the first feasible one.
    pub first_feasible: Option<usize>,
    pub first_target: Option<usize>,
    pub best_feasible: Option<f64>,
    pub hv_fractions: Option<Vec<f64>>,
    /// Evaluations to reach each of `HV_LEVELS`.
    pub hv_reached: Option<Vec<Option<usize>>>,
}

impl Metrics {
    pub fn compute(entries: &[IterationEntry], meta: &ProblemMeta) -> Result<Metrics> {
        let mut m = Metrics { first_feasible: entries.iter().position(|e| e.feasible).map(|i| i + 1), ..Default::default() };
        if meta.p == 1 {
            let mut best: Option<f64> = None;
            for (i, e) in entries.iter().enumerate() {
                if e.feasible {
                    best = Some(best.map_or(e.f[0], |b| b.min(e.f[0])));
                    if m.first_target.is_none() && meta.target.is_some_and(|t| e.f[0] <= t) {
                        m.first_target = Some(i + 1);
                    }
                }
            }
            m.best_feasible = best;
        } else if let (Some(r), Some(v)) = (&meta.ref_point, meta.ref_volume) {
            let reference = HvReference { ref_point: r.clone(), ref_volume: v, lower: meta.hv_lower.clone() };
            let objs: Vec<Vec<f64>> = entries.iter().map(|e| e.f.clone()).collect();
            let feas: Vec<bool> = entries.iter().map(|e| e.feasible).collect();
            let fr = hv_fraction(&objs, &feas, &reference)?;
            m.hv_reached = Some(HV_LEVELS.iter().map(|&l| fr.iter().position(|&f| f >= l).map(|i| i + 1)).collect());
            m.hv_fractions = Some(fr);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub config: RunConfig,
    pub entries: Vec<IterationEntry>,
    pub metrics: Metrics,
    /// Reason the run stopped before the budget.
    pub aborted: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub particles: Vec<ParticleSnapshot>,
}

impl RunRecord {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<RunRecord> {
        let r: RunRecord = serde_json::from_str(s)?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(BmooError::Config(format!("unsupported schema version {}", r.schema_version)));
        }
        Ok(r)
    }
}

/// Whether `x` is within `1e-9` of a design point, in domain-normalized units.
pub fn is_duplicate(x: &[f64], design: &[Vec<f64>], lower: &[f64], upper: &[f64]) -> bool {
    design.iter().any(|z| {
        let d2: f64 = (0..x.len()).map(|i| ((x[i] - z[i]) / (upper[i] - lower[i])).powi(2)).sum();
        d2.sqrt() < 1e-9
    })
}

/// Index maximizing `scores`, ties to the smallest index, skipping
/// duplicates of design points. Falls back to the largest `spread` when no
/// candidate has a positive score.
pub fn select_next(scores: &[f64], spread: &[f64], duplicate: &[bool]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in 0..scores.len() {
        if duplicate[i] || !scores[i].is_finite() {
            continue;
        }
        if best.is_none_or(|b| scores[i] > scores[b]) {
            best = Some(i);
        }
    }
    if best.is_some_and(|b| scores[b] > 0.0) {
        return best;
    }
    let mut fb: Option<usize> = None;
    for i in 0..spread.len() {
        if !duplicate[i] && fb.is_none_or(|b| spread[i] > spread[b]) {
            fb = Some(i);
        }
    }
    fb.or(best)
}

struct Models {
    obj: Vec<GpModel>,
    cons: Vec<GpModel>,
}

fn fit_models(
    xs: &[Vec<f64>],
    ys: &[Vec<f64>],
    problem: &Problem,
    cfg: &RunConfig,
    warm: &mut [Option<GpHyperparameters>],
) -> Result<Models> {
    let p = problem.p();
    let mut all = Vec::with_capacity(ys[0].len());
    for (j, w) in warm.iter_mut().enumerate() {
        let col: Vec<f64> = ys.iter().map(|y| y[j]).collect();
        let mut gcfg = GpConfig { seed: cfg.seed ^ ((j as u64 + 1) << 32), ..cfg.gp.clone() };
        if w.is_some() && cfg.full_refit_every > 1 && !xs.len().is_multiple_of(cfg.full_refit_every) {
            gcfg.starts = 1;
        }
        let m = GpModel::fit_map(xs, &col, problem.lower(), problem.upper(), &gcfg, w.as_ref())?;
        if !m.is_constant() {
            *w = Some(m.hyperparameters());
        }
        all.push(m);
    }
    let cons = all.split_off(p);
    Ok(Models { obj: all, cons })
}

/// Runs the optimization for `cfg.budget` evaluations.
pub fn run_bmoo(cfg: &RunConfig) -> Result<RunRecord> {
    let problem = problems::get(&cfg.problem)?;
    let meta = problem.meta.clone();
    cfg.validate(&meta)?;
    let (p, q) = (problem.p(), problem.q());
    let lower = problem.lower().to_vec();
    let upper = problem.upper().to_vec();
    let mut record = RunRecord {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        entries: Vec::with_capacity(cfg.budget),
        metrics: Metrics::default(),
        aborted: None,
        particles: Vec::new(),
    };

    let mut xs: Vec<Vec<f64>> = Vec::new();
    let mut ys: Vec<Vec<f64>> = Vec::new();
    let n0 = cfg.initial_size(&meta);
    let mut design_rng = stream(cfg.seed, "design", 0);
    for x in design::initial_design(n0, &lower, &upper, cfg.lhs_candidates, &mut design_rng) {
        let t = Instant::now();
        match problem.evaluate(&x) {
            Ok(ev) => {
                record.entries.push(entry(&x, &ev.f, &ev.c, cfg, None, None, t));
                ys.push(ev.joined());
                xs.push(x);
            }
            Err(e) => return Ok(abort(record, &meta, e)),
        }
    }

    let xcfg = cfg.smc_x();
    let ycfg = cfg.smc_y();
    let mut warm: Vec<Option<GpHyperparameters>> = vec![None; p + q];
    let mut xset = ParticleSetX::init(&lower, &upper, p, q, &xcfg, stream(cfg.seed, "smc-x", 0));
    let mut bounds = BoxBounds::update(&ys, &[], p, cfg.lambda_obj, cfg.lambda_cons)?;
    let mut buf = Vec::new();
    let mut fallback_rng = stream(cfg.seed, "fallback", 0);

    while xs.len() < cfg.budget {
        let it = xs.len();
        let t = Instant::now();
        let models = match fit_models(&xs, &ys, &problem, cfg, &mut warm) {
            Ok(m) => m,
            Err(e) => return Ok(abort(record, &meta, e)),
        };
        let mut post = |x: &[f64]| PosteriorBundle::from_models(&models.obj, &models.cons, x, &mut buf);
        let target = Front::from_raw(p, q, ys.iter().map(|y| y.as_slice()));
        let xstats = xset.step(&mut post, &target, &bounds.full(), &xcfg);

        let (cands, bundles) = distinct_candidates(&xset);
        bounds = BoxBounds::update(&ys, &bundles, p, cfg.lambda_obj, cfg.lambda_cons)?;
        let state = match CriterionState::prepare(
            &ys,
            p,
            bounds.clone(),
            &ycfg,
            cfg.exact_single_objective_path,
            stream(cfg.seed, "smc-y", it as u64),
        ) {
            Ok(s) => s,
            Err(e) => return Ok(abort(record, &meta, e)),
        };
        let mut scores = Vec::with_capacity(cands.len());
        for b in &bundles {
            scores.push(expected_improvement(b, &state)?);
        }
        let spread: Vec<f64> = bundles.iter().map(|b| b.iter().map(|v| v.var).sum()).collect();
        let dup: Vec<bool> = cands.iter().map(|x| is_duplicate(x, &xs, &lower, &upper)).collect();
        let (x, ei) = match select_next(&scores, &spread, &dup) {
            Some(i) => (cands[i].clone(), scores[i]),
            // every particle sits on a design point
            None => {
                let x: Vec<f64> = (0..lower.len()).map(|i| lower[i] + fallback_rng.random::<f64>() * (upper[i] - lower[i])).collect();
                let b = PosteriorBundle::from_models(&models.obj, &models.cons, &x, &mut buf);
                let ei = expected_improvement(&b, &state)?;
                (x, ei)
            }
        };
        if cfg.record_particles {
            let y = state
                .particles
                .as_ref()
                .map(|s| s.points.chunks_exact(s.space.dim()).map(|v| v.to_vec()).collect())
                .unwrap_or_default();
            record.particles.push(ParticleSnapshot { iteration: it, x: xset.particles().map(|v| v.to_vec()).collect(), y });
        }
        match problem.evaluate(&x) {
            Ok(ev) => {
                let mut e = entry(&x, &ev.f, &ev.c, cfg, Some(ei), Some(bounds.clone()), t);
                e.x_restarted = xstats.restarted;
                e.x_levels = xstats.levels;
                e.y_levels = state.particles.as_ref().map_or(0, |s| s.stats.levels);
                record.entries.push(e);
                ys.push(ev.joined());
                xs.push(x);
            }
            Err(e) => return Ok(abort(record, &meta, e)),
        }
    }
    record.metrics = Metrics::compute(&record.entries, &meta)?;
    Ok(record)
}

/// Distinct particle positions with their cached posteriors.
fn distinct_candidates(set: &ParticleSetX) -> (Vec<Vec<f64>>, Vec<PosteriorBundle>) {
    let mut seen = std::collections::HashSet::new();
    let mut xs = Vec::new();
    let mut bs = Vec::new();
    for i in 0..set.len() {
        let x = set.particle(i);
        let key: Vec<u64> = x.iter().map(|v| v.to_bits()).collect();
        if seen.insert(key) {
            xs.push(x.to_vec());
            bs.push(set.posterior(i));
        }
    }
    (xs, bs)
}

fn entry(
    x: &[f64],
    f: &[f64],
    c: &[f64],
    cfg: &RunConfig,
    ei: Option<f64>,
    bounds: Option<BoxBounds>,
    t: Instant,
) -> IterationEntry {
    IterationEntry {
        x: x.to_vec(),
        f: f.to_vec(),
        c: c.to_vec(),
        feasible: is_feasible(c, cfg.feasibility_tol),
        ei,
        bounds,
        x_restarted: false,
        x_levels: 0,
        y_levels: 0,
        seconds: if cfg.record_timing { t.elapsed().as_secs_f64() } else { 0.0 },
    }
}

fn abort(mut record: RunRecord, meta: &ProblemMeta, e: BmooError) -> RunRecord {
    record.aborted = Some(e.to_string());
    record.metrics = Metrics::compute(&record.entries, meta).unwrap_or_default();
    record
}

/// Problems of a suite, in table order.
pub fn suite_problems(suite: Suite) -> Vec<Problem> {
    problems::list_problems(suite)
}
