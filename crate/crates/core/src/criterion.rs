//! Expected improvement of the dominated hyper-volume under extended
//! domination, and the closed-form pieces it is built from.

use crate::bounds::{BoxBounds, SpaceBox};
use crate::domination::Front;
use crate::error::{BmooError, Result};
use crate::gp::{Posterior, PosteriorBundle};
use crate::normal::{gamma, prob_below};
use crate::rng::StreamRng;
use crate::smc_y::{AdvanceStats, ParticleSetY, SmcYConfig};

/// `gamma(z, s)`, the expected positive part of `z + N(0, s)`.
pub fn gamma_ei(z: f64, s: f64) -> f64 {
    gamma(z, s.max(0.0))
}

pub fn ei_classic(post: &Posterior, m_n: f64) -> f64 {
    gamma_ei(m_n - post.mean, post.var)
}

pub fn prob_feasible(cons: &[Posterior]) -> f64 {
    cons.iter().map(|c| prob_below(0.0, c.mean, c.sd())).product()
}

pub fn ei_schonlau(bundle: &PosteriorBundle, m_n: f64) -> f64 {
    prob_feasible(&bundle.cons) * ei_classic(&bundle.obj[0], m_n)
}

/// `P(xi(x) extended-dominates y)` for a concatenated `(y_obj, y_cons)` point.
pub fn prob_extended_dominates(bundle: &PosteriorBundle, y: &[f64]) -> f64 {
    let p = bundle.obj.len();
    let (yo, yc) = y.split_at(p);
    if yc.iter().all(|&v| v <= 0.0) {
        let po: f64 = bundle.obj.iter().zip(yo).map(|(o, &t)| prob_below(t, o.mean, o.sd())).product();
        po * prob_feasible(&bundle.cons)
    } else {
        prob_cons_below(&bundle.cons, yc)
    }
}

/// `P(xi_c^+ <= y_c^+)`, the constraint factor for an infeasible `y_c`.
fn prob_cons_below(cons: &[Posterior], yc: &[f64]) -> f64 {
    cons.iter().zip(yc).map(|(c, &t)| prob_below(t.max(0.0), c.mean, c.sd())).product()
}

fn prob_obj_below(obj: &[Posterior], yo: &[f64]) -> f64 {
    obj.iter().zip(yo).map(|(o, &t)| prob_below(t, o.mean, o.sd())).product()
}

/// Distinct particle positions with their frequencies, scaled by `|G|`.
#[derive(Debug, Clone)]
pub struct IntegrationSet {
    pub space: SpaceBox,
    pub points: Vec<f64>,
    /// `|G| * multiplicity / m` per distinct point.
    pub weights: Vec<f64>,
    pub stats: AdvanceStats,
}

impl IntegrationSet {
    pub fn from_particles(set: &ParticleSetY, stats: AdvanceStats) -> Self {
        let k = set.space().dim();
        let mut idx: Vec<usize> = (0..set.len()).collect();
        let key = |i: usize| set.particle(i).iter().map(|v| v.to_bits()).collect::<Vec<u64>>();
        idx.sort_by_key(|&i| key(i));
        let unit = set.region_volume() / set.len() as f64;
        let mut points = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        let mut last: Option<&[f64]> = None;
        for i in idx {
            let y = set.particle(i);
            if last == Some(y) {
                *weights.last_mut().unwrap() += unit;
            } else {
                points.extend_from_slice(y);
                weights.push(unit);
                last = Some(y);
            }
        }
        debug_assert_eq!(points.len(), weights.len() * k);
        IntegrationSet { space: set.space().clone(), points, weights, stats }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn region_volume(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate<F: FnMut(&[f64]) -> f64>(&self, mut f: F) -> f64 {
        let k = self.space.dim();
        self.points.chunks_exact(k).zip(&self.weights).map(|(y, w)| w * f(y)).sum()
    }
}

/// Which subspace the integration particles live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    /// No feasible point yet: particles in `B_c`, front of violations.
    Infeasible,
    /// Feasible point found, `p = 1` with the exact path.
    ExactSingle,
    /// Feasible point found: particles in `B_o`, front of feasible objectives.
    Feasible,
}

#[derive(Debug, Clone)]
pub struct CriterionState {
    pub p: usize,
    pub q: usize,
    /// Front of all evaluations in the extended space.
    pub front: Front,
    pub bounds: BoxBounds,
    pub best_feasible_value: Option<f64>,
    pub feasible_found: bool,
    pub phase: Phase,
    pub particles: Option<IntegrationSet>,
}

impl CriterionState {
    /// Builds the state for concatenated `(f, c)` evaluations, sampling the
    /// integration particles when the phase needs them.
    pub fn prepare(
        evals: &[Vec<f64>],
        p: usize,
        bounds: BoxBounds,
        cfg: &SmcYConfig,
        exact_single: bool,
        rng: StreamRng,
    ) -> Result<Self> {
        let q = bounds.q();
        let front = Front::from_raw(p, q, evals.iter().map(|v| v.as_slice()));
        let feasible: Vec<&[f64]> = evals
            .iter()
            .filter(|v| v[p..].iter().all(|&c| c <= 0.0))
            .map(|v| &v[..p])
            .collect();
        let feasible_found = !feasible.is_empty();
        let best_feasible_value = if feasible_found && p == 1 {
            feasible.iter().map(|f| f[0]).reduce(f64::min)
        } else {
            None
        };
        let (phase, space, sub) = if !feasible_found {
            let sub = Front::from_raw(0, q, evals.iter().map(|v| &v[p..]));
            (Phase::Infeasible, bounds.constraint_space(), sub)
        } else if p == 1 && exact_single {
            (Phase::ExactSingle, bounds.objective_space(), Front::empty(p, 0))
        } else {
            let sub = Front::from_raw(p, 0, feasible.iter().copied());
            (Phase::Feasible, bounds.objective_space(), sub)
        };
        let particles = if phase == Phase::ExactSingle || (phase == Phase::Infeasible && q == 0) {
            None
        } else {
            let (set, stats) = ParticleSetY::build(space, &sub, cfg, rng)?;
            Some(IntegrationSet::from_particles(&set, stats))
        };
        Ok(CriterionState { p, q, front, bounds, best_feasible_value, feasible_found, phase, particles })
    }

    fn particles(&self) -> Result<&IntegrationSet> {
        self.particles
            .as_ref()
            .ok_or_else(|| BmooError::Config("criterion state has no integration particles".into()))
    }
}

/// Closed-form `int_{B_o} P(xi_o < y) dy` over the whole objective box.
pub fn objective_box_integral(obj: &[Posterior], b: &BoxBounds) -> f64 {
    obj.iter()
        .enumerate()
        .map(|(i, o)| {
            let s = o.var.max(0.0);
            (gamma_ei(b.upp_obj[i] - o.mean, s) - gamma_ei(b.low_obj[i] - o.mean, s)).max(0.0)
        })
        .product()
}

pub fn ei_feasible_part(bundle: &PosteriorBundle, state: &CriterionState) -> Result<f64> {
    let pf = prob_feasible(&bundle.cons);
    if pf == 0.0 {
        return Ok(0.0);
    }
    let scale = state.bounds.volume_cons_neg() * pf;
    let i_obj = match state.phase {
        Phase::Infeasible => objective_box_integral(&bundle.obj, &state.bounds),
        Phase::ExactSingle => {
            let m = state.best_feasible_value.ok_or_else(|| BmooError::Config("missing best feasible value".into()))?;
            ei_classic(&bundle.obj[0], m.min(state.bounds.upp_obj[0]))
        }
        Phase::Feasible => state.particles()?.integrate(|y| prob_obj_below(&bundle.obj, y)),
    };
    Ok(scale * i_obj)
}

pub fn ei_unfeasible_part(bundle: &PosteriorBundle, state: &CriterionState) -> Result<f64> {
    if state.feasible_found || state.q == 0 {
        return Ok(0.0);
    }
    let set = state.particles()?;
    let integral = set.integrate(|y| {
        if y.iter().all(|&v| v <= 0.0) {
            0.0
        } else {
            prob_cons_below(&bundle.cons, y)
        }
    });
    Ok(state.bounds.volume_obj() * integral)
}

pub fn expected_improvement(bundle: &PosteriorBundle, state: &CriterionState) -> Result<f64> {
    if bundle.obj.len() != state.p || bundle.cons.len() != state.q {
        return Err(BmooError::Dimension { expected: state.p + state.q, got: bundle.obj.len() + bundle.cons.len() });
    }
    Ok(ei_feasible_part(bundle, state)? + ei_unfeasible_part(bundle, state)?)
}

/// Direct estimate of the full integral over `G` from particles in `B`
/// uniform on the complement of the extended-space front.
pub fn ei_full_smc(bundle: &PosteriorBundle, set: &IntegrationSet) -> f64 {
    set.integrate(|y| prob_extended_dominates(bundle, y))
}
