//! Benchmark problems: mono-objective g-suite and engineering designs,
//! multi-objective test problems, smoothed variants, and a 2-D toy problem.

mod metadata;
mod mono;
mod multi;

use crate::error::{BmooError, Result};
pub use metadata::{metadata, ProblemMeta, Suite};

type EvalFn = fn(&[f64], &mut [f64], &mut [f64]);

/// A problem with its metadata and in-process evaluator.
#[derive(Clone)]
pub struct Problem {
    pub meta: ProblemMeta,
    eval: EvalFn,
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem").field("meta", &self.meta).finish()
    }
}

/// Objective and constraint values at one point; `c <= 0` means satisfied.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub f: Vec<f64>,
    pub c: Vec<f64>,
}

impl Evaluation {
    /// Concatenated `(f, c)` vector.
    pub fn joined(&self) -> Vec<f64> {
        let mut v = self.f.clone();
        v.extend_from_slice(&self.c);
        v
    }
}

const DOMAIN_TOL: f64 = 1e-12;

impl Problem {
    pub fn name(&self) -> &str {
        &self.meta.name
    }
    pub fn d(&self) -> usize {
        self.meta.d
    }
    pub fn p(&self) -> usize {
        self.meta.p
    }
    pub fn q(&self) -> usize {
        self.meta.q
    }
    pub fn lower(&self) -> &[f64] {
        &self.meta.lower
    }
    pub fn upper(&self) -> &[f64] {
        &self.meta.upper
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<Evaluation> {
        let d = self.d();
        if x.len() != d {
            return Err(BmooError::Dimension { expected: d, got: x.len() });
        }
        for (i, &v) in x.iter().enumerate() {
            let (lo, hi) = (self.meta.lower[i], self.meta.upper[i]);
            let tol = DOMAIN_TOL * (hi - lo).abs().max(1.0);
            if !(v >= lo - tol && v <= hi + tol) {
                return Err(BmooError::OutOfBounds { index: i, value: v });
            }
        }
        let mut f = vec![0.0; self.p()];
        let mut c = vec![0.0; self.q()];
        (self.eval)(x, &mut f, &mut c);
        if f.iter().chain(&c).any(|v| !v.is_finite()) {
            return Err(BmooError::NonFinite { problem: self.meta.name.clone() });
        }
        Ok(Evaluation { f, c })
    }
}

/// Signed logarithm: `ln(1 + x)` for `x >= 0`, `-ln(1 - x)` otherwise.
pub fn plog(x: f64) -> f64 {
    if x >= 0.0 {
        x.ln_1p()
    } else {
        -(-x).ln_1p()
    }
}

/// `max_j c_j <= tol`.
pub fn is_feasible(c: &[f64], tol: f64) -> bool {
    c.iter().all(|&v| v <= tol)
}

fn evaluator(name: &str) -> Option<EvalFn> {
    let f: EvalFn = match name {
        "g1" => mono::g1,
        "g3mod" => mono::g3mod,
        "g5mod" => mono::g5mod,
        "g6" => mono::g6,
        "g7" => mono::g7,
        "g8" => mono::g8,
        "g9" => mono::g9,
        "g10" => mono::g10,
        "g13mod" => mono::g13mod,
        "g16" => mono::g16,
        "g18" => mono::g18,
        "g19" => mono::g19,
        "g24" => mono::g24,
        "SR7" => mono::sr7,
        "PVD4" => mono::pvd4,
        "WB4" => mono::wb4,
        "modified-g3mod" => mono::modified_g3mod,
        "modified-g10" => mono::modified_g10,
        "modified-PVD4" => mono::modified_pvd4,
        "BNH" => multi::bnh,
        "SRN" => multi::srn,
        "TNK" => multi::tnk,
        "OSY" => multi::osy,
        "TwoBarTruss" => multi::two_bar_truss,
        "WeldedBeam" => multi::welded_beam,
        "CONSTR" => multi::constr,
        "WATER" => multi::water,
        "toy" => multi::toy,
        _ => return None,
    };
    Some(f)
}

/// Looks up a problem by name (case-insensitive).
pub fn get(name: &str) -> Result<Problem> {
    let meta = metadata()
        .iter()
        .find(|m| m.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| BmooError::UnknownProblem(name.to_string()))?
        .clone();
    let eval = evaluator(&meta.name).ok_or_else(|| BmooError::UnknownProblem(name.to_string()))?;
    Ok(Problem { meta, eval })
}

pub fn list_problems(suite: Suite) -> Vec<Problem> {
    metadata()
        .iter()
        .filter(|m| m.suite == suite)
        .map(|m| get(&m.name).expect("every metadata record has an evaluator"))
        .collect()
}
