//! Bounded boxes `B = B_o x B_c` in objective and constraint space, and the
//! volume dominated by a single evaluation inside them.

use crate::error::{BmooError, Result};
use crate::gp::PosteriorBundle;
use serde::{Deserialize, Serialize};

const PAD_REL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxBounds {
    pub low_obj: Vec<f64>,
    pub upp_obj: Vec<f64>,
    pub low_cons: Vec<f64>,
    pub upp_cons: Vec<f64>,
}

/// Axis-aligned box in a space with `p` leading objective coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceBox {
    pub p: usize,
    pub low: Vec<f64>,
    pub upp: Vec<f64>,
}

impl SpaceBox {
    pub fn dim(&self) -> usize {
        self.low.len()
    }
    pub fn q(&self) -> usize {
        self.low.len() - self.p
    }
    pub fn volume(&self) -> f64 {
        self.low.iter().zip(&self.upp).map(|(l, u)| u - l).product()
    }
    pub fn contains(&self, y: &[f64]) -> bool {
        y.iter().zip(&self.low).zip(&self.upp).all(|((v, l), u)| *v >= *l && *v <= *u)
    }
}

fn pad(low: &mut f64, upp: &mut f64) {
    let span = *upp - *low;
    let e = PAD_REL * if span > 0.0 { span } else { 1.0 };
    *low -= e;
    *upp += e;
}

impl BoxBounds {
    pub fn p(&self) -> usize {
        self.low_obj.len()
    }
    pub fn q(&self) -> usize {
        self.low_cons.len()
    }

    /// Corners from observed values and `mean +/- lambda * sd` at candidate points.
    ///
    /// `evals` hold concatenated `(f, c)` vectors.
    pub fn update(
        evals: &[Vec<f64>],
        candidates: &[PosteriorBundle],
        p: usize,
        lambda_obj: f64,
        lambda_cons: f64,
    ) -> Result<BoxBounds> {
        let Some(first) = evals.first() else {
            return Err(BmooError::Config("bounds need at least one evaluation".into()));
        };
        let k = first.len();
        let mut low = vec![f64::INFINITY; k];
        let mut upp = vec![f64::NEG_INFINITY; k];
        for e in evals {
            for i in 0..k {
                low[i] = low[i].min(e[i]);
                upp[i] = upp[i].max(e[i]);
            }
        }
        for b in candidates {
            for (i, post) in b.iter().enumerate() {
                let lam = if i < p { lambda_obj } else { lambda_cons };
                let (m, s) = (post.mean, post.sd());
                if !m.is_finite() || !s.is_finite() {
                    return Err(BmooError::Config("non-finite prediction while computing bounds".into()));
                }
                low[i] = low[i].min(m - lam * s);
                upp[i] = upp[i].max(m + lam * s);
            }
        }
        for i in p..k {
            low[i] = low[i].min(0.0);
            upp[i] = upp[i].max(0.0);
        }
        for i in 0..k {
            let (mut l, mut u) = (low[i], upp[i]);
            pad(&mut l, &mut u);
            low[i] = l;
            upp[i] = u;
        }
        Ok(BoxBounds {
            low_obj: low[..p].to_vec(),
            upp_obj: upp[..p].to_vec(),
            low_cons: low[p..].to_vec(),
            upp_cons: upp[p..].to_vec(),
        })
    }

    pub fn volume_obj(&self) -> f64 {
        self.low_obj.iter().zip(&self.upp_obj).map(|(l, u)| u - l).product()
    }

    pub fn volume_cons(&self) -> f64 {
        self.low_cons.iter().zip(&self.upp_cons).map(|(l, u)| u - l).product()
    }

    /// `|B_c^-|`, the volume of the feasible part `B_c ∩ {y <= 0}`.
    pub fn volume_cons_neg(&self) -> f64 {
        self.low_cons.iter().map(|l| l.abs()).product()
    }

    pub fn volume(&self) -> f64 {
        self.volume_obj() * self.volume_cons()
    }

    pub fn full(&self) -> SpaceBox {
        let mut low = self.low_obj.clone();
        low.extend_from_slice(&self.low_cons);
        let mut upp = self.upp_obj.clone();
        upp.extend_from_slice(&self.upp_cons);
        SpaceBox { p: self.p(), low, upp }
    }

    pub fn objective_space(&self) -> SpaceBox {
        SpaceBox { p: self.p(), low: self.low_obj.clone(), upp: self.upp_obj.clone() }
    }

    pub fn constraint_space(&self) -> SpaceBox {
        SpaceBox { p: 0, low: self.low_cons.clone(), upp: self.upp_cons.clone() }
    }

    /// Whether a concatenated `(f, c)` vector lies in `B`.
    pub fn contains(&self, y: &[f64]) -> bool {
        self.full().contains(y)
    }
}

/// Volume of `B` dominated by one infeasible evaluation with constraints `c1`.
pub fn volume_h1_infeasible(b: &BoxBounds, c1: &[f64]) -> Result<f64> {
    if c1.iter().all(|&c| c <= 0.0) {
        return Err(BmooError::Config("volume_h1_infeasible called with a feasible point".into()));
    }
    let mut v = b.volume_obj();
    for j in 0..c1.len() {
        v *= if c1[j] <= 0.0 {
            b.upp_cons[j] - b.low_cons[j]
        } else {
            (b.upp_cons[j] - c1[j]).max(0.0)
        };
    }
    Ok(v)
}

/// Volume of `B` dominated by one feasible evaluation with objectives `f1`.
///
/// The objective factor is the length of `[f1_i, upp_i]` inside `B_o`.
pub fn volume_h1_feasible(b: &BoxBounds, f1: &[f64]) -> f64 {
    let neg = b.volume_cons_neg();
    let obj: f64 = (0..f1.len())
        .map(|i| (b.upp_obj[i] - f1[i].max(b.low_obj[i])).max(0.0))
        .product();
    b.volume_obj() * (b.volume_cons() - neg) + obj * neg
}
