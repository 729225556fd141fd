//! Extended domination for constrained multi-objective problems.
//!
//! A point `(y_o, y_c)` is mapped to `(y_o, 0)` when every `y_c <= 0` and to
//! `(+inf, .., +inf, max(y_c, 0))` otherwise. Pareto domination on the mapped
//! vectors gives the ordering: feasible points compare by objectives, feasible
//! beats infeasible, infeasible points compare by constraint violation.

use serde::{Deserialize, Serialize};

/// Mapped image of a raw point with `p` objective coordinates followed by constraints.
pub fn psi(y: &[f64], p: usize) -> Vec<f64> {
    let mut out = vec![0.0; y.len()];
    psi_into(y, p, &mut out);
    out
}

pub fn psi_into(y: &[f64], p: usize, out: &mut [f64]) {
    let feasible = y[p..].iter().all(|&c| c <= 0.0);
    if feasible {
        out[..p].copy_from_slice(&y[..p]);
        out[p..].iter_mut().for_each(|c| *c = 0.0);
    } else {
        out[..p].iter_mut().for_each(|o| *o = f64::INFINITY);
        for (o, &c) in out[p..].iter_mut().zip(&y[p..]) {
            *o = c.max(0.0);
        }
    }
}

/// `a <= b` everywhere and `a < b` somewhere. Infinite coordinates compare equal.
pub fn pareto_dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (&x, &y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// `a <= b` everywhere.
pub fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Extended domination between two raw points.
pub fn ext_dominates(a: &[f64], b: &[f64], p: usize) -> bool {
    pareto_dominates(&psi(a, p), &psi(b, p))
}

/// Set of mutually non-dominated mapped points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Front {
    pub p: usize,
    pub q: usize,
    pub points: Vec<Vec<f64>>,
}

impl Front {
    pub fn empty(p: usize, q: usize) -> Self {
        Front { p, q, points: Vec::new() }
    }

    /// Front of raw observations `(objectives, constraints)`.
    pub fn from_raw<'a, I>(p: usize, q: usize, raw: I) -> Self
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut f = Front::empty(p, q);
        for y in raw {
            f.insert(psi(y, p));
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Inserts a mapped point. Returns `false` when a member weakly dominates it.
    pub fn insert(&mut self, m: Vec<f64>) -> bool {
        if self.points.iter().any(|a| weakly_dominates(a, &m)) {
            return false;
        }
        self.points.retain(|a| !pareto_dominates(&m, a));
        self.points.push(m);
        true
    }

    pub fn insert_raw(&mut self, y: &[f64]) -> bool {
        self.insert(psi(y, self.p))
    }

    /// Whether the mapped point lies in the region dominated by the front.
    pub fn dominates_mapped(&self, m: &[f64]) -> bool {
        self.points.iter().any(|a| pareto_dominates(a, m))
    }

    /// Whether the raw point lies in the dominated region `H`.
    pub fn dominates_raw(&self, y: &[f64], buf: &mut [f64]) -> bool {
        psi_into(y, self.p, buf);
        self.dominates_mapped(buf)
    }

    pub fn contains(&self, m: &[f64]) -> bool {
        self.points.iter().any(|a| a.as_slice() == m)
    }

    /// Set equality, ignoring order.
    pub fn same_set(&self, other: &Front) -> bool {
        self.len() == other.len() && other.points.iter().all(|m| self.contains(m))
    }

    pub fn has_feasible(&self) -> bool {
        self.points.iter().any(|a| a[self.p..].iter().all(|&c| c == 0.0))
    }

    pub fn is_mutually_nondominated(&self) -> bool {
        self.points.iter().enumerate().all(|(i, a)| {
            self.points
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !weakly_dominates(b, a))
        })
    }
}
