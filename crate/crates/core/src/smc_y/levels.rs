//! Intermediate fronts between a current front and a target front.
//!
//! A score (surviving particles, or effective sample size) is kept near a
//! threshold by greedily adding target points, then moving an anchor point
//! toward a remaining target point with a dichotomy on the path parameter.

use crate::bounds::SpaceBox;
use crate::domination::Front;
use rand::{Rng, RngExt};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Path {
    /// Anchor at the upper corner on violated constraints, zero elsewhere.
    Infeasible,
    /// Anchor `(upp_obj, 0)` moved toward a feasible target.
    Feasible,
    /// Corner anchors `(upp_obj, upp_k e_k)` moved toward `(upp_obj, 0)`.
    Corners,
}

fn is_feasible_mapped(m: &[f64], p: usize) -> bool {
    m[p..].iter().all(|&c| c == 0.0)
}

fn path_points(path: Path, ystar: &[f64], space: &SpaceBox, u: f64) -> Vec<Vec<f64>> {
    let p = space.p;
    let k = space.dim();
    match path {
        Path::Infeasible => {
            if u >= 1.0 {
                return vec![ystar.to_vec()];
            }
            let mut v = vec![f64::INFINITY; k];
            for j in p..k {
                v[j] = if ystar[j] > 0.0 {
                    space.upp[j] + u * (ystar[j] - space.upp[j])
                } else {
                    0.0
                };
            }
            vec![v]
        }
        Path::Feasible => {
            if u >= 1.0 {
                return vec![ystar.to_vec()];
            }
            let mut v = vec![0.0; k];
            for i in 0..p {
                v[i] = space.upp[i] + u * (ystar[i] - space.upp[i]);
            }
            vec![v]
        }
        Path::Corners => {
            if u >= 1.0 {
                let mut v = vec![0.0; k];
                v[..p].copy_from_slice(&space.upp[..p]);
                return vec![v];
            }
            (p..k)
                .map(|j| {
                    let mut v = vec![f64::INFINITY; k];
                    for c in p..k {
                        v[c] = 0.0;
                    }
                    v[j] = (1.0 - u) * space.upp[j];
                    v
                })
                .collect()
        }
    }
}

fn with_points(base: &Front, pts: Vec<Vec<f64>>) -> Front {
    let mut f = base.clone();
    for pt in pts {
        f.insert(pt);
    }
    f
}

/// Next front on the way from `current` to `target`.
///
/// `score` must be nonincreasing as the dominated region grows and the
/// current front must satisfy `score >= threshold`.
pub fn next_front<S, R>(
    current: &Front,
    target: &Front,
    space: &SpaceBox,
    threshold: f64,
    score: &mut S,
    rng: &mut R,
    max_bisect: usize,
) -> Front
where
    S: FnMut(&Front) -> f64,
    R: Rng + ?Sized,
{
    let p = space.p;
    let mut front = current.clone();
    for y in &target.points {
        if front.contains(y) {
            continue;
        }
        let mut trial = front.clone();
        trial.insert(y.clone());
        if score(&trial) >= threshold {
            front = trial;
        }
    }
    let remaining: Vec<&Vec<f64>> = target.points.iter().filter(|y| !front.contains(y)).collect();
    if remaining.is_empty() {
        return front;
    }
    let ystar = remaining[rng.random_range(0..remaining.len())].clone();
    let path = if !is_feasible_mapped(&ystar, p) {
        Path::Infeasible
    } else {
        let mut anchor0 = vec![0.0; space.dim()];
        anchor0[..p].copy_from_slice(&space.upp[..p]);
        if space.q() == 0 || score(&with_points(&front, vec![anchor0])) >= threshold {
            Path::Feasible
        } else {
            Path::Corners
        }
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut chosen = None;
    for _ in 0..max_bisect {
        let mid = 0.5 * (lo + hi);
        let cand = with_points(&front, path_points(path, &ystar, space, mid));
        let s = score(&cand);
        if s >= threshold {
            lo = mid;
            if s <= 2.0 * threshold {
                chosen = Some(cand);
                break;
            }
        } else {
            hi = mid;
        }
    }
    let out = chosen.unwrap_or_else(|| with_points(&front, path_points(path, &ystar, space, lo)));
    if out.same_set(&front) {
        // the score jumps past the threshold; take the first front that moves
        return with_points(&front, path_points(path, &ystar, space, hi));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_ends_at_target() {
        let space = SpaceBox { p: 1, low: vec![0.0, -1.0, -1.0], upp: vec![2.0, 1.0, 1.0] };
        let ys = vec![f64::INFINITY, 0.5, 0.0];
        assert_eq!(path_points(Path::Infeasible, &ys, &space, 1.0), vec![ys.clone()]);
        let a = &path_points(Path::Infeasible, &ys, &space, 0.0)[0];
        assert_eq!(a[1..], [1.0, 0.0]);
        let corners = path_points(Path::Corners, &[0.5, 0.0, 0.0], &space, 0.25);
        assert_eq!(corners.len(), 2);
        assert_eq!(corners[0][1..], [0.75, 0.0]);
        assert_eq!(corners[1][1..], [0.0, 0.75]);
    }
}
