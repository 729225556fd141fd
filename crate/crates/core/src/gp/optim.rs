//! Box-constrained quasi-Newton minimization.

pub struct Outcome {
    pub x: Vec<f64>,
    pub f: f64,
}

fn project(x: &mut [f64], lo: &[f64], hi: &[f64]) {
    for ((v, l), h) in x.iter_mut().zip(lo).zip(hi) {
        *v = v.clamp(*l, *h);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `fg` (value and gradient) within `[lo, hi]` by projected BFGS.
///
/// Non-finite values are treated as infeasible and cause backtracking.
pub fn minimize<F>(mut fg: F, x0: &[f64], lo: &[f64], hi: &[f64], max_iter: usize) -> Outcome
where
    F: FnMut(&[f64]) -> (f64, Vec<f64>),
{
    let n = x0.len();
    let mut x = x0.to_vec();
    project(&mut x, lo, hi);
    let (mut f, mut g) = fg(&x);
    if !f.is_finite() {
        return Outcome { x, f };
    }
    let mut hinv = identity(n);
    for _ in 0..max_iter {
        // free variables: not pinned at a bound by the gradient
        let free: Vec<bool> = (0..n)
            .map(|i| !((x[i] <= lo[i] && g[i] > 0.0) || (x[i] >= hi[i] && g[i] < 0.0)))
            .collect();
        let pg: f64 = (0..n).filter(|&i| free[i]).map(|i| g[i] * g[i]).sum::<f64>().sqrt();
        if pg < 1e-6 {
            break;
        }
        let mut dir = vec![0.0; n];
        for i in 0..n {
            if free[i] {
                dir[i] = -(0..n).filter(|&j| free[j]).map(|j| hinv[i][j] * g[j]).sum::<f64>();
            }
        }
        if dot(&dir, &g) >= 0.0 {
            hinv = identity(n);
            for i in 0..n {
                dir[i] = if free[i] { -g[i] } else { 0.0 };
            }
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let mut xn: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + step * d).collect();
            project(&mut xn, lo, hi);
            let (fnew, gnew) = fg(&xn);
            let decrease: f64 = x.iter().zip(&xn).zip(&g).map(|((a, b), gi)| gi * (b - a)).sum();
            if fnew.is_finite() && fnew <= f + 1e-4 * decrease {
                accepted = Some((xn, fnew, gnew));
                break;
            }
            step *= 0.5;
        }
        let Some((xn, fnew, gnew)) = accepted else { break };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = gnew.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &yv);
        let rel = (f - fnew).abs() / f.abs().max(1.0);
        x = xn;
        f = fnew;
        g = gnew;
        if rel < 1e-10 {
            break;
        }
        if sy > 1e-12 {
            bfgs_update(&mut hinv, &s, &yv, sy);
        }
    }
    Outcome { x, f }
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let hy: Vec<f64> = (0..n).map(|i| dot(&h[i], y)).collect();
    let yhy = dot(y, &hy);
    let rho = 1.0 / sy;
    for i in 0..n {
        for j in 0..n {
            h[i][j] += (1.0 + yhy * rho) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
    }
}
