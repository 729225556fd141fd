//! Test-side oracles written independently of the library code.
#![allow(dead_code)]

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Marsaglia's Taylor series, `Phi(z) = 1/2 + phi(z) (z + z^3/3 + z^5/15 + ...)`.
pub fn cdf(z: f64) -> f64 {
    if z < -9.0 {
        return 0.0;
    }
    if z > 9.0 {
        return 1.0;
    }
    if z < 0.0 {
        return 1.0 - cdf(-z);
    }
    let (mut sum, mut term) = (z, z);
    let mut k = 1.0;
    loop {
        term *= z * z / (2.0 * k + 1.0);
        let next = sum + term;
        if next == sum {
            break;
        }
        sum = next;
        k += 1.0;
    }
    0.5 + pdf(z) * sum
}

/// `P(N(mu, sd^2) <= t)`, an indicator when `sd = 0`.
pub fn below(t: f64, mu: f64, sd: f64) -> f64 {
    if sd == 0.0 {
        if mu <= t {
            1.0
        } else {
            0.0
        }
    } else {
        cdf((t - mu) / sd)
    }
}

/// `E[max(z + sqrt(s) N, 0)]`.
pub fn gamma(z: f64, s: f64) -> f64 {
    if s == 0.0 {
        return z.max(0.0);
    }
    let r = s.sqrt();
    r * pdf(z / r) + z * cdf(z / r)
}

/// Image of a raw `(f, c)` point under the extended domination map.
pub fn psi(y: &[f64], p: usize) -> Vec<f64> {
    if y[p..].iter().all(|&c| c <= 0.0) {
        y[..p].iter().copied().chain(y[p..].iter().map(|_| 0.0)).collect()
    } else {
        std::iter::repeat_n(f64::INFINITY, p).chain(y[p..].iter().map(|&c| c.max(0.0))).collect()
    }
}

pub fn pareto(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Raw point `y` lies in the region dominated by one of the raw points `ev`.
pub fn dominated_by_any(ev: &[Vec<f64>], y: &[f64], p: usize) -> bool {
    let py = psi(y, p);
    ev.iter().any(|e| pareto(&psi(e, p), &py))
}

/// Adaptive Simpson quadrature.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Dense Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

pub fn matern52(h: f64) -> f64 {
    let s = 5f64.sqrt() * h;
    (1.0 + s + s * s / 3.0) * (-s).exp()
}

/// Kriging with an unknown constant mean, written from the textbook
/// equations. Returns `(mean, variance)` at `x`.
pub fn kriging(xs: &[Vec<f64>], y: &[f64], theta: &[f64], sigma2: f64, nugget: f64, x: &[f64]) -> (f64, f64) {
    let n = xs.len();
    let corr = |a: &[f64], b: &[f64]| {
        let h: f64 = a.iter().zip(b).zip(theta).map(|((u, v), t)| ((u - v) / t).powi(2)).sum();
        matern52(h.sqrt())
    };
    let k: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| sigma2 * corr(&xs[i], &xs[j]) + if i == j { nugget } else { 0.0 }).collect())
        .collect();
    let kx: Vec<f64> = xs.iter().map(|xi| sigma2 * corr(xi, x)).collect();
    let ones = vec![1.0; n];
    let ki_y = solve(k.clone(), y.to_vec());
    let ki_1 = solve(k.clone(), ones.clone());
    let ki_x = solve(k, kx.clone());
    let s1: f64 = ki_1.iter().sum();
    let mu = ki_y.iter().sum::<f64>() / s1;
    let ki_r: Vec<f64> = ki_y.iter().zip(&ki_1).map(|(a, b)| a - mu * b).collect();
    let mean = mu + kx.iter().zip(&ki_r).map(|(a, b)| a * b).sum::<f64>();
    let quad: f64 = kx.iter().zip(&ki_x).map(|(a, b)| a * b).sum();
    let u = 1.0 - ki_x.iter().sum::<f64>();
    (mean, sigma2 - quad + u * u / s1)
}

pub fn uniform_in(r: &mut ChaCha20Rng, lo: &[f64], hi: &[f64]) -> Vec<f64> {
    lo.iter().zip(hi).map(|(l, h)| l + r.random::<f64>() * (h - l)).collect()
}

/// Upper quantile of the chi-square distribution by bisection on the
/// regularized lower incomplete gamma series.
pub fn chi2_upper_quantile(dof: f64, alpha: f64) -> f64 {
    let cdf = |x: f64| {
        let a = dof / 2.0;
        let z = x / 2.0;
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut k = 1.0;
        while term > sum * 1e-16 {
            term *= z / (a + k);
            sum += term;
            k += 1.0;
        }
        (a * z.ln() - z - ln_gamma(a)).exp() * sum
    };
    let (mut lo, mut hi) = (0.0, dof * 10.0 + 100.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < 1.0 - alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Lanczos approximation.
pub fn ln_gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let x = x - 1.0;
    let mut a = G[0];
    let t = x + 7.5;
    for (i, g) in G.iter().enumerate().skip(1) {
        a += g / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}
