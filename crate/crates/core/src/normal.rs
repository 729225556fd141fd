//! Standard normal helpers.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

pub fn pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

pub fn cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// `P(N(mu, sd^2) <= t)`, an exact indicator when `sd == 0`.
pub fn prob_below(t: f64, mu: f64, sd: f64) -> f64 {
    if sd > 0.0 {
        cdf((t - mu) / sd)
    } else if mu <= t {
        1.0
    } else {
        0.0
    }
}

/// `gamma(z, s) = sqrt(s) phi(z / sqrt(s)) + z Phi(z / sqrt(s))`, with `max(z, 0)` at `s = 0`.
///
/// Its derivative in `z` is `Phi(z / sqrt(s))`.
pub fn gamma(z: f64, s: f64) -> f64 {
    if s > 0.0 {
        let sd = s.sqrt();
        let u = z / sd;
        sd * pdf(u) + z * cdf(u)
    } else {
        z.max(0.0)
    }
}
