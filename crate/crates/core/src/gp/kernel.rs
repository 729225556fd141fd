const SQRT5: f64 = 2.236_067_977_499_79;

/// Matérn 5/2 correlation at scaled distance `h`.
pub fn matern52(h: f64) -> f64 {
    let a = SQRT5 * h;
    (1.0 + a + a * a / 3.0) * (-a).exp()
}

/// Correlation and the common factor of its log-range derivatives at distance `h`.
///
/// `d k / d log(theta_i) = factor * (delta_i / theta_i)^2`.
pub(crate) fn matern52_with_grad(h: f64) -> (f64, f64) {
    let a = SQRT5 * h;
    let e = (-a).exp();
    ((1.0 + a + a * a / 3.0) * e, 5.0 / 3.0 * (1.0 + a) * e)
}

/// Anisotropic scaled distance `sqrt(sum ((a_i - b_i) / theta_i)^2)`.
pub fn scaled_distance(a: &[f64], b: &[f64], theta: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(theta)
        .map(|((x, y), t)| ((x - y) / t).powi(2))
        .sum::<f64>()
        .sqrt()
}
