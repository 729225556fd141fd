use super::mono::{weld_buckling, weld_shear};
use std::f64::consts::PI;

pub fn bnh(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = 4.0 * x[0] * x[0] + 4.0 * x[1] * x[1];
    f[1] = (x[0] - 5.0).powi(2) + (x[1] - 5.0).powi(2);
    c[0] = (x[0] - 5.0).powi(2) + x[1] * x[1] - 25.0;
    c[1] = 7.7 - (x[0] - 8.0).powi(2) - (x[1] + 3.0).powi(2);
}

pub fn srn(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = 2.0 + (x[0] - 2.0).powi(2) + (x[1] - 1.0).powi(2);
    f[1] = 9.0 * x[0] - (x[1] - 1.0).powi(2);
    c[0] = x[0] * x[0] + x[1] * x[1] - 225.0;
    c[1] = x[0] - 3.0 * x[1] + 10.0;
}

pub fn tnk(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = x[0];
    f[1] = x[1];
    c[0] = -x[0] * x[0] - x[1] * x[1] + 1.0 + 0.1 * (16.0 * x[0].atan2(x[1])).cos();
    c[1] = (x[0] - 0.5).powi(2) + (x[1] - 0.5).powi(2) - 0.5;
}

pub fn osy(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = -(25.0 * (x[0] - 2.0).powi(2)
        + (x[1] - 2.0).powi(2)
        + (x[2] - 1.0).powi(2)
        + (x[3] - 4.0).powi(2)
        + (x[4] - 1.0).powi(2));
    f[1] = x.iter().map(|v| v * v).sum();
    c[0] = 2.0 - x[0] - x[1];
    c[1] = x[0] + x[1] - 6.0;
    c[2] = x[1] - x[0] - 2.0;
    c[3] = x[0] - 3.0 * x[1] - 2.0;
    c[4] = (x[2] - 3.0).powi(2) + x[3] - 4.0;
    c[5] = 4.0 - (x[4] - 3.0).powi(2) - x[5];
}

pub fn two_bar_truss(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    let (a1, a2, y) = (x[0], x[1], x[2]);
    let l1 = (16.0 + y * y).sqrt();
    let l2 = (1.0 + y * y).sqrt();
    let s1 = 20.0 * l1 / (y * a1);
    let s2 = 80.0 * l2 / (y * a2);
    f[0] = a1 * l1 + a2 * l2;
    f[1] = s1.max(s2);
    c[0] = f[1] - 1e5;
}

pub fn welded_beam(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    let (h, l, t, b) = (x[0], x[1], x[2], x[3]);
    f[0] = 1.10471 * h * h * l + 0.04811 * t * b * (14.0 + l);
    f[1] = 2.1952 / (t.powi(3) * b);
    c[0] = weld_shear(x) - 13600.0;
    c[1] = 504000.0 / (b * t * t) - 30000.0;
    c[2] = h - b;
    c[3] = 6000.0 - weld_buckling(x);
}

pub fn constr(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = x[0];
    f[1] = (1.0 + x[1]) / x[0];
    c[0] = 6.0 - x[1] - 9.0 * x[0];
    c[1] = 1.0 + x[1] - 9.0 * x[0];
}

/// Objectives divided by their usual normalizing constants.
pub fn water(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    let (x1, x2, x3) = (x[0], x[1], x[2]);
    let r = 1.0 / (x1 * x2);
    f[0] = (106780.37 * (x2 + x3) + 61704.67) / 8.0e4;
    f[1] = 3000.0 * x1 / 1.5e3;
    f[2] = 305700.0 * 2289.0 * x2 / (0.06 * 2289.0f64).powf(0.65) / 3.0e6;
    f[3] = 250.0 * 2289.0 * (-39.75 * x2 + 9.9 * x3 + 2.74).exp() / 6.0e6;
    f[4] = 25.0 * (1.39 * r + 4940.0 * x3 - 80.0) / 8.0e3;
    c[0] = 0.00139 * r + 4.94 * x3 - 0.08 - 1.0;
    c[1] = 0.000306 * r + 1.082 * x3 - 0.0986 - 1.0;
    c[2] = 12.307 * r + 49408.24 * x3 + 4051.02 - 50000.0;
    c[3] = 2.098 * r + 8046.33 * x3 - 696.71 - 16000.0;
    c[4] = 2.138 * r + 7883.39 * x3 - 705.04 - 10000.0;
    c[5] = 0.417 * r + 1721.26 * x3 - 136.54 - 2000.0;
    c[6] = 0.164 * r + 631.13 * x3 - 54.48 - 550.0;
}

pub fn toy(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = -(x[0] - 10.0).powi(2) - (x[1] - 15.0).powi(2);
    f[1] = -(x[0] + 5.0).powi(2) - x[1] * x[1];
    let b = x[1] - 5.1 / (4.0 * PI * PI) * x[0] * x[0] + 5.0 / PI * x[0] - 6.0;
    c[0] = b * b + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * x[0].cos() + 9.0;
}
