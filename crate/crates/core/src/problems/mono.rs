use super::plog;
use std::f64::consts::PI;

pub fn g1(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = 5.0 * x[..4].iter().sum::<f64>()
        - 5.0 * x[..4].iter().map(|v| v * v).sum::<f64>()
        - x[4..13].iter().sum::<f64>();
    c[0] = 2.0 * x[0] + 2.0 * x[1] + x[9] + x[10] - 10.0;
    c[1] = 2.0 * x[0] + 2.0 * x[2] + x[9] + x[11] - 10.0;
    c[2] = 2.0 * x[1] + 2.0 * x[2] + x[10] + x[11] - 10.0;
    c[3] = -8.0 * x[0] + x[9];
    c[4] = -8.0 * x[1] + x[10];
    c[5] = -8.0 * x[2] + x[11];
    c[6] = -2.0 * x[3] - x[4] + x[9];
    c[7] = -2.0 * x[5] - x[6] + x[10];
    c[8] = -2.0 * x[7] - x[8] + x[11];
}

fn g3_core(x: &[f64]) -> (f64, f64) {
    let d = x.len() as f64;
    let prod = x.iter().map(|v| d.sqrt() * v).product::<f64>();
    (plog(prod), x.iter().map(|v| v * v).sum::<f64>() - 1.0)
}

pub fn g3mod(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    let (v, g) = g3_core(x);
    f[0] = -v;
    c[0] = g;
}

pub fn modified_g3mod(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    let (v, g) = g3_core(x);
    f[0] = -v.powf(0.1);
    c[0] = g;
}

pub fn g5mod(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = 3.0 * x[0] + 1e-6 * x[0].powi(3) + 2.0 * x[1] + (2e-6 / 3.0) * x[1].powi(3);
    c[0] = x[2] - x[3] - 0.55;
    c[1] = x[3] - x[2] - 0.55;
    c[2] = 1000.0 * (-x[2] - 0.25).sin() + 1000.0 * (-x[3] - 0.25).sin() + 894.8 - x[0];
    c[3] = 1000.0 * (x[2] - 0.25).sin() + 1000.0 * (x[2] - x[3] - 0.25).sin() + 894.8 - x[1];
    c[4] = 1000.0 * (x[3] - 0.25).sin() + 1000.0 * (x[3] - x[2] - 0.25).sin() + 1294.8;
}

pub fn g6(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = (x[0] - 10.0).powi(3) + (x[1] - 20.0).powi(3);
    c[0] = -(x[0] - 5.0).powi(2) - (x[1] - 5.0).powi(2) + 100.0;
    c[1] = (x[0] - 6.0).powi(2) + (x[1] - 5.0).powi(2) - 82.81;
}

pub fn g7(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = x[0] * x[0] + x[1] * x[1] + x[0] * x[1] - 14.0 * x[0] - 16.0 * x[1]
        + (x[2] - 10.0).powi(2)
        + 4.0 * (x[3] - 5.0).powi(2)
        + (x[4] - 3.0).powi(2)
        + 2.0 * (x[5] - 1.0).powi(2)
        + 5.0 * x[6] * x[6]
        + 7.0 * (x[7] - 11.0).powi(2)
        + 2.0 * (x[8] - 10.0).powi(2)
        + (x[9] - 7.0).powi(2)
        + 45.0;
    c[0] = -105.0 + 4.0 * x[0] + 5.0 * x[1] - 3.0 * x[6] + 9.0 * x[7];
    c[1] = 10.0 * x[0] - 8.0 * x[1] - 17.0 * x[6] + 2.0 * x[7];
    c[2] = -8.0 * x[0] + 2.0 * x[1] + 5.0 * x[8] - 2.0 * x[9] - 12.0;
    c[3] = 3.0 * (x[0] - 2.0).powi(2) + 4.0 * (x[1] - 3.0).powi(2) + 2.0 * x[2] * x[2]
        - 7.0 * x[3]
        - 120.0;
    c[4] = 5.0 * x[0] * x[0] + 8.0 * x[1] + (x[2] - 6.0).powi(2) - 2.0 * x[3] - 40.0;
    c[5] = x[0] * x[0] + 2.0 * (x[1] - 2.0).powi(2) - 2.0 * x[0] * x[1] + 14.0 * x[4]
        - 6.0 * x[5];
    c[6] = 0.5 * (x[0] - 8.0).powi(2) + 2.0 * (x[1] - 4.0).powi(2) + 3.0 * x[4] * x[4]
        - x[5]
        - 30.0;
    c[7] = -3.0 * x[0] + 6.0 * x[1] + 12.0 * (x[8] - 8.0).powi(2) - 7.0 * x[9];
}

pub fn g8(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    let s = (2.0 * PI * x[0]).sin();
    f[0] = -s.powi(3) * (2.0 * PI * x[1]).sin() / (x[0].powi(3) * (x[0] + x[1]));
    c[0] = x[0] * x[0] - x[1] + 1.0;
    c[1] = 1.0 - x[0] + (x[1] - 4.0).powi(2);
}

pub fn g9(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = (x[0] - 10.0).powi(2)
        + 5.0 * (x[1] - 12.0).powi(2)
        + x[2].powi(4)
        + 3.0 * (x[3] - 11.0).powi(2)
        + 10.0 * x[4].powi(6)
        + 7.0 * x[5] * x[5]
        + x[6].powi(4)
        - 4.0 * x[5] * x[6]
        - 10.0 * x[5]
        - 8.0 * x[6];
    c[0] = -127.0 + 2.0 * x[0] * x[0] + 3.0 * x[1].powi(4) + x[2] + 4.0 * x[3] * x[3]
        + 5.0 * x[4];
    c[1] = -282.0 + 7.0 * x[0] + 3.0 * x[1] + 10.0 * x[2] * x[2] + x[3] - x[4];
    c[2] = -196.0 + 23.0 * x[0] + x[1] * x[1] + 6.0 * x[5] * x[5] - 8.0 * x[6];
    c[3] = 4.0 * x[0] * x[0] + x[1] * x[1] - 3.0 * x[0] * x[1] + 2.0 * x[2] * x[2]
        + 5.0 * x[5]
        - 11.0 * x[6];
}

fn g10_core(x: &[f64], f: &mut [f64], c: &mut [f64], power: i32) {
    f[0] = x[0] + x[1] + x[2];
    c[0] = 0.0025 * (x[3] + x[5]) - 1.0;
    c[1] = 0.0025 * (x[4] + x[6] - x[3]) - 1.0;
    c[2] = 0.01 * (x[7] - x[4]) - 1.0;
    c[3] = plog(100.0 * x[0] - x[0] * x[5] + 833.33252 * x[3] - 83333.333).powi(power);
    c[4] = plog(x[1] * x[3] - x[1] * x[6] - 1250.0 * x[3] + 1250.0 * x[4]).powi(power);
    c[5] = plog(x[2] * x[4] - x[2] * x[7] - 2500.0 * x[4] + 1250000.0).powi(power);
}

pub fn g10(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    g10_core(x, f, c, 1)
}

pub fn modified_g10(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    g10_core(x, f, c, 7)
}

pub fn g13mod(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = (x[0] * x[1] * x[2] * x[3] * x[4]).exp();
    c[0] = x.iter().map(|v| v * v).sum::<f64>() - 10.0;
    c[1] = x[1] * x[2] - 5.0 * x[3] * x[4];
    c[2] = x[0].powi(3) + x[1].powi(3) + 1.0;
}

pub fn g16(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    let y1 = x[1] + x[2] + 41.6;
    let c1 = 0.024 * x[3] - 4.62;
    let y2 = 12.5 / c1 + 12.0;
    let c2 = 0.0003535 * x[0] * x[0] + 0.5311 * x[0] + 0.08705 * y2 * x[0];
    let c3 = 0.052 * x[0] + 78.0 + 0.002377 * y2 * x[0];
    let y3 = c2 / c3;
    let y4 = 19.0 * y3;
    let c4 = 0.04782 * (x[0] - y3) + 0.1956 * (x[0] - y3).powi(2) / x[1] + 0.6376 * y4 + 1.594 * y3;
    let c5 = 100.0 * x[1];
    let c6 = x[0] - y3 - y4;
    let c7 = 0.950 - c4 / c5;
    let y5 = c6 * c7;
    let y6 = x[0] - y5 - y4 - y3;
    let c8 = (y5 + y4) * 0.995;
    let y7 = c8 / y1;
    let y8 = c8 / 3798.0;
    let c9 = y7 - 0.0663 * y7 / y8 - 0.3153;
    let y9 = 96.82 / c9 + 0.321 * y1;
    let y10 = 1.29 * y5 + 1.258 * y4 + 2.29 * y3 + 1.71 * y6;
    let y11 = 1.71 * x[0] - 0.452 * y4 + 0.580 * y3;
    let c10 = 12.3 / 752.3;
    let c11 = (1.75 * y2) * (0.995 * x[0]);
    let c12 = 0.995 * y10 + 1998.0;
    let y12 = c10 * x[0] + c11 / c12;
    let y13 = c12 - 1.75 * y2;
    let y14 = 3623.0 + 64.4 * x[1] + 58.4 * x[2] + 146312.0 / (y9 + x[4]);
    let c13 = 0.995 * y10 + 60.8 * x[1] + 48.0 * x[3] - 0.1121 * y14 - 5095.0;
    let y15 = y13 / c13;
    let y16 = 148000.0 - 331000.0 * y15 + 40.0 * y13 - 61.0 * y15 * y13;
    let c14 = 2324.0 * y10 - 28740000.0 * y2;
    let y17 = 14130000.0 - 1328.0 * y10 - 531.0 * y11 + c14 / c12;
    let c15 = y13 / y15 - y13 / 0.52;
    let c16 = 1.104 - 0.72 * y15;
    let c17 = y9 + x[4];

    f[0] = 0.000117 * y14 + 0.1365 + 0.00002358 * y13 + 0.000001502 * y16 + 0.0321 * y12
        + 0.004324 * y5
        + 0.0001 * c15 / c16
        + 37.48 * y2 / c12
        - 0.0000005843 * y17;

    c[0] = 0.28 / 0.72 * y5 - y4;
    c[1] = x[2] - 1.5 * x[1];
    c[2] = 3496.0 * y2 / c12 - 21.0;
    c[3] = 110.6 + y1 - 62212.0 / c17;
    c[4] = 213.1 - y1;
    c[5] = y1 - 405.23;
    let limits: [(f64, f64, f64); 16] = [
        (y2, 17.505, 1053.6667),
        (y3, 11.275, 35.03),
        (y4, 214.228, 665.585),
        (y5, 7.458, 584.463),
        (y6, 0.961, 265.916),
        (y7, 1.612, 7.046),
        (y8, 0.146, 0.222),
        (y9, 107.99, 273.366),
        (y10, 922.693, 1286.105),
        (y11, 926.832, 1444.046),
        (y12, 18.766, 537.141),
        (y13, 1072.163, 3247.039),
        (y14, 8961.448, 26844.086),
        (y15, 0.063, 0.386),
        (y16, 71084.33, 140000.0),
        (y17, 2802713.0, 12146108.0),
    ];
    for (k, (y, lo, hi)) in limits.iter().enumerate() {
        c[6 + 2 * k] = lo - y;
        c[7 + 2 * k] = y - hi;
    }
}

pub fn g18(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = -0.5
        * (x[0] * x[3] - x[1] * x[2] + x[2] * x[8] - x[4] * x[8] + x[4] * x[7] - x[5] * x[6]);
    let sq = |a: f64, b: f64| a * a + b * b;
    c[0] = sq(x[2], x[3]) - 1.0;
    c[1] = x[8] * x[8] - 1.0;
    c[2] = sq(x[4], x[5]) - 1.0;
    c[3] = sq(x[0], x[1] - x[8]) - 1.0;
    c[4] = sq(x[0] - x[4], x[1] - x[5]) - 1.0;
    c[5] = sq(x[0] - x[6], x[1] - x[7]) - 1.0;
    c[6] = sq(x[2] - x[4], x[3] - x[5]) - 1.0;
    c[7] = sq(x[2] - x[6], x[3] - x[7]) - 1.0;
    c[8] = sq(x[6], x[7] - x[8]) - 1.0;
    c[9] = x[1] * x[2] - x[0] * x[3];
    c[10] = -x[2] * x[8];
    c[11] = x[4] * x[8];
    c[12] = x[5] * x[6] - x[4] * x[7];
}

const G19_A: [[f64; 5]; 10] = [
    [-16.0, 2.0, 0.0, 1.0, 0.0],
    [0.0, -2.0, 0.0, 0.4, 2.0],
    [-3.5, 0.0, 2.0, 0.0, 0.0],
    [0.0, -2.0, 0.0, -4.0, -1.0],
    [0.0, -9.0, -2.0, 1.0, -2.8],
    [2.0, 0.0, -4.0, 0.0, 0.0],
    [-1.0, -1.0, -1.0, -1.0, -1.0],
    [-1.0, -2.0, -3.0, -2.0, -1.0],
    [1.0, 2.0, 3.0, 4.0, 5.0],
    [1.0, 1.0, 1.0, 1.0, 1.0],
];
const G19_B: [f64; 10] = [-40.0, -2.0, -0.25, -4.0, -4.0, -1.0, -40.0, -60.0, 5.0, 1.0];
const G19_C: [[f64; 5]; 5] = [
    [30.0, -20.0, -10.0, 32.0, -10.0],
    [-20.0, 39.0, -6.0, -31.0, 32.0],
    [-10.0, -6.0, 10.0, -6.0, -10.0],
    [32.0, -31.0, -6.0, 39.0, -20.0],
    [-10.0, 32.0, -10.0, -20.0, 30.0],
];
const G19_D: [f64; 5] = [4.0, 8.0, 10.0, 6.0, 2.0];
const G19_E: [f64; 5] = [-15.0, -27.0, -36.0, -18.0, -12.0];

pub fn g19(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    let s = &x[10..15];
    let mut v = 0.0;
    for j in 0..5 {
        for i in 0..5 {
            v += G19_C[i][j] * s[i] * s[j];
        }
        v += 2.0 * G19_D[j] * s[j].powi(3);
    }
    for i in 0..10 {
        v -= G19_B[i] * x[i];
    }
    f[0] = v;
    for j in 0..5 {
        let mut g = -3.0 * G19_D[j] * s[j] * s[j] - G19_E[j];
        for i in 0..5 {
            g -= 2.0 * G19_C[i][j] * s[i];
        }
        for i in 0..10 {
            g += G19_A[i][j] * x[i];
        }
        c[j] = g;
    }
}

pub fn g24(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = -x[0] - x[1];
    c[0] = -2.0 * x[0].powi(4) + 8.0 * x[0].powi(3) - 8.0 * x[0] * x[0] + x[1] - 2.0;
    c[1] = -4.0 * x[0].powi(4) + 32.0 * x[0].powi(3) - 88.0 * x[0] * x[0] + 96.0 * x[0] + x[1]
        - 36.0;
}

// 0.7854 is the published coefficient, not pi/4
#[allow(clippy::approx_constant)]
pub fn sr7(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    f[0] = 0.7854 * x[0] * x[1] * x[1] * (3.3333 * x[2] * x[2] + 14.9334 * x[2] - 43.0934)
        - 1.508 * x[0] * (x[5] * x[5] + x[6] * x[6])
        + 7.4777 * (x[5].powi(3) + x[6].powi(3))
        + 0.7854 * (x[3] * x[5] * x[5] + x[4] * x[6] * x[6]);
    let (x1, x2, x3) = (x[0], x[1], x[2]);
    c[0] = 27.0 / (x1 * x2 * x2 * x3) - 1.0;
    c[1] = 397.5 / (x1 * x2 * x2 * x3 * x3) - 1.0;
    c[2] = 1.93 * x[3].powi(3) / (x2 * x3 * x[5].powi(4)) - 1.0;
    c[3] = 1.93 * x[4].powi(3) / (x2 * x3 * x[6].powi(4)) - 1.0;
    c[4] = ((745.0 * x[3] / (x2 * x3)).powi(2) + 16.9e6).sqrt() / (110.0 * x[5].powi(3)) - 1.0;
    c[5] = ((745.0 * x[4] / (x2 * x3)).powi(2) + 157.5e6).sqrt() / (85.0 * x[6].powi(3)) - 1.0;
    c[6] = x2 * x3 / 40.0 - 1.0;
    c[7] = 5.0 * x2 / x1 - 1.0;
    c[8] = x1 / (12.0 * x2) - 1.0;
    c[9] = (1.5 * x[5] + 1.9) / x[3] - 1.0;
    c[10] = (1.1 * x[6] + 1.9) / x[4] - 1.0;
}

fn pvd4_core(x: &[f64], f: &mut [f64], c: &mut [f64], power: i32) {
    f[0] = 0.6224 * x[0] * x[2] * x[3]
        + 1.7781 * x[1] * x[2] * x[2]
        + 3.1661 * x[0] * x[0] * x[3]
        + 19.84 * x[0] * x[0] * x[2];
    c[0] = -x[0] + 0.0193 * x[2];
    c[1] = -x[1] + 0.00954 * x[2];
    c[2] = plog(-PI * x[2] * x[2] * x[3] - 4.0 / 3.0 * PI * x[2].powi(3) + 1296000.0).powi(power);
}

pub fn pvd4(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    pvd4_core(x, f, c, 1)
}

pub fn modified_pvd4(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    pvd4_core(x, f, c, 7)
}

/// Shear stress of the welded beam under a 6000 lb load.
pub(super) fn weld_shear(x: &[f64]) -> f64 {
    let (h, l, t) = (x[0], x[1], x[2]);
    let tau1 = 6000.0 / (2f64.sqrt() * h * l);
    let m = 6000.0 * (14.0 + l / 2.0);
    let r = (l * l / 4.0 + ((h + t) / 2.0).powi(2)).sqrt();
    let j = 2.0 * (2f64.sqrt() * h * l * (l * l / 12.0 + ((h + t) / 2.0).powi(2)));
    let tau2 = m * r / j;
    (tau1 * tau1 + tau1 * tau2 * l / r + tau2 * tau2).sqrt()
}

pub(super) fn weld_buckling(x: &[f64]) -> f64 {
    64746.022 * (1.0 - 0.0282346 * x[2]) * x[2] * x[3].powi(3)
}

pub fn wb4(x: &[f64], f: &mut [f64], c: &mut [f64]) {
    let (h, l, t, b) = (x[0], x[1], x[2], x[3]);
    f[0] = 1.10471 * h * h * l + 0.04811 * t * b * (14.0 + l);
    c[0] = weld_shear(x) - 13600.0;
    c[1] = 504000.0 / (b * t * t) - 30000.0;
    c[2] = h - b;
    c[3] = 0.10471 * h * h + 0.04811 * t * b * (14.0 + l) - 5.0;
    c[4] = 2.1952 / (t.powi(3) * b) - 0.25;
    c[5] = 6000.0 - weld_buckling(x);
}
