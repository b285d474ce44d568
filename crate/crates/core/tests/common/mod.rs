//! Independent reference computations used only by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Normalized Hermite functions `h_0(x) … h_n(x)` by the stable three-term
/// recurrence.
pub fn hermite_functions(n: usize, x: f64) -> Vec<f64> {
    let mut h = vec![0.0; n + 1];
    h[0] = PI.powf(-0.25) * (-x * x / 2.0).exp();
    if n >= 1 {
        h[1] = 2f64.sqrt() * x * h[0];
    }
    for k in 2..=n {
        let kf = k as f64;
        h[k] = (2.0 / kf).sqrt() * x * h[k - 1] - ((kf - 1.0) / kf).sqrt() * h[k - 2];
    }
    h
}

/// Physicists' Gauss–Hermite rule (weight `e^{-x²}`), nodes found by Newton
/// iteration on the orthonormal recurrence with asymptotic initial guesses.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let m = (n + 1) / 2;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let pim4 = PI.powf(-0.25);
    let mut z: f64 = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.85575 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64 + 1.0;
                p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// `∫ h_m(x) xᵃ h_n(x) dx` by Gauss–Hermite quadrature.
pub fn position_power_element(m: usize, n: usize, a: u32, nodes: &(Vec<f64>, Vec<f64>)) -> f64 {
    let (xs, ws) = nodes;
    let top = m.max(n);
    xs.iter()
        .zip(ws)
        .map(|(&x, &w)| {
            let h = hermite_functions(top, x);
            // h_m h_n already carry e^{-x²}, so divide out the weight
            w * (x * x).exp() * h[m] * h[n] * x.powi(a as i32)
        })
        .sum()
}

/// Adaptive Simpson quadrature on a finite interval.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn step<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            left + right + diff / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `∫₀^∞ f(u) du` through `u = t/(1−t)`.
pub fn half_line<F: Fn(f64) -> f64>(f: F, tol: f64) -> f64 {
    let g = |t: f64| {
        if t >= 1.0 {
            0.0
        } else {
            let u = t / (1.0 - t);
            f(u) / ((1.0 - t) * (1.0 - t))
        }
    };
    adaptive_simpson(&g, 0.0, 1.0, tol)
}
