//! Borel-Leroy summation of order `q`.
//!
//! The transform is `b_s = μ_s / Γ(q(s+1))`. Its sum `μ_B` is continued along
//! the positive axis by a Padé approximant and the series value is rebuilt
//! from
//!
//! ```text
//! μ(g) = ∫₀^∞ μ_B(g·u^q) · u^(q−1) · e^(−u) du
//!      = (1/q) ∫₀^∞ μ_B(g·t) · e^(−t^(1/q)) dt        (t = u^q)
//! ```
//!
//! whose moments `Γ(qs + q)` cancel the transform exactly. The `u` form is
//! integrated with a generalized Gauss-Laguerre rule of weight `u^(q−1)e^(−u)`.

use num_complex::Complex64;
use serde::Serialize;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::linalg::{general_eigenvalues, CMatrix};
use crate::perturbation::PowerSeries;
use crate::quadrature::GaussLaguerre;

pub const DEFAULT_NODES: usize = 64;

/// Relative distance below which a pole counts as sitting on the ray.
pub const POLE_RAY_TOLERANCE: f64 = 1e-3;

/// `b_s = μ_s / Γ(q(s+1))` for every available coefficient.
pub fn borel_transform(series: &PowerSeries, q: f64) -> Vec<f64> {
    series
        .coefficients
        .iter()
        .enumerate()
        .map(|(s, &mu)| {
            let x = q * (s as f64 + 1.0);
            if x < 170.0 {
                mu / gamma_exact_integers(x)
            } else if mu == 0.0 {
                0.0
            } else {
                mu.signum() * (mu.abs().ln() - ln_gamma(x)).exp()
            }
        })
        .collect()
}

/// `Γ(x)`, with exactly rounded factorials at positive integers.
pub fn gamma_exact_integers(x: f64) -> f64 {
    if x.fract() == 0.0 && x >= 1.0 && x <= 171.0 {
        (2..x as u32).fold(1.0, |acc, k| acc * k as f64)
    } else {
        gamma(x)
    }
}

/// Rational approximant `P(t)/Q(t)` with `Q(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pade {
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
    /// True when the requested degrees were singular and lower ones were used.
    pub fallback: bool,
}

impl Pade {
    pub fn degrees(&self) -> (usize, usize) {
        (self.numerator.len() - 1, self.denominator.len() - 1)
    }

    pub fn eval(&self, t: f64) -> f64 {
        horner(&self.numerator, t) / horner(&self.denominator, t)
    }

    pub fn eval_complex(&self, t: Complex64) -> Complex64 {
        let h = |c: &[f64]| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * t + a);
        h(&self.numerator) / h(&self.denominator)
    }

    /// Roots of the denominator, via companion-matrix eigenvalues.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        let mut den = self.denominator.clone();
        while den.len() > 1 && *den.last().unwrap() == 0.0 {
            den.pop();
        }
        let m = den.len() - 1;
        if m == 0 {
            return Ok(Vec::new());
        }
        let lead = den[m];
        let companion = CMatrix::from_fn(m, m, |i, j| {
            if i == 0 {
                Complex64::new(-den[m - 1 - j] / lead, 0.0)
            } else if i == j + 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let mut roots = general_eigenvalues(&companion)?;
        roots.sort_by(crate::linalg::canonical_cmp);
        Ok(roots)
    }
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

/// `[M/M′]` Padé approximant matching `b₀…b_{M+M′}`. A near-singular linear
/// system falls back to `[M−1/M′−1]` (repeatedly) and sets `fallback`.
pub fn pade_continue(b: &[f64], degrees: (usize, usize)) -> Result<Pade> {
    let (m, mp) = degrees;
    if m + mp + 1 > b.len() {
        return Err(Error::InsufficientOrders {
            required: m + mp + 1,
            available: b.len(),
        });
    }
    let (mut num, mut den) = (m, mp);
    loop {
        match pade_exact(b, num, den) {
            Some((p, q)) => {
                return Ok(Pade {
                    numerator: p,
                    denominator: q,
                    fallback: (num, den) != (m, mp),
                })
            }
            None if num == 0 || den == 0 => {
                return Err(Error::SingularPadeTable {
                    numerator: num,
                    denominator: den,
                })
            }
            None => {
                num -= 1;
                den -= 1;
            }
        }
    }
}

const PIVOT_RATIO_LIMIT: f64 = 1e-13;

fn pade_exact(b: &[f64], m: usize, mp: usize) -> Option<(Vec<f64>, Vec<f64>)> {
    let coef = |k: isize| if k < 0 { 0.0 } else { b[k as usize] };
    // Σ_{j=1..M′} q_j b_{k−j} = −b_k for k = M+1..M+M′
    let mut a = vec![vec![0.0; mp + 1]; mp];
    for r in 0..mp {
        let k = (m + 1 + r) as isize;
        for j in 1..=mp {
            a[r][j - 1] = coef(k - j as isize);
        }
        a[r][mp] = -coef(k);
    }
    let mut q = vec![1.0; mp + 1];
    if mp > 0 {
        let sol = solve_dense(a)?;
        q[1..].copy_from_slice(&sol);
    }
    let p = (0..=m)
        .map(|k| (0..=k.min(mp)).map(|j| q[j] * coef(k as isize - j as isize)).sum())
        .collect();
    Some((p, q))
}

// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_dense(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    let scale = a
        .iter()
        .flat_map(|r| r[..n].iter())
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k].abs() <= PIVOT_RATIO_LIMIT * scale {
            return None;
        }
        a.swap(p, k);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..=n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut v = a[k][n];
        for j in k + 1..n {
            v -= a[k][j] * x[j];
        }
        x[k] = v / a[k][k];
    }
    Some(x)
}

#[derive(Debug, Clone, Serialize)]
pub struct BorelResult {
    pub g: f64,
    pub q: f64,
    pub value: f64,
    pub pade_degrees: (usize, usize),
    pub pade_fallback: bool,
    pub quadrature_nodes: usize,
    /// Poles of the Padé approximant in the Borel variable, as `[re, im]`.
    pub continuation_poles: Vec<[f64; 2]>,
    /// Set when a pole sits within `POLE_RAY_TOLERANCE` relative distance of
    /// the integration ray: summability may break down there.
    pub pole_warning: bool,
}

/// Relative distance of `p` from the ray `{t ≥ 0}`.
pub fn relative_ray_distance(p: Complex64) -> f64 {
    let r = p.norm();
    if r == 0.0 {
        return 0.0;
    }
    if p.re >= 0.0 {
        p.im.abs() / r
    } else {
        1.0
    }
}

pub fn default_pade_degrees(series: &PowerSeries) -> (usize, usize) {
    let half = series.order() / 2;
    (half, half)
}

pub fn borel_sum(
    series: &PowerSeries,
    g: f64,
    q: f64,
    quadrature_nodes: usize,
    pade_degrees: Option<(usize, usize)>,
) -> Result<BorelResult> {
    if !(q > 0.0) {
        return Err(Error::Config(format!("Borel order q must be positive (got {q})")));
    }
    if !(g >= 0.0) {
        return Err(Error::Config(format!("coupling must be non-negative (got {g})")));
    }
    if series.coefficients.len() < 2 {
        return Err(Error::InsufficientOrders {
            required: 2,
            available: series.coefficients.len(),
        });
    }
    let degrees = pade_degrees.unwrap_or_else(|| default_pade_degrees(series));
    let b = borel_transform(series, q);
    let pade = pade_continue(&b, degrees)?;
    let poles = pade.poles()?;
    let rule = GaussLaguerre::new(quadrature_nodes, q - 1.0)?;
    let value = rule.integrate(|u| pade.eval(g * u.powf(q)));
    let pole_warning = g > 0.0 && poles.iter().any(|&p| relative_ray_distance(p) <= POLE_RAY_TOLERANCE);
    Ok(BorelResult {
        g,
        q,
        value,
        pade_degrees: pade.degrees(),
        pade_fallback: pade.fallback,
        quadrature_nodes,
        continuation_poles: poles.iter().map(|p| [p.re, p.im]).collect(),
        pole_warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(c: Vec<f64>) -> PowerSeries {
        PowerSeries::from_coefficients(c)
    }

    fn factorial_alternating(n: usize) -> PowerSeries {
        series((0..=n).map(|s| gamma(s as f64 + 1.0) * if s % 2 == 0 { 1.0 } else { -1.0 }).collect())
    }

    #[test]
    fn transform_examples() {
        let b = borel_transform(&series(vec![1.0, 0.0, 0.0]), 1.0);
        assert_eq!(b, vec![1.0, 0.0, 0.0]);
        let b = borel_transform(&factorial_alternating(10), 1.0);
        for (s, v) in b.iter().enumerate() {
            let want = if s % 2 == 0 { 1.0 } else { -1.0 };
            assert!((v - want).abs() < 1e-13, "{s}: {v}");
        }
        let b = borel_transform(&series(vec![2.5, 1.0]), 0.5);
        assert!((b[0] - 2.5 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn pade_of_geometric_series() {
        let b: Vec<f64> = (0..6).map(|s| if s % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let p = pade_continue(&b, (1, 1)).unwrap();
        assert!((p.numerator[0] - 1.0).abs() < 1e-15 && p.numerator[1].abs() < 1e-15);
        assert_eq!(p.denominator, vec![1.0, 1.0]);
        let poles = p.poles().unwrap();
        assert_eq!(poles.len(), 1);
        assert!((poles[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((p.eval(0.5) - 1.0 / 1.5).abs() < 1e-15);
    }

    #[test]
    fn pade_reproduces_polynomial() {
        let b = vec![1.0, -2.0, 0.5, 3.0];
        let p = pade_continue(&b, (3, 0)).unwrap();
        assert_eq!(p.numerator, b);
        assert_eq!(p.denominator, vec![1.0]);
        assert!(p.poles().unwrap().is_empty());
    }

    #[test]
    fn singular_table_falls_back() {
        // b = (1, 0, 0, 0, 0): the [2/2] system is identically zero
        let p = pade_continue(&[1.0, 0.0, 0.0, 0.0, 0.0], (2, 2)).unwrap();
        assert!(p.fallback);
        assert_eq!(p.degrees(), (0, 0));
        assert!(pade_continue(&[1.0, 2.0], (2, 2)).is_err());
    }

    #[test]
    fn constant_series_any_order() {
        for &q in &[0.5, 1.0, 1.5, 2.5] {
            let r = borel_sum(&series(vec![3.0, 0.0, 0.0]), 0.7, q, 64, Some((1, 1))).unwrap();
            assert!((r.value - 3.0).abs() < 1e-12, "q={q}: {}", r.value);
        }
    }

    #[test]
    fn truncated_series_reproduced() {
        let mu = vec![1.0, -0.5, 0.25, 2.0, -1.0];
        let g: f64 = 0.3;
        let want: f64 = mu.iter().enumerate().map(|(s, c)| c * g.powi(s as i32)).sum();
        // q·s integral for every s: the rule is exact
        for &q in &[1.0, 2.0, 3.0] {
            let r = borel_sum(&series(mu.clone()), g, q, 64, Some((4, 0))).unwrap();
            assert!((r.value - want).abs() < 1e-12 * want.abs(), "q={q}: {} vs {want}", r.value);
        }
        // even series with q = 1/2 and 3/2 only meets integral q·s
        let even = vec![1.0, 0.0, 0.375, 0.0, -0.767, 0.0, 3.3];
        let want: f64 = even.iter().enumerate().map(|(s, c)| c * g.powi(s as i32)).sum();
        for &q in &[0.5, 1.5] {
            let r = borel_sum(&series(even.clone()), g, q, 64, Some((6, 0))).unwrap();
            assert!((r.value - want).abs() < 1e-12 * want.abs(), "q={q}: {} vs {want}", r.value);
        }
    }

    #[test]
    fn fractional_moments_converge_slowly() {
        // u^{1/2} against u^{-1/2}e^{-u}: algebraic convergence in the node count
        let mu = vec![0.0, 1.0];
        let err = |n| (borel_sum(&series(mu.clone()), 1.0, 0.5, n, Some((1, 0))).unwrap().value - 1.0).abs();
        assert!(err(64) < err(16));
        assert!(err(64) < 5e-3, "{} {}", err(16), err(64));
    }

    #[test]
    fn exact_factorials() {
        assert_eq!(gamma_exact_integers(1.0), 1.0);
        assert_eq!(gamma_exact_integers(2.0), 1.0);
        assert_eq!(gamma_exact_integers(6.0), 120.0);
        assert!((gamma_exact_integers(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn pole_on_ray_sets_warning() {
        // Σ t^s has its pole at t = 1 on the ray
        let r = borel_sum(&series(vec![1.0; 7]), 0.1, 1.0, 32, Some((1, 1))).unwrap();
        assert!(r.pole_warning);
        let ok = borel_sum(&factorial_alternating(6), 0.1, 1.0, 32, Some((1, 1))).unwrap();
        assert!(!ok.pole_warning);
    }

    #[test]
    fn invalid_inputs() {
        let s = series(vec![1.0, 1.0, 1.0]);
        assert!(borel_sum(&s, 0.1, 0.0, 16, None).is_err());
        assert!(borel_sum(&s, -0.1, 1.0, 16, None).is_err());
        assert!(borel_sum(&series(vec![1.0]), 0.1, 1.0, 16, None).is_err());
    }

    #[test]
    fn ray_distance() {
        assert_eq!(relative_ray_distance(Complex64::new(2.0, 0.0)), 0.0);
        assert_eq!(relative_ray_distance(Complex64::new(-1.0, 0.0)), 1.0);
        assert!((relative_ray_distance(Complex64::new(1.0, 1.0)) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }
}
