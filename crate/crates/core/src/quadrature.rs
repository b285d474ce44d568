//! Generalized Gauss-Laguerre rules for `∫₀^∞ f(u)·u^α·e^{−u} du`.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::linalg::tridiagonal_ql;

#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLaguerre {
    /// Golub-Welsch nodes polished by Newton steps on `L_n^(α)`.
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n == 0 || !(alpha > -1.0) {
            return Err(Error::Config(format!(
                "Gauss-Laguerre needs n ≥ 1 and α > −1 (got n={n}, α={alpha})"
            )));
        }
        let mut d: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
        let mut e: Vec<f64> = (0..n)
            .map(|k| {
                let j = k as f64 + 1.0;
                if k + 1 < n {
                    (j * (j + alpha)).sqrt()
                } else {
                    0.0
                }
            })
            .collect();
        tridiagonal_ql(&mut d, &mut e, None)?;
        d.sort_by(f64::total_cmp);

        let log_ratio = ln_gamma(n as f64 + alpha) - ln_gamma(n as f64);
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for &x0 in &d {
            let mut x = x0;
            for _ in 0..8 {
                let (p, dp, _) = laguerre(n, alpha, x);
                let step = p / dp;
                x -= step;
                if step.abs() <= 4.0 * f64::EPSILON * x.abs() {
                    break;
                }
            }
            let (_, dp, prev) = laguerre(n, alpha, x);
            nodes.push(x);
            weights.push(-log_ratio.exp() / (dp * n as f64 * prev));
        }
        Ok(GaussLaguerre {
            alpha,
            nodes,
            weights,
        })
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

// (L_n(x), L_n'(x), L_{n-1}(x)) by the three-term recurrence
fn laguerre(n: usize, alpha: f64, x: f64) -> (f64, f64, f64) {
    let (mut p1, mut p2) = (1.0, 0.0);
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jf - 1.0 + alpha - x) * p2 - (jf - 1.0 + alpha) * p3) / jf;
    }
    let nf = n as f64;
    let dp = (nf * p1 - (nf + alpha) * p2) / x;
    (p1, dp, p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    #[test]
    fn moments_are_exact() {
        for &alpha in &[0.0, -0.5, 1.3, 4.5] {
            let rule = GaussLaguerre::new(20, alpha).unwrap();
            for k in 0..=20 {
                let got = rule.integrate(|x| x.powi(k));
                let want = gamma(alpha + k as f64 + 1.0);
                assert!(((got - want) / want).abs() < 1e-12, "α={alpha} k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn reference_values() {
        // n=5, α=1.3 and n=20, α=4.5 tabulated reference points
        let r = GaussLaguerre::new(5, 1.3).unwrap();
        assert!((r.nodes[4] - 14.7354).abs() / 14.7354 < 1e-3);
        assert!((r.weights[4] - 0.000100544).abs() / 0.000100544 < 1e-3);
        let r = GaussLaguerre::new(20, 4.5).unwrap();
        assert!((r.nodes[19] - 74.7087).abs() / 74.7087 < 1e-3);
        assert!((r.weights[19] - 1.29619e-23).abs() / 1.29619e-23 < 1e-3);
    }

    #[test]
    fn sixty_four_nodes() {
        let rule = GaussLaguerre::new(64, -0.5).unwrap();
        assert!(rule.weights.iter().all(|w| w.is_finite() && *w >= 0.0));
        let total: f64 = rule.weights.iter().sum();
        assert!((total / std::f64::consts::PI.sqrt() - 1.0).abs() < 1e-12, "{total}");
        let m = rule.integrate(|x| x.powf(7.5));
        assert!((m / gamma(8.0) - 1.0).abs() < 1e-12, "{}", m / gamma(8.0) - 1.0);
    }

    #[test]
    fn invalid_parameters() {
        assert!(GaussLaguerre::new(0, 0.0).is_err());
        assert!(GaussLaguerre::new(4, -1.0).is_err());
    }
}
