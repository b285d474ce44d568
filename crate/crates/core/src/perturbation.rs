//! Rayleigh-Schrödinger coefficients for eigenvalue branches of
//! `Q(g) = P·H₀ + g·(iPW)` around nondegenerate eigenvalues of `P·H₀`.
//!
//! The recursion runs on the truncated matrices with intermediate
//! normalization `⟨ψ₀, ψ_s⟩ = 0`. `P·H₀` is diagonal, so the reduced
//! resolvent is a diagonal scaling.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::basis::{degeneracy, ph0_energy, BasisTruncation, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, inner};
use crate::operators::Discretization;
use crate::potential::PolynomialPotential;

/// Coefficients `μ₀…μ_N` of a formal power series in `g`.
#[derive(Debug, Clone, Serialize)]
pub struct PowerSeries {
    pub level: Option<MultiIndex>,
    pub coefficients: Vec<f64>,
    /// `|μ_s(L) − μ_s(L−2)|` per coefficient (zeros for synthetic series).
    pub stability: Vec<f64>,
    pub truncation: Option<BasisTruncation>,
    /// Largest `|Im μ_s| / max(|μ_s|, tiny)` seen in the recursion.
    pub max_imaginary_ratio: f64,
}

impl PowerSeries {
    /// A series with no provenance, e.g. a closed-form test series.
    pub fn from_coefficients(coefficients: Vec<f64>) -> Self {
        let n = coefficients.len();
        PowerSeries {
            level: None,
            coefficients,
            stability: vec![0.0; n],
            truncation: None,
            max_imaginary_ratio: 0.0,
        }
    }

    /// Highest order `N`.
    pub fn order(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn partial_sum(&self, g: f64, upto: usize) -> f64 {
        self.coefficients
            .iter()
            .take(upto + 1)
            .rev()
            .fold(0.0, |acc, c| acc * g + c)
    }

    /// CSV with header `s,mu_s,stability_estimate`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "s,mu_s,stability_estimate")?;
        for (s, (c, e)) in self.coefficients.iter().zip(&self.stability).enumerate() {
            writeln!(out, "{s},{c},{e}")?;
        }
        Ok(())
    }
}

/// Smallest cutoff for which every state reached by `order` applications of
/// `W` stays inside the basis, plus a margin of 2.
pub fn required_cutoff(level: &MultiIndex, order: usize, potential: &PolynomialPotential) -> usize {
    level.principal() as usize + order * potential.degree() as usize + 2
}

pub fn rs_coefficients(
    t: &BasisTruncation,
    potential: &PolynomialPotential,
    level: &MultiIndex,
    order: usize,
) -> Result<PowerSeries> {
    if level.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: level.dim(),
        });
    }
    if order == 0 {
        return Err(Error::InsufficientOrders {
            required: 1,
            available: 0,
        });
    }
    let mult = degeneracy(level.principal(), t.dim());
    if mult > 1 {
        return Err(Error::DegenerateLevel {
            level: level.to_string(),
            multiplicity: mult,
        });
    }
    let required = required_cutoff(level, order, potential);
    if t.cutoff() < required {
        return Err(Error::TruncationTooSmall {
            cutoff: t.cutoff(),
            required,
        });
    }
    let (main, imag) = recursion(&Discretization::new(t, potential)?, level, order)?;
    let (coarse, _) = recursion(&Discretization::new(&t.with_cutoff(t.cutoff() - 2), potential)?, level, order)?;
    let stability = main.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).collect();
    Ok(PowerSeries {
        level: Some(level.clone()),
        coefficients: main,
        stability,
        truncation: Some(*t),
        max_imaginary_ratio: imag,
    })
}

fn recursion(disc: &Discretization, level: &MultiIndex, order: usize) -> Result<(Vec<f64>, f64)> {
    let n = disc.size();
    let d = disc.basis().dim();
    let idx = disc
        .states()
        .iter()
        .position(|m| m == level)
        .ok_or_else(|| Error::Config(format!("level {level} is outside the basis")))?;
    let e0 = ph0_energy(level, d);
    let unperturbed: Vec<f64> = disc.states().iter().map(|m| ph0_energy(m, d)).collect();
    let parity = disc.parity_diagonal();
    let w = disc.w_entries();

    // V = i·P·W
    let apply_v = |psi: &[Complex64]| -> Vec<Complex64> {
        (0..n)
            .map(|i| {
                let row = &w[i * n..(i + 1) * n];
                let s: Complex64 = row.iter().zip(psi).map(|(a, b)| b * *a).sum();
                Complex64::new(0.0, parity[i]) * s
            })
            .collect()
    };

    let mut psi0 = vec![Complex64::new(0.0, 0.0); n];
    psi0[idx] = Complex64::new(1.0, 0.0);
    let mut psis = vec![psi0];
    let mut mus = vec![Complex64::new(e0, 0.0)];
    let mut max_imag: f64 = 0.0;
    for s in 1..=order {
        let v_prev = apply_v(&psis[s - 1]);
        // ⟨ψ₀, x⟩ in the bra-ket sense is inner(x, ψ₀)
        let mut mu = inner(&v_prev, &psis[0]);
        for j in 1..s {
            mu -= mus[j] * inner(&psis[s - j], &psis[0]);
        }
        max_imag = max_imag.max(mu.im.abs() / mu.re.abs().max(f64::MIN_POSITIVE));
        mus.push(mu);
        // (Q₀ − e₀)ψ_s = Σ_{j=1..s} μ_j ψ_{s−j} − Vψ_{s−1}, projected off ψ₀
        let mut next = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            if i == idx {
                continue;
            }
            let mut rhs = -v_prev[i];
            for j in 1..=s {
                rhs += mus[j] * psis[s - j][i];
            }
            next[i] = rhs / (unperturbed[i] - e0);
        }
        psis.push(next);
    }
    // μ₁ for odd W vanishes identically; report the exact real parts
    Ok((mus.iter().map(|z| z.re).collect(), max_imag))
}

/// Eigenvalue of `Q(g)` on the branch continuing `level`: the eigenpair
/// whose eigenvector has the largest weight on that basis state.
pub fn branch_eigenvalue(disc: &Discretization, level: &MultiIndex, g: f64) -> Result<f64> {
    let idx = disc
        .states()
        .iter()
        .position(|m| m == level)
        .ok_or_else(|| Error::Config(format!("level {level} is outside the basis")))?;
    let dec = eig_hermitian(&disc.q_real(g))?;
    let vecs = dec.vectors.as_ref().expect("hermitian path returns vectors");
    let k = (0..dec.values.len())
        .max_by(|&a, &b| vecs[(idx, a)].norm().total_cmp(&vecs[(idx, b)].norm()))
        .expect("nonempty basis");
    Ok(dec.values[k].re)
}

/// Fitted `|μ_s| ≈ A·C^s·Γ(q·s)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GrowthFit {
    pub a: f64,
    pub c: f64,
    pub q_fit: f64,
    pub residual: f64,
    pub orders_used: usize,
}

const Q_MAX: f64 = 4.0;

/// Least-squares fit of `log|μ_s|` against `log A + s·log C + log Γ(q·s)`.
/// Vanishing coefficients (odd orders of an even branch) are skipped; `q = 0`
/// stands for the purely geometric model.
pub fn coefficient_growth_fit(series: &PowerSeries) -> Result<GrowthFit> {
    let n = series.order();
    if n < 8 {
        return Err(Error::InsufficientOrders {
            required: 8,
            available: n,
        });
    }
    let mu = &series.coefficients;
    let points: Vec<(f64, f64)> = (1..=n)
        .filter(|&s| {
            let neighbor = mu[s - 1].abs().max(mu.get(s + 1).map_or(0.0, |v| v.abs()));
            let m = mu[s].abs();
            m > 0.0 && m > series.stability[s] && m > 1e-10 * neighbor
        })
        .map(|s| (s as f64, mu[s].abs().ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::InsufficientOrders {
            required: 3,
            available: points.len(),
        });
    }

    let fit_at = |q: f64| -> (f64, f64, f64) {
        let ys: Vec<f64> = points
            .iter()
            .map(|&(s, y)| if q == 0.0 { y } else { y - ln_gamma(q * s) })
            .collect();
        linear_fit(&points.iter().map(|p| p.0).collect::<Vec<_>>(), &ys)
    };

    let mut best_q = 0.0;
    let mut best = fit_at(0.0);
    let steps = (Q_MAX / 0.01) as usize;
    for i in 1..=steps {
        let q = i as f64 * 0.01;
        let f = fit_at(q);
        if f.2 < best.2 {
            best = f;
            best_q = q;
        }
    }
    if best_q > 0.0 {
        // golden-section refinement inside the bracketing grid cell
        let (mut lo, mut hi) = ((best_q - 0.01).max(1e-6), (best_q + 0.01).min(Q_MAX));
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..60 {
            let x1 = hi - phi * (hi - lo);
            let x2 = lo + phi * (hi - lo);
            if fit_at(x1).2 < fit_at(x2).2 {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        let q = 0.5 * (lo + hi);
        let f = fit_at(q);
        if f.2 <= best.2 {
            best = f;
            best_q = q;
        }
    }
    Ok(GrowthFit {
        a: best.0.exp(),
        c: best.1.exp(),
        q_fit: best_q,
        residual: best.2,
        orders_used: points.len(),
    })
}

// least squares y ≈ a + b·x; returns (a, b, sum of squared residuals)
fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let ssr = x.iter().zip(y).map(|(xi, yi)| (yi - a - b * xi).powi(2)).sum();
    (a, b, ssr)
}
