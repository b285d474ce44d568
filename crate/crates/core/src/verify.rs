//! Matrix-level checks of the structural and spectral statements about
//! `H(g)`, `P` and `Q(g) = P·H(g)` for real coupling.
//!
//! Two kinds of check exist. Structural ones compare matrices entry by entry
//! and expect an exact zero. Numerical ones compare two independent solver
//! paths against a tolerance scaled by the Frobenius norm of `H`.
//!
//! Conventions: `⟨a, b⟩ = Σ aᵢ·conj(bᵢ)` (linear in the first slot) and
//! `q_k` is the signed eigenvalue of `Q`, so that `H ψ_k = q_k P ψ_k` and the
//! singular values are `|q_k|`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::{
    eig_general, eig_hermitian, eigvec_inverse_iteration, inner, norm,
    normalize, CMatrix, SpectralDecomposition,
};
use crate::operators::{Discretization, OperatorMatrix};

#[derive(Debug, Clone, Serialize)]
pub struct CheckParameters {
    pub dim: usize,
    pub cutoff: usize,
    pub potential: String,
    pub g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Exact matrix identity; tolerance is zero.
    Structural,
    /// Two numerical paths compared within a tolerance.
    Numerical,
}

#[derive(Debug, Clone, Serialize)]
pub struct Detail {
    pub index: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub kind: CheckKind,
    pub parameters: CheckParameters,
    pub measured_discrepancy: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub details: Vec<Detail>,
}

impl VerificationReport {
    fn new(
        name: &str,
        kind: CheckKind,
        disc: &Discretization,
        g: f64,
        measured: f64,
        tolerance: f64,
        details: Vec<Detail>,
    ) -> Self {
        VerificationReport {
            check_name: name.to_string(),
            kind,
            parameters: params(disc, g),
            measured_discrepancy: measured,
            tolerance,
            passed: measured <= tolerance,
            details,
        }
    }
}

fn params(disc: &Discretization, g: f64) -> CheckParameters {
    CheckParameters {
        dim: disc.basis().dim(),
        cutoff: disc.basis().cutoff(),
        potential: disc.potential().to_string(),
        g,
    }
}

fn detail(index: impl Into<String>, value: f64) -> Detail {
    Detail {
        index: index.into(),
        value,
    }
}

/// `max|P·H·P − H†|`, expected exactly zero.
pub fn check_pseudohermiticity(disc: &Discretization, g: f64) -> VerificationReport {
    let h = disc.h_real(g);
    let p = disc.p();
    let php = p.matrix().matmul(h.matrix()).matmul(p.matrix());
    let d = php.sub(&h.matrix().adjoint()).max_abs();
    VerificationReport::new("pseudohermiticity", CheckKind::Structural, disc, g, d, 0.0, vec![])
}

/// `Q = Q†`, `P·H·P = H†`, `Q·Q = H†·H` and `H(g)† = H(−g)`, all exact.
pub fn check_structural_identities(disc: &Discretization, g: f64) -> VerificationReport {
    let h = disc.h_real(g);
    let hm = h.matrix();
    let q = disc.q_real(g);
    let qm = q.matrix();
    let p = disc.p();
    let hh = hm.adjoint().matmul(hm);
    let entries = [
        ("q_minus_q_adjoint", qm.sub(&qm.adjoint()).max_abs()),
        (
            "php_minus_h_adjoint",
            p.matrix().matmul(hm).matmul(p.matrix()).sub(&hm.adjoint()).max_abs(),
        ),
        ("q_squared_minus_hh", qm.matmul(qm).sub(&hh).max_abs()),
        (
            "h_adjoint_minus_h_of_minus_g",
            hm.adjoint().sub(disc.h_real(-g).matrix()).max_abs(),
        ),
    ];
    let worst = entries.iter().map(|e| e.1).fold(0.0, f64::max);
    let details = entries.iter().map(|(n, v)| detail(*n, *v)).collect();
    VerificationReport::new("structural_identities", CheckKind::Structural, disc, g, worst, 0.0, details)
}

/// Sorted `|eig(Q)|` against sorted `√eig(H†H)`; tolerance `1e-10·‖H‖`.
pub fn check_singular_values(disc: &Discretization, g: f64) -> Result<VerificationReport> {
    let h = disc.h_real(g);
    let hh = OperatorMatrix::new(*disc.basis(), h.matrix().adjoint().matmul(h.matrix()));
    let mut from_q: Vec<f64> = eig_hermitian(&disc.q_real(g))?.values.iter().map(|z| z.re.abs()).collect();
    let mut from_hh: Vec<f64> = eig_hermitian(&hh)?
        .values
        .iter()
        .map(|z| z.re.max(0.0).sqrt())
        .collect();
    from_q.sort_by(f64::total_cmp);
    from_hh.sort_by(f64::total_cmp);
    let diffs: Vec<f64> = from_q.iter().zip(&from_hh).map(|(a, b)| (a - b).abs()).collect();
    let worst = diffs.iter().copied().fold(0.0, f64::max);
    let details = diffs.iter().take(10).enumerate().map(|(k, v)| detail(k.to_string(), *v)).collect();
    Ok(VerificationReport::new(
        "singular_values",
        CheckKind::Numerical,
        disc,
        g,
        worst,
        1e-10 * h.matrix().frobenius_norm(),
        details,
    ))
}

/// `Hu = Σ q_k⟨u,ψ_k⟩Pψ_k` for random unit `u`, plus the diagonalization
/// residual `max|⟨Pψ_k, Hψ_l⟩ − q_k δ_kl|`; tolerance `1e-9·‖H‖`.
pub fn check_canonical_expansion(
    disc: &Discretization,
    g: f64,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let h = disc.h_real(g);
    let hm = h.matrix();
    let parity = disc.parity_diagonal();
    let n = disc.size();
    let dec = eig_hermitian(&disc.q_real(g))?;
    let psi = dec.vectors.as_ref().expect("hermitian path returns vectors");
    let q: Vec<f64> = dec.real_values();
    let p_psi = CMatrix::from_fn(n, n, |i, k| psi[(i, k)] * parity[i]);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reconstruction: f64 = 0.0;
    for _ in 0..trials {
        let mut u: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        normalize(&mut u);
        let hu = hm.mul_vec(&u);
        let mut sum = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            // ⟨u, ψ_k⟩ = ψ_k†u
            let c = inner(&u, &psi.column(k)) * q[k];
            for i in 0..n {
                sum[i] += c * p_psi[(i, k)];
            }
        }
        let r: Vec<Complex64> = hu.iter().zip(&sum).map(|(a, b)| a - b).collect();
        reconstruction = reconstruction.max(norm(&r));
    }

    // D = (Pψ)†·H·ψ
    let d = p_psi.adjoint().matmul(&hm.matmul(psi));
    let mut diagonalization: f64 = 0.0;
    for k in 0..n {
        for l in 0..n {
            let want = if k == l { q[k] } else { 0.0 };
            diagonalization = diagonalization.max((d[(k, l)] - want).norm());
        }
    }
    // ψ and Pψ are each orthonormal but not biorthogonal to one another
    let overlap = psi.adjoint().matmul(&p_psi);
    let mut cross: f64 = 0.0;
    for k in 0..n {
        for l in 0..n {
            if k != l {
                cross = cross.max(overlap[(k, l)].norm());
            }
        }
    }
    let details = vec![
        detail("reconstruction", reconstruction),
        detail("diagonalization", diagonalization),
        detail("max_offdiagonal_psi_p_psi_overlap", cross),
    ];
    Ok(VerificationReport::new(
        "canonical_expansion",
        CheckKind::Numerical,
        disc,
        g,
        reconstruction.max(diagonalization),
        1e-9 * hm.frobenius_norm(),
        details,
    ))
}

/// Q eigenpairs ordered by increasing `|q|` (ties by value).
fn q_by_modulus(dec: &SpectralDecomposition) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dec.values.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (dec.values[a].re, dec.values[b].re);
        x.abs().total_cmp(&y.abs()).then(x.total_cmp(&y))
    });
    order
}

/// Eigenvalues ordered by increasing modulus, ties broken by phase angle.
pub fn by_modulus(values: &[Complex64]) -> Vec<Complex64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
    v
}

/// `|λ_l⟨φ_l,Pψ_k⟩ − q_k⟨φ_l,ψ_k⟩| ≤ 1e-7·(|λ_l|+|q_k|)` over the lowest
/// `window` eigenvalues of `H` and of `|Q|`. Eigenvalues of `H` closer than
/// `1e-8·‖H‖` to another are skipped, not failed.
pub fn check_eigen_relation(disc: &Discretization, g: f64, window: usize) -> Result<VerificationReport> {
    let h = disc.h_real(g);
    let scale = h.matrix().frobenius_norm();
    let parity = disc.parity_diagonal();
    let lambdas = by_modulus(&eig_general(&h)?.values);
    let qdec = eig_hermitian(&disc.q_real(g))?;
    let qvecs = qdec.vectors.as_ref().expect("vectors");
    let qorder = q_by_modulus(&qdec);

    let mut details = Vec::new();
    let mut worst: f64 = 0.0;
    let mut skipped = 0usize;
    for (l, &lambda) in lambdas.iter().take(window).enumerate() {
        let gap = lambdas
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != l)
            .map(|(_, z)| (z - lambda).norm())
            .fold(f64::INFINITY, f64::min);
        if gap <= 1e-8 * scale {
            skipped += 1;
            details.push(detail(format!("l={l} skipped_degenerate"), gap));
            continue;
        }
        let (phi, lam, _) = eigvec_inverse_iteration(&h, lambda)?;
        for (k, &qi) in qorder.iter().take(window).enumerate() {
            let psi = qvecs.column(qi);
            let p_psi: Vec<Complex64> = psi.iter().zip(parity).map(|(a, p)| a * *p).collect();
            let mu = qdec.values[qi].re;
            let lhs = lam * inner(&phi, &p_psi);
            let rhs = inner(&phi, &psi) * mu;
            let rel = (lhs - rhs).norm() / (lam.norm() + mu.abs());
            worst = worst.max(rel);
            if k == l {
                details.push(detail(format!("l={l},k={k}"), rel));
            }
        }
    }
    details.push(detail("skipped", skipped as f64));
    Ok(VerificationReport::new("eigen_relation", CheckKind::Numerical, disc, g, worst, 1e-7, details))
}

/// Slacks of the inequalities `Σ_{j≤k}|λ_j| ≤ Σ_{j≤k} μ_j` and
/// `∏_{j≤k}|λ_j| ≤ ∏_{j≤k} μ_j` for both spectra ordered by increasing modulus.
#[derive(Debug, Clone, Serialize)]
pub struct WeylSlacks {
    pub k: usize,
    /// `(Σμ − Σ|λ|) / max(Σμ, Σ|λ|)`
    pub sum_slack: f64,
    /// `(∏μ − ∏|λ|) / max(∏μ, ∏|λ|)`
    pub product_slack: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeylOrder {
    /// Both spectra by increasing modulus, `k` smallest of each.
    IncreasingModulus,
    /// Both spectra by decreasing modulus, `k` largest of each.
    DecreasingModulus,
}

pub fn weyl_slacks(
    eigenvalues: &[Complex64],
    singular_values: &[f64],
    k_max: usize,
    order: WeylOrder,
) -> Vec<WeylSlacks> {
    let mut lam: Vec<f64> = eigenvalues.iter().map(|z| z.norm()).collect();
    let mut mu: Vec<f64> = singular_values.to_vec();
    lam.sort_by(f64::total_cmp);
    mu.sort_by(f64::total_cmp);
    if order == WeylOrder::DecreasingModulus {
        lam.reverse();
        mu.reverse();
    }
    let rel = |a: f64, b: f64| {
        let s = a.abs().max(b.abs());
        if s == 0.0 {
            0.0
        } else {
            (a - b) / s
        }
    };
    let (mut sl, mut sm, mut ll, mut lm) = (0.0, 0.0, 0.0, 0.0);
    (0..k_max.min(lam.len()).min(mu.len()))
        .map(|k| {
            sl += lam[k];
            sm += mu[k];
            ll += lam[k].ln();
            lm += mu[k].ln();
            // products compared in log space: (∏μ − ∏λ)/max = ±(1 − e^{−|Δ|})
            let d = lm - ll;
            let product_slack = if d >= 0.0 { -(-d).exp_m1() } else { d.exp_m1() };
            WeylSlacks {
                k: k + 1,
                sum_slack: rel(sm, sl),
                product_slack,
            }
        })
        .collect()
}

fn weyl_report(name: &str, disc: &Discretization, g: f64, k_max: usize, order: WeylOrder) -> Result<VerificationReport> {
    let h = disc.h_real(g);
    let lambdas = eig_general(&h)?.values;
    let mu: Vec<f64> = eig_hermitian(&disc.q_real(g))?.values.iter().map(|z| z.re.abs()).collect();
    let slacks = weyl_slacks(&lambdas, &mu, k_max, order);
    let worst = slacks
        .iter()
        .map(|s| s.sum_slack.min(s.product_slack))
        .fold(f64::INFINITY, f64::min);
    let mut details = Vec::new();
    for s in &slacks {
        details.push(detail(format!("k={} sum", s.k), s.sum_slack));
        details.push(detail(format!("k={} product", s.k), s.product_slack));
    }
    Ok(VerificationReport::new(
        name,
        CheckKind::Numerical,
        disc,
        g,
        (-worst).max(0.0),
        1e-8,
        details,
    ))
}

/// Weyl inequalities with eigenvalues and singular values both ordered by
/// increasing modulus, as `Σ|λ_j| ≤ Σμ_j` and `∏|λ_j| ≤ ∏μ_j` for `k ≤ k_max`.
/// Measured discrepancy is the largest negative relative slack.
///
/// For a non-normal matrix this orientation is violated already at `k = 1`,
/// since `μ_min ≤ |λ_min|` always; see [`check_weyl_classical`].
pub fn check_weyl(disc: &Discretization, g: f64, k_max: usize) -> Result<VerificationReport> {
    weyl_report("weyl", disc, g, k_max, WeylOrder::IncreasingModulus)
}

/// Weyl's inequalities in the orientation that holds for every matrix:
/// the `k` largest `|λ|` against the `k` largest singular values.
pub fn check_weyl_classical(disc: &Discretization, g: f64, k_max: usize) -> Result<VerificationReport> {
    weyl_report("weyl_classical", disc, g, k_max, WeylOrder::DecreasingModulus)
}

fn multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `spec Q(g) = spec Q(−g)` and `spec Q′(g) = spec Q(g)` as multisets;
/// tolerance `1e-10·‖H‖`.
pub fn check_spectral_symmetries(disc: &Discretization, g: f64) -> Result<VerificationReport> {
    let q = eig_hermitian(&disc.q_real(g))?.real_values();
    let qm = eig_hermitian(&disc.q_real(-g))?.real_values();
    let qp = eig_hermitian(&disc.q_prime(Complex64::new(g, 0.0)))?.real_values();
    let a = multiset_distance(&q, &qm);
    let b = multiset_distance(&q, &qp);
    Ok(VerificationReport::new(
        "spectral_symmetries",
        CheckKind::Numerical,
        disc,
        g,
        a.max(b),
        1e-10 * disc.h_real(g).matrix().frobenius_norm(),
        vec![detail("q_vs_q_minus_g", a), detail("q_vs_q_prime", b)],
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Lowest singular values `|q_k|`.
    SingularValues,
    /// Moduli of the lowest-modulus eigenvalues of `H`.
    EigenvalueModuli,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub cutoff: usize,
    pub values: Vec<f64>,
    /// Max change against the previous row.
    pub change: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub quantity: Quantity,
    pub g: f64,
    pub rows: Vec<ConvergenceRow>,
    /// First cutoff whose change falls below `1e-8` relative.
    pub converged_at: Option<usize>,
    /// Successive changes grew somewhere before convergence.
    pub non_monotone: bool,
}

pub fn lowest_singular_values(disc: &Discretization, g: f64, count: usize) -> Result<Vec<f64>> {
    let mut mu: Vec<f64> = eig_hermitian(&disc.q_real(g))?.values.iter().map(|z| z.re.abs()).collect();
    mu.sort_by(f64::total_cmp);
    mu.truncate(count);
    Ok(mu)
}

pub fn convergence_study(
    discretizations: &[Discretization],
    g: f64,
    quantity: Quantity,
    count: usize,
) -> Result<ConvergenceTable> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(discretizations.len());
    for disc in discretizations {
        let values = match quantity {
            Quantity::SingularValues => lowest_singular_values(disc, g, count)?,
            Quantity::EigenvalueModuli => {
                let mut v: Vec<f64> = eig_general(&disc.h_real(g))?.values.iter().map(|z| z.norm()).collect();
                v.sort_by(f64::total_cmp);
                v.truncate(count);
                v
            }
        };
        let change = rows.last().map(|prev| {
            prev.values
                .iter()
                .zip(&values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        });
        rows.push(ConvergenceRow {
            cutoff: disc.basis().cutoff(),
            values,
            change,
        });
    }
    let mut converged_at = None;
    let mut non_monotone = false;
    let mut prev_change: Option<f64> = None;
    for row in &rows {
        let Some(c) = row.change else { continue };
        let scale = row.values.iter().map(|v| v.abs()).fold(1.0, f64::max);
        if c <= 1e-8 * scale {
            converged_at.get_or_insert(row.cutoff);
        } else if converged_at.is_none() && prev_change.is_some_and(|p| c > p) {
            non_monotone = true;
        }
        prev_change = Some(c);
    }
    Ok(ConvergenceTable {
        quantity,
        g,
        rows,
        converged_at,
        non_monotone,
    })
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    pub window: usize,
    pub k_max: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trials: 20,
            seed: 0x5eed,
            window: 8,
            k_max: 10,
        }
    }
}

pub const CHECK_NAMES: &[&str] = &[
    "structural_identities",
    "pseudohermiticity",
    "singular_values",
    "canonical_expansion",
    "eigen_relation",
    "weyl",
    "weyl_classical",
    "spectral_symmetries",
];

pub fn run_check(name: &str, disc: &Discretization, g: f64, opts: &VerifyOptions) -> Result<VerificationReport> {
    match name {
        "structural_identities" => Ok(check_structural_identities(disc, g)),
        "pseudohermiticity" => Ok(check_pseudohermiticity(disc, g)),
        "singular_values" => check_singular_values(disc, g),
        "canonical_expansion" => check_canonical_expansion(disc, g, opts.trials, opts.seed),
        "eigen_relation" => check_eigen_relation(disc, g, opts.window),
        "weyl" => check_weyl(disc, g, opts.k_max),
        "weyl_classical" => check_weyl_classical(disc, g, opts.k_max),
        "spectral_symmetries" => check_spectral_symmetries(disc, g),
        other => Err(crate::Error::Config(format!(
            "unknown check '{other}' (known: {})",
            CHECK_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisTruncation;
    use crate::potential::parse_potential;

    fn disc(d: usize, l: usize, w: &str) -> Discretization {
        Discretization::new(&BasisTruncation::new(d, l).unwrap(), &parse_potential(w, d).unwrap()).unwrap()
    }

    #[test]
    fn structural_checks_are_exact() {
        for (d, l, w, g) in [(1, 12, "x1^3", 0.3), (2, 6, "x1^2*x2", 0.1), (1, 8, "x1^5", 0.0)] {
            let dd = disc(d, l, w);
            let r = check_pseudohermiticity(&dd, g);
            assert_eq!(r.measured_discrepancy, 0.0);
            assert!(r.passed);
            assert_eq!(check_structural_identities(&dd, g).measured_discrepancy, 0.0);
        }
    }

    #[test]
    fn singular_values_at_zero_coupling() {
        let dd = disc(1, 3, "x1^3");
        let r = check_singular_values(&dd, 0.0).unwrap();
        assert_eq!(r.measured_discrepancy, 0.0);
        assert_eq!(lowest_singular_values(&dd, 0.0, 4).unwrap(), vec![1.0, 3.0, 5.0, 7.0]);
    }

    #[test]
    fn canonical_expansion_and_witness() {
        let dd = disc(1, 3, "x1^3");
        let r = check_canonical_expansion(&dd, 0.0, 5, 1).unwrap();
        assert!(r.measured_discrepancy <= 1e-12, "{}", r.measured_discrepancy);
        let dd = disc(1, 30, "x1^3");
        let r = check_canonical_expansion(&dd, 0.3, 5, 1).unwrap();
        assert!(r.passed, "{r:?}");
        let cross = r.details.iter().find(|d| d.index.starts_with("max_offdiagonal")).unwrap();
        assert!(cross.value > 1e-3, "ψ and Pψ should not be biorthogonal");
    }

    #[test]
    fn eigen_relation_at_zero_and_small_coupling() {
        let r = check_eigen_relation(&disc(1, 12, "x1^3"), 0.0, 6).unwrap();
        assert!(r.measured_discrepancy <= 1e-12, "{r:?}");
        let r = check_eigen_relation(&disc(1, 30, "x1^3"), 0.2, 6).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn eigen_relation_with_complex_eigenvalues() {
        // strong coupling on a small basis produces conjugate pairs
        let dd = disc(1, 10, "x1^3");
        let lams = eig_general(&dd.h_real(2.0)).unwrap().values;
        assert!(lams.iter().any(|z| z.im.abs() > 1e-6));
        let r = check_eigen_relation(&dd, 2.0, 6).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn weyl_orientations() {
        let dd = disc(1, 30, "x1^3");
        let at_zero = check_weyl(&dd, 0.0, 10).unwrap();
        assert!(at_zero.details.iter().all(|d| d.value.abs() <= 1e-12));
        let classical = check_weyl_classical(&dd, 0.4, 10).unwrap();
        assert!(classical.passed, "{classical:?}");
        // smallest singular value never exceeds the smallest |λ|
        let stated = check_weyl(&dd, 0.4, 10).unwrap();
        assert!(!stated.passed);
        assert!(stated.details[0].value < 0.0);
    }

    #[test]
    fn weyl_slacks_on_normal_matrix() {
        let lam = [Complex64::new(3.0, 0.0), Complex64::new(0.0, -1.0)];
        let s = weyl_slacks(&lam, &[1.0, 3.0], 2, WeylOrder::IncreasingModulus);
        assert!(s.iter().all(|x| x.sum_slack == 0.0 && x.product_slack == 0.0));
    }

    #[test]
    fn convergence_table() {
        let w = parse_potential("x1^3", 1).unwrap();
        let discs: Vec<Discretization> = [10, 20, 30, 40]
            .iter()
            .map(|&l| Discretization::new(&BasisTruncation::new(1, l).unwrap(), &w).unwrap())
            .collect();
        let t = convergence_study(&discs, 0.0, Quantity::SingularValues, 3).unwrap();
        assert!(t.rows.iter().skip(1).all(|r| r.change == Some(0.0)));
        assert_eq!(t.converged_at, Some(20));
        let t = convergence_study(&discs, 0.2, Quantity::SingularValues, 3).unwrap();
        assert!(t.converged_at.is_some(), "{t:?}");
        let t = convergence_study(&discs, 0.2, Quantity::EigenvalueModuli, 3).unwrap();
        assert_eq!(t.rows.len(), 4);
    }

    #[test]
    fn unknown_check_name() {
        let dd = disc(1, 4, "x1^3");
        assert!(run_check("nope", &dd, 0.1, &VerifyOptions::default()).is_err());
    }
}
