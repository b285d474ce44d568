//! Complex Hermitian eigensolver: unitary Householder reduction to a real
//! symmetric tridiagonal matrix, then implicit-shift QL.

use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS_PER_VALUE: usize = 60;

/// Eigenvalues (ascending) and, optionally, orthonormal eigenvectors stored
/// as matrix columns.
pub fn hermitian_eigen(a: &CMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<CMatrix>)> {
    assert!(a.is_square(), "hermitian_eigen needs a square matrix");
    let n = a.rows();
    if n == 0 {
        return Ok((Vec::new(), want_vectors.then(|| CMatrix::zeros(0, 0))));
    }
    let (mut diag, offdiag, unitary) = tridiagonalize(a, want_vectors);

    // phase-rotate the complex off-diagonal onto the positive reals
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    let mut sub = vec![0.0; n];
    for i in 0..n - 1 {
        let t = offdiag[i];
        let r = t.norm();
        sub[i] = r;
        phases[i + 1] = if r > 0.0 { phases[i] * (t / r) } else { phases[i] };
    }

    let mut z = if want_vectors {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        Some(z)
    } else {
        None
    };
    tridiagonal_ql(&mut diag, &mut sub, z.as_deref_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();

    let vectors = match (z, unitary) {
        (Some(z), Some(u)) => {
            // V = U · diag(phases) · Z, columns permuted into ascending order
            let mut v = CMatrix::zeros(n, n);
            for r in 0..n {
                let urow: Vec<Complex64> = (0..n).map(|k| u[(r, k)] * phases[k]).collect();
                for (col, &src) in order.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        acc += urow[k] * z[k * n + src];
                    }
                    v[(r, col)] = acc;
                }
            }
            Some(v)
        }
        _ => None,
    };
    Ok((values, vectors))
}

/// Returns the real diagonal, the complex subdiagonal `T[i+1,i]`, and the
/// accumulated unitary `U` with `A = U T U†`.
fn tridiagonalize(a: &CMatrix, want_u: bool) -> (Vec<f64>, Vec<Complex64>, Option<CMatrix>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut u = want_u.then(|| CMatrix::identity(n));
    let mut off = vec![Complex64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x: Vec<Complex64> = (0..m).map(|i| h[(k + 1 + i, k)]).collect();
        let alpha = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            // already tridiagonal in this column
            off[k] = x[0];
            continue;
        }
        let x0n = x[0].norm();
        let phase = if x0n > 0.0 { x[0] / x0n } else { Complex64::new(1.0, 0.0) };
        let mut v = x;
        v[0] += phase * alpha;
        let beta = 2.0 / v.iter().map(|z| z.norm_sqr()).sum::<f64>();

        // p = β·A₂₂·v
        let mut p = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..m {
                acc += h[(k + 1 + i, k + 1 + j)] * v[j];
            }
            p[i] = acc * beta;
        }
        let vp: Complex64 = v.iter().zip(&p).map(|(a, b)| a.conj() * b).sum();
        let kk = 0.5 * beta * vp.re;
        let w: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - vi * kk).collect();
        for i in 0..m {
            for j in 0..m {
                let upd = v[i] * w[j].conj() + w[i] * v[j].conj();
                h[(k + 1 + i, k + 1 + j)] -= upd;
            }
        }
        off[k] = -phase * alpha;
        for i in 0..m {
            h[(k + 1 + i, k)] = if i == 0 { off[k] } else { Complex64::new(0.0, 0.0) };
            h[(k, k + 1 + i)] = h[(k + 1 + i, k)].conj();
        }
        if let Some(u) = u.as_mut() {
            for r in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..m {
                    s += u[(r, k + 1 + j)] * v[j];
                }
                s *= beta;
                for j in 0..m {
                    u[(r, k + 1 + j)] -= s * v[j].conj();
                }
            }
        }
    }
    if n >= 2 {
        off[n - 2] = h[(n - 1, n - 2)];
    }
    let diag = (0..n).map(|i| h[(i, i)].re).collect();
    (diag, off, u)
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix. `sub[i]`
/// couples rows `i` and `i+1`. When `z` is given (row-major `n×n`, starting
/// from the identity or any orthogonal matrix), rotations accumulate into it.
pub fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS_PER_VALUE {
                return Err(Error::ConvergenceFailure {
                    iterations: iter,
                    converged: l,
                    size: n,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
