//! Eigenvalues of a general complex matrix: Householder reduction to upper
//! Hessenberg form followed by single-shift complex QR with Wilkinson shifts.

use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{Error, Result};

const MAX_ITER_PER_VALUE: usize = 60;

pub fn general_eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    assert!(a.is_square(), "general_eigenvalues needs a square matrix");
    let n = a.rows();
    let mut h = a.clone();
    hessenberg(&mut h);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    let mut values = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(values);
    }
    let mut hi = n - 1;
    let mut its = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            values[0] = h[(0, 0)];
            break;
        }
        // locate the start of the unreduced block ending at `hi`
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l, l)].l1_norm() + h[(l - 1, l - 1)].l1_norm();
            if s == 0.0 {
                s = scale;
            }
            if h[(l, l - 1)].l1_norm() <= f64::EPSILON * s {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            values[hi] = h[(hi, hi)];
            hi -= 1;
            its = 0;
            continue;
        }
        its += 1;
        total += 1;
        if its > MAX_ITER_PER_VALUE {
            return Err(Error::ConvergenceFailure {
                iterations: total,
                converged: n - 1 - hi,
                size: n,
            });
        }
        let shift = if its % 10 == 0 {
            // exceptional shift to break cycles
            h[(hi, hi)] + 0.75 * h[(hi, hi - 1)].norm()
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(&mut h, l, hi, shift);
    }
    Ok(values)
}

/// In-place unitary reduction to upper Hessenberg form.
pub fn hessenberg(h: &mut CMatrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x: Vec<Complex64> = (0..m).map(|i| h[(k + 1 + i, k)]).collect();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let alpha = (x[0].norm_sqr() + tail).sqrt();
        let x0n = x[0].norm();
        let phase = if x0n > 0.0 { x[0] / x0n } else { Complex64::new(1.0, 0.0) };
        let mut v = x;
        v[0] += phase * alpha;
        let beta = 2.0 / v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        for j in k..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..m {
                s += v[i].conj() * h[(k + 1 + i, j)];
            }
            s *= beta;
            for i in 0..m {
                h[(k + 1 + i, j)] -= v[i] * s;
            }
        }
        for r in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..m {
                s += h[(r, k + 1 + j)] * v[j];
            }
            s *= beta;
            for j in 0..m {
                h[(r, k + 1 + j)] -= s * v[j].conj();
            }
        }
        h[(k + 1, k)] = -phase * alpha;
        for i in 1..m {
            h[(k + 1 + i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

// eigenvalue of [[a, b], [c, d]] closest to d
fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let r1 = mean + disc;
    let r2 = mean - disc;
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// Complex Givens pair `(c, s)` with `[c s; -s̄ c]·[a; b] = [r; 0]`.
pub(crate) fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b == Complex64::new(0.0, 0.0) {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let na = a.norm();
    if na == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let nrm = na.hypot(b.norm());
    (na / nrm, (a / na) * b.conj() / nrm)
}

fn qr_sweep(h: &mut CMatrix, l: usize, hi: usize, shift: Complex64) {
    let mut x = h[(l, l)] - shift;
    let mut y = h[(l + 1, l)];
    for k in l..hi {
        if k > l {
            x = h[(k, k - 1)];
            y = h[(k + 1, k - 1)];
        }
        let (c, s) = givens(x, y);
        let first_col = if k > l { k - 1 } else { l };
        for j in first_col..=hi {
            let t1 = h[(k, j)];
            let t2 = h[(k + 1, j)];
            h[(k, j)] = t1 * c + s * t2;
            h[(k + 1, j)] = -s.conj() * t1 + t2 * c;
        }
        if k > l {
            h[(k + 1, k - 1)] = Complex64::new(0.0, 0.0);
        }
        let last_row = (k + 2).min(hi);
        for r in l..=last_row {
            let t1 = h[(r, k)];
            let t2 = h[(r, k + 1)];
            h[(r, k)] = t1 * c + s.conj() * t2;
            h[(r, k + 1)] = -s * t1 + t2 * c;
        }
    }
}
