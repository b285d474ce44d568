use num_complex::Complex64;

use super::matrix::{norm, normalize, CMatrix};
use crate::error::{Error, Result};

const MAX_STEPS: usize = 60;

/// LU factorization with partial pivoting; `None` if a pivot is exactly zero.
struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(a: &CMatrix) -> Option<Lu> {
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == 0.0 {
                return None;
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f != Complex64::new(0.0, 0.0) {
                    for j in k + 1..n {
                        let u = lu[(k, j)];
                        lu[(i, j)] -= f * u;
                    }
                }
            }
        }
        Some(Lu { lu, perm })
    }

    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = b.len();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        x
    }
}

/// Shifted inverse iteration. Returns the unit vector, the Rayleigh-quotient
/// eigenvalue and the residual `‖Mv − λ′v‖`.
pub fn inverse_iteration(
    m: &CMatrix,
    shift: Complex64,
    tolerance: f64,
) -> Result<(Vec<Complex64>, Complex64, f64)> {
    let n = m.rows();
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let shifted = |s: Complex64| {
        let mut a = m.clone();
        for i in 0..n {
            a[(i, i)] -= s;
        }
        Lu::factor(&a)
    };
    let lu = match shifted(shift) {
        Some(lu) => lu,
        None => {
            let nudged = shift + Complex64::new(1e-10 * scale, 1e-10 * scale);
            shifted(nudged).ok_or(Error::SingularShift)?
        }
    };

    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + (i as f64 + 1.0).sqrt() / n as f64, 0.0))
        .collect();
    normalize(&mut v);
    let mut best = (v.clone(), shift, f64::INFINITY);
    for _ in 0..MAX_STEPS {
        let mut y = lu.solve(&v);
        if y.iter().any(|z| !z.is_finite()) {
            break;
        }
        normalize(&mut y);
        v = y;
        let mv = m.mul_vec(&v);
        let lambda: Complex64 = v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum();
        let r: Vec<Complex64> = mv.iter().zip(&v).map(|(a, b)| a - b * lambda).collect();
        let res = norm(&r);
        let improved = res < best.2 * 0.5;
        if res < best.2 {
            best = (v.clone(), lambda, res);
        }
        if best.2 <= 1e-3 * tolerance || (!improved && best.2 <= tolerance) {
            break;
        }
    }
    if best.2 <= tolerance {
        Ok(best)
    } else {
        Err(Error::NoConvergence { residual: best.2 })
    }
}
