//! Dense eigen-decomposition primitives.
//!
//! Matrix norms used in tolerances are Frobenius norms.

mod general;
mod hermitian;
mod inverse;
mod matrix;

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::Serialize;

pub use general::{general_eigenvalues, hessenberg};
pub use hermitian::{hermitian_eigen, tridiagonal_ql};
pub use inverse::inverse_iteration;
pub use matrix::{inner, norm, normalize, CMatrix};

use crate::error::{Error, Result};
use crate::operators::OperatorMatrix;

/// Eigenvalues sorted ascending by real part then imaginary part, with
/// optional unit eigenvectors (matrix columns, same order) and per-pair
/// residuals `‖Mv − λv‖`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralDecomposition {
    #[serde(serialize_with = "serialize_complex_list")]
    pub values: Vec<Complex64>,
    #[serde(skip)]
    pub vectors: Option<CMatrix>,
    pub residuals: Vec<f64>,
}

impl SpectralDecomposition {
    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn vector(&self, k: usize) -> Option<Vec<Complex64>> {
        self.vectors.as_ref().map(|v| v.column(k))
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn serialize_complex_list<S: serde::Serializer>(
    v: &[Complex64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

/// Canonical ordering: ascending real part, then imaginary part.
pub fn canonical_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Hermitian eigendecomposition with eigenvectors and residuals.
pub fn eig_hermitian(m: &OperatorMatrix) -> Result<SpectralDecomposition> {
    if !m.flags().hermitian {
        return Err(Error::Config(
            "eig_hermitian requires a matrix carrying the hermitian flag".into(),
        ));
    }
    eig_hermitian_matrix(m.matrix())
}

/// Same as [`eig_hermitian`] for a bare matrix assumed Hermitian (only the
/// lower triangle is trusted to the extent the reduction reads it).
pub fn eig_hermitian_matrix(a: &CMatrix) -> Result<SpectralDecomposition> {
    let (vals, vecs) = hermitian_eigen(a, true)?;
    let vecs = vecs.expect("vectors requested");
    let residuals = (0..vals.len())
        .map(|k| {
            let v = vecs.column(k);
            let av = a.mul_vec(&v);
            norm(&av.iter().zip(&v).map(|(x, y)| x - y * vals[k]).collect::<Vec<_>>())
        })
        .collect();
    Ok(SpectralDecomposition {
        values: vals.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        vectors: Some(vecs),
        residuals,
    })
}

/// Eigenvalues of a general square matrix (no vectors).
pub fn eig_general(m: &OperatorMatrix) -> Result<SpectralDecomposition> {
    eig_general_matrix(m.matrix())
}

pub fn eig_general_matrix(a: &CMatrix) -> Result<SpectralDecomposition> {
    let mut values = general_eigenvalues(a)?;
    values.sort_by(canonical_cmp);
    Ok(SpectralDecomposition {
        values,
        vectors: None,
        residuals: Vec::new(),
    })
}

/// Eigenvector for the eigenvalue nearest `shift`, with refined eigenvalue
/// and residual; the residual is at most `1e-8·‖M‖`.
pub fn eigvec_inverse_iteration(
    m: &OperatorMatrix,
    shift: Complex64,
) -> Result<(Vec<Complex64>, Complex64, f64)> {
    let tol = 1e-8 * m.matrix().frobenius_norm();
    inverse_iteration(m.matrix(), shift, tol)
}

/// Smallest singular value of `A`, from the Hermitian dilation
/// `[[0, A], [A†, 0]]` whose eigenvalues are `±σ`.
pub fn smallest_singular_value(a: &CMatrix) -> Result<f64> {
    let n = a.rows();
    let dil = CMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) => a[(i, j - n)],
        (false, true) => a[(j, i - n)].conj(),
        _ => Complex64::new(0.0, 0.0),
    });
    let (vals, _) = hermitian_eigen(&dil, false)?;
    Ok(vals.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min))
}
