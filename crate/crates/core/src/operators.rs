//! Dense matrices of `H₀`, `W`, `H(g) = H₀ + igW`, the parity `P`, and
//! `Q(g) = P·H(g)` in the truncated oscillator basis.
//!
//! Polynomial matrix elements are built from products of 1-d position
//! matrices on a basis padded by the polynomial degree and only then
//! truncated, so every retained entry is exact up to rounding. `W` is
//! assembled exactly symmetric with exact zeros between equal-parity states;
//! the identities `Q = Q†`, `PHP = H†` and `Q² = H†H` then hold bit for bit
//! for real coupling.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::Serialize;

use crate::basis::{enumerate_basis, h0_energy, BasisTruncation, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::potential::PolynomialPotential;

/// Structural properties verified when a matrix is built.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MatrixFlags {
    pub hermitian: bool,
    pub real: bool,
    pub diagonal: bool,
    pub antisymmetric_real: bool,
    pub parity_off_block: bool,
    /// Real part diagonal, imaginary part real symmetric and parity-off-block.
    pub pt_structured: bool,
}

#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    basis: BasisTruncation,
    matrix: CMatrix,
    flags: MatrixFlags,
}

impl OperatorMatrix {
    /// Wraps a matrix, verifying every flag it can claim.
    pub fn new(basis: BasisTruncation, matrix: CMatrix) -> Self {
        let parities: Vec<i8> = enumerate_basis(&basis).iter().map(|m| m.parity()).collect();
        let flags = detect_flags(&matrix, &parities);
        OperatorMatrix {
            basis,
            matrix,
            flags,
        }
    }

    pub fn basis(&self) -> &BasisTruncation {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn flags(&self) -> MatrixFlags {
        self.flags
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    fn withhold_hermitian(mut self) -> Self {
        self.flags.hermitian = false;
        self
    }
}

fn detect_flags(m: &CMatrix, parities: &[i8]) -> MatrixFlags {
    let n = m.rows();
    let mut f = MatrixFlags {
        hermitian: m.is_square(),
        real: true,
        diagonal: true,
        antisymmetric_real: true,
        parity_off_block: true,
        pt_structured: true,
    };
    for i in 0..n {
        for j in 0..n {
            let a = m[(i, j)];
            let b = m[(j, i)];
            if a != b.conj() {
                f.hermitian = false;
            }
            if a.im != 0.0 {
                f.real = false;
                f.antisymmetric_real = false;
            }
            if a.re != -b.re {
                f.antisymmetric_real = false;
            }
            if i != j && a != Complex64::new(0.0, 0.0) {
                f.diagonal = false;
            }
            if parities[i] == parities[j] && a != Complex64::new(0.0, 0.0) {
                f.parity_off_block = false;
            }
            if i != j && a.re != 0.0 {
                f.pt_structured = false;
            }
            if a.im != b.im || (parities[i] == parities[j] && a.im != 0.0) {
                f.pt_structured = false;
            }
        }
    }
    f
}

/// Real symmetric tridiagonal matrix of `x` on 1-d Hermite functions of
/// `-d²/dx² + x²`, indices `0..=n_max`: `⟨n|x|n+1⟩ = √((n+1)/2)`.
pub fn position_matrix_1d(n_max: usize) -> OperatorMatrix {
    let t = BasisTruncation::new(1, n_max).expect("dimension 1 is valid");
    let x = position_real(n_max + 1);
    let m = CMatrix::from_fn(n_max + 1, n_max + 1, |i, j| Complex64::new(x[i][j], 0.0));
    OperatorMatrix::new(t, m)
}

fn position_real(size: usize) -> Vec<Vec<f64>> {
    let mut x = vec![vec![0.0; size]; size];
    for n in 0..size.saturating_sub(1) {
        let v = ((n as f64 + 1.0) / 2.0).sqrt();
        x[n][n + 1] = v;
        x[n + 1][n] = v;
    }
    x
}

/// 1-d matrices of `x^a` for `a = 0..=max_power`, each restricted to indices
/// `0..=cutoff` after multiplying on the padded range `0..=cutoff+max_power`.
pub fn position_powers_1d(cutoff: usize, max_power: u32) -> Vec<Vec<Vec<f64>>> {
    let size = cutoff + max_power as usize + 1;
    let x = position_real(size);
    let mut full = Vec::with_capacity(max_power as usize + 1);
    let mut current: Vec<Vec<f64>> = (0..size)
        .map(|i| (0..size).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    full.push(current.clone());
    for _ in 0..max_power {
        let mut next = vec![vec![0.0; size]; size];
        for i in 0..size {
            for j in 0..size {
                let lo = j.saturating_sub(1);
                let hi = (j + 1).min(size - 1);
                let mut acc = 0.0;
                for k in lo..=hi {
                    acc += current[i][k] * x[k][j];
                }
                next[i][j] = acc;
            }
        }
        current = next;
        full.push(current.clone());
    }
    full.into_iter()
        .enumerate()
        .map(|(a, m)| {
            let mut r = vec![vec![0.0; cutoff + 1]; cutoff + 1];
            for i in 0..=cutoff {
                for j in i..=cutoff {
                    // x^a connects only indices whose sum has the parity of a
                    let v = if (i + j + a) % 2 == 1 { 0.0 } else { m[i][j] };
                    r[i][j] = v;
                    r[j][i] = v;
                }
            }
            r
        })
        .collect()
}

/// Cached ingredients for assembling the operator family at many couplings.
#[derive(Debug, Clone)]
pub struct Discretization {
    basis: BasisTruncation,
    states: Vec<MultiIndex>,
    h0: Vec<f64>,
    parity: Vec<f64>,
    w: Vec<f64>,
    potential: PolynomialPotential,
}

impl Discretization {
    pub fn new(t: &BasisTruncation, potential: &PolynomialPotential) -> Result<Self> {
        if potential.dim() != t.dim() {
            return Err(Error::DimensionMismatch {
                expected: t.dim(),
                found: potential.dim(),
            });
        }
        let states = enumerate_basis(t);
        let n = states.len();
        let d = t.dim();
        let powers = position_powers_1d(t.cutoff(), potential.degree());
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                if states[i].parity() == states[j].parity() {
                    continue;
                }
                let (a, b) = (states[i].entries(), states[j].entries());
                let mut acc = 0.0;
                for mono in potential.monomials() {
                    let mut prod = mono.coefficient;
                    for c in 0..d {
                        prod *= powers[mono.exponents[c] as usize][a[c] as usize][b[c] as usize];
                    }
                    acc += prod;
                }
                w[i * n + j] = acc;
                w[j * n + i] = acc;
            }
        }
        Ok(Discretization {
            basis: *t,
            h0: states.iter().map(|m| h0_energy(m, d)).collect(),
            parity: states.iter().map(|m| m.parity() as f64).collect(),
            states,
            w,
            potential: potential.clone(),
        })
    }

    pub fn basis(&self) -> &BasisTruncation {
        &self.basis
    }

    pub fn states(&self) -> &[MultiIndex] {
        &self.states
    }

    pub fn potential(&self) -> &PolynomialPotential {
        &self.potential
    }

    pub fn size(&self) -> usize {
        self.states.len()
    }

    pub fn h0_diagonal(&self) -> &[f64] {
        &self.h0
    }

    pub fn parity_diagonal(&self) -> &[f64] {
        &self.parity
    }

    /// Row-major real entries of `W`.
    pub fn w_entries(&self) -> &[f64] {
        &self.w
    }

    pub fn h0(&self) -> OperatorMatrix {
        OperatorMatrix::new(self.basis, CMatrix::from_real_diagonal(&self.h0))
    }

    pub fn p(&self) -> OperatorMatrix {
        OperatorMatrix::new(self.basis, CMatrix::from_real_diagonal(&self.parity))
    }

    pub fn w(&self) -> OperatorMatrix {
        let n = self.size();
        OperatorMatrix::new(
            self.basis,
            CMatrix::from_fn(n, n, |i, j| Complex64::new(self.w[i * n + j], 0.0)),
        )
    }

    /// Entries of `H₀ + i·g·W`.
    fn h_matrix(&self, g: Complex64) -> CMatrix {
        let n = self.size();
        CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                return Complex64::new(self.h0[i], 0.0);
            }
            let w = self.w[i * n + j];
            if g.im == 0.0 {
                Complex64::new(0.0, g.re * w)
            } else {
                Complex64::new(-g.im * w, g.re * w)
            }
        })
    }

    pub fn h(&self, g: Complex64) -> OperatorMatrix {
        OperatorMatrix::new(self.basis, self.h_matrix(g))
    }

    pub fn h_real(&self, g: f64) -> OperatorMatrix {
        self.h(Complex64::new(g, 0.0))
    }

    /// `Q(g) = P·H(g)`; the hermitian flag is withheld for complex `g`.
    pub fn q(&self, g: Complex64) -> OperatorMatrix {
        let mut m = self.h_matrix(g);
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] *= self.parity[i];
            }
        }
        let op = OperatorMatrix::new(self.basis, m);
        if g.im != 0.0 {
            op.withhold_hermitian()
        } else {
            op
        }
    }

    pub fn q_real(&self, g: f64) -> OperatorMatrix {
        self.q(Complex64::new(g, 0.0))
    }

    /// `Q′(g) = H(g)·P`.
    pub fn q_prime(&self, g: Complex64) -> OperatorMatrix {
        let mut m = self.h_matrix(g);
        let n = self.size();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] *= self.parity[j];
            }
        }
        let op = OperatorMatrix::new(self.basis, m);
        if g.im != 0.0 {
            op.withhold_hermitian()
        } else {
            op
        }
    }
}

pub fn assemble_h0(t: &BasisTruncation) -> OperatorMatrix {
    let diag: Vec<f64> = enumerate_basis(t).iter().map(|m| h0_energy(m, t.dim())).collect();
    OperatorMatrix::new(*t, CMatrix::from_real_diagonal(&diag))
}

pub fn assemble_parity(t: &BasisTruncation) -> OperatorMatrix {
    let diag: Vec<f64> = enumerate_basis(t).iter().map(|m| m.parity() as f64).collect();
    OperatorMatrix::new(*t, CMatrix::from_real_diagonal(&diag))
}

pub fn assemble_w(t: &BasisTruncation, w: &PolynomialPotential) -> Result<OperatorMatrix> {
    Ok(Discretization::new(t, w)?.w())
}

pub fn assemble_h(t: &BasisTruncation, w: &PolynomialPotential, g: Complex64) -> Result<OperatorMatrix> {
    Ok(Discretization::new(t, w)?.h(g))
}

/// `Q(g) = P·H(g)` for real coupling; complex `g` is rejected.
pub fn assemble_q(t: &BasisTruncation, w: &PolynomialPotential, g: Complex64) -> Result<OperatorMatrix> {
    let g = require_real(g)?;
    Ok(Discretization::new(t, w)?.q_real(g))
}

pub fn require_real(g: Complex64) -> Result<f64> {
    if g.im != 0.0 {
        return Err(Error::NonRealCoupling { re: g.re, im: g.im });
    }
    Ok(g.re)
}

/// Header fields of a matrix dump.
#[derive(Debug, Clone, PartialEq)]
pub struct DumpHeader {
    pub name: String,
    pub dim: usize,
    pub cutoff: usize,
    pub size: usize,
    pub ordering: String,
    pub potential: String,
    pub g: Complex64,
}

pub const ORDERING_VERSION: &str = "principal-lex-v1";

/// Writes a self-describing text dump: `#`-prefixed header lines followed by
/// one line per row of `re im` pairs with 17 significant digits.
pub fn write_matrix_dump<W: Write>(
    out: &mut W,
    name: &str,
    op: &OperatorMatrix,
    potential: &PolynomialPotential,
    g: Complex64,
) -> Result<()> {
    let t = op.basis();
    let n = op.size();
    let mut s = String::new();
    writeln!(s, "# pt-oscillator matrix dump").unwrap();
    writeln!(s, "# matrix {name}").unwrap();
    writeln!(s, "# dim {}", t.dim()).unwrap();
    writeln!(s, "# cutoff {}", t.cutoff()).unwrap();
    writeln!(s, "# size {n}").unwrap();
    writeln!(s, "# ordering {ORDERING_VERSION}").unwrap();
    writeln!(s, "# potential {potential}").unwrap();
    writeln!(s, "# g {:.16e} {:.16e}", g.re, g.im).unwrap();
    for i in 0..n {
        let row: Vec<String> = op
            .matrix()
            .row(i)
            .iter()
            .map(|z| format!("{:.16e} {:.16e}", z.re, z.im))
            .collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

/// Reads a dump written by [`write_matrix_dump`].
pub fn read_matrix_dump<R: BufRead>(input: R) -> Result<(DumpHeader, CMatrix)> {
    let bad = |m: &str| Error::Io(format!("malformed matrix dump: {m}"));
    let mut header = DumpHeader {
        name: String::new(),
        dim: 0,
        cutoff: 0,
        size: 0,
        ordering: String::new(),
        potential: String::new(),
        g: Complex64::new(0.0, 0.0),
    };
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for line in input.lines() {
        let line = line?;
        if let Some(rest) = line.strip_prefix("# ") {
            let (key, value) = rest.split_once(' ').unwrap_or((rest, ""));
            match key {
                "matrix" => header.name = value.to_string(),
                "dim" => header.dim = value.parse().map_err(|_| bad("dim"))?,
                "cutoff" => header.cutoff = value.parse().map_err(|_| bad("cutoff"))?,
                "size" => header.size = value.parse().map_err(|_| bad("size"))?,
                "ordering" => header.ordering = value.to_string(),
                "potential" => header.potential = value.to_string(),
                "g" => {
                    let parts: Vec<f64> = value
                        .split_whitespace()
                        .map(|p| p.parse().map_err(|_| bad("g")))
                        .collect::<Result<_>>()?;
                    if parts.len() != 2 {
                        return Err(bad("g"));
                    }
                    header.g = Complex64::new(parts[0], parts[1]);
                }
                _ => {}
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let nums: Vec<f64> = line
            .split_whitespace()
            .map(|p| p.parse().map_err(|_| bad("entry")))
            .collect::<Result<_>>()?;
        if nums.len() % 2 != 0 {
            return Err(bad("odd number of fields in row"));
        }
        rows.push(nums.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect());
    }
    let n = header.size;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(bad("row count or width does not match size"));
    }
    Ok((header, CMatrix::from_fn(n, n, |i, j| rows[i][j])))
}
