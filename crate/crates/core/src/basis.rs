//! Truncated eigenbasis of the d-dimensional harmonic oscillator `-Δ + x²`.
//!
//! Basis functions are labeled by multi-indices `(l₁,…,l_d)`; the truncation
//! keeps every multi-index whose principal quantum number `l₁+…+l_d` does not
//! exceed the cutoff. Enumeration order is ascending principal quantum number,
//! ties broken lexicographically (ascending) on the entries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quantum numbers of one product Hermite function.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Principal quantum number `l₁+…+l_d`.
    pub fn principal(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `(-1)^principal` as ±1.
    pub fn parity(&self) -> i8 {
        if self.principal() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// Dimension `d ≥ 1` and maximal retained principal quantum number `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisTruncation {
    dim: usize,
    cutoff: usize,
}

impl BasisTruncation {
    pub fn new(dim: usize, cutoff: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        Ok(BasisTruncation { dim, cutoff })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// `C(L+d, d)`.
    pub fn size(&self) -> usize {
        binomial((self.cutoff + self.dim) as u64, self.dim as u64) as usize
    }

    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        BasisTruncation {
            dim: self.dim,
            cutoff,
        }
    }
}

/// Exact binomial coefficient; intermediate products stay integral.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// All multi-indices with principal quantum number `≤ L`, in canonical order.
pub fn enumerate_basis(t: &BasisTruncation) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(t.size());
    let mut buf = vec![0u32; t.dim];
    for l in 0..=t.cutoff as u32 {
        compositions(l, 0, &mut buf, &mut out);
    }
    out
}

// Lexicographically ascending compositions of `remaining` into buf[pos..].
fn compositions(remaining: u32, pos: usize, buf: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if pos + 1 == buf.len() {
        buf[pos] = remaining;
        out.push(MultiIndex(buf.clone()));
        return;
    }
    for first in 0..=remaining {
        buf[pos] = first;
        compositions(remaining - first, pos + 1, buf, out);
    }
}

/// Eigenvalue of `H₀` on the given basis function: `2l + d`.
pub fn h0_energy(m: &MultiIndex, dim: usize) -> f64 {
    (2 * m.principal() as usize + dim) as f64
}

/// Eigenvalue of `P·H₀`: `+(2l+d)` for even `l`, `-(2l+d)` for odd `l`.
pub fn ph0_energy(m: &MultiIndex, dim: usize) -> f64 {
    m.parity() as f64 * h0_energy(m, dim)
}

/// Number of multi-indices with principal quantum number `l`: `C(l+d-1, d-1)`.
pub fn degeneracy(l: u32, dim: usize) -> u64 {
    binomial(l as u64 + dim as u64 - 1, dim as u64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn one_dimensional_enumeration() {
        let t = BasisTruncation::new(1, 3).unwrap();
        assert_eq!(
            enumerate_basis(&t),
            vec![mi(&[0]), mi(&[1]), mi(&[2]), mi(&[3])]
        );
    }

    #[test]
    fn two_dimensional_tie_break() {
        let t = BasisTruncation::new(2, 1).unwrap();
        assert_eq!(enumerate_basis(&t), vec![mi(&[0, 0]), mi(&[0, 1]), mi(&[1, 0])]);
    }

    #[test]
    fn sizes_match_binomial() {
        for d in 1..=4 {
            for l in 0..=12 {
                let t = BasisTruncation::new(d, l).unwrap();
                let b = enumerate_basis(&t);
                assert_eq!(b.len(), t.size());
                assert_eq!(b.len() as u64, binomial((l + d) as u64, d as u64));
                let total: u64 = (0..=l as u32).map(|k| degeneracy(k, d)).sum();
                assert_eq!(total as usize, b.len());
                // strictly increasing in (principal, entries) means no duplicates
                for w in b.windows(2) {
                    assert!((w[0].principal(), &w[0]) < (w[1].principal(), &w[1]));
                }
            }
        }
        assert_eq!(BasisTruncation::new(3, 2).unwrap().size(), 10);
    }

    #[test]
    fn energies() {
        assert_eq!(h0_energy(&mi(&[0]), 1), 1.0);
        assert_eq!(h0_energy(&mi(&[1, 0]), 2), 4.0);
        assert_eq!(h0_energy(&mi(&[0, 0, 0]), 3), 3.0);
        assert_eq!(ph0_energy(&mi(&[0]), 1), 1.0);
        assert_eq!(ph0_energy(&mi(&[1]), 1), -3.0);
        assert_eq!(ph0_energy(&mi(&[1, 1]), 2), 6.0);
    }

    #[test]
    fn degeneracy_against_brute_force() {
        let brute = |l: u32, d: usize| {
            let t = BasisTruncation::new(d, l as usize).unwrap();
            enumerate_basis(&t).iter().filter(|m| m.principal() == l).count() as u64
        };
        assert_eq!(degeneracy(7, 1), 1);
        assert_eq!(degeneracy(3, 2), 4);
        assert_eq!(brute(3, 2), 4);
        assert_eq!(degeneracy(2, 3), 6);
        assert_eq!(brute(2, 3), 6);
        for d in 1..=4 {
            for l in 0..8 {
                assert_eq!(degeneracy(l, d), brute(l, d));
            }
        }
    }

    #[test]
    fn parity_sign_matches_ph0() {
        let t = BasisTruncation::new(3, 5).unwrap();
        for m in enumerate_basis(&t) {
            assert_eq!(m.parity() == 1, ph0_energy(&m, 3) > 0.0);
        }
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(BasisTruncation::new(0, 3).is_err());
    }
}
