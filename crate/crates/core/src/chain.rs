//! Single-excitation Hamiltonians of homogeneous and center-biased XX chains.
//!
//! Spins are numbered `1..=N` everywhere in the public API. Storage inside
//! vectors and matrices is 0-based, so spin `i` lives at offset `i - 1`.

use serde::Serialize;

use crate::error::{ItcError, Result};

/// Physical description of an XX chain: its length and the optional
/// potential applied to the center spin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainSpec {
    n_spins: usize,
    bias: f64,
}

impl ChainSpec {
    pub fn new(n_spins: usize, bias: f64) -> Result<Self> {
        if n_spins < 2 {
            return Err(ItcError::InvalidChain(format!(
                "a chain needs at least 2 spins, got {n_spins}"
            )));
        }
        if !bias.is_finite() || bias < 0.0 {
            return Err(ItcError::InvalidChain(format!(
                "bias must be finite and non-negative, got {bias}"
            )));
        }
        if bias > 0.0 && n_spins % 2 == 0 {
            return Err(ItcError::InvalidChain(format!(
                "a center bias needs an odd chain, got N = {n_spins}"
            )));
        }
        Ok(ChainSpec { n_spins, bias })
    }

    pub fn homogeneous(n_spins: usize) -> Result<Self> {
        Self::new(n_spins, 0.0)
    }

    pub fn biased(n_spins: usize, bias: f64) -> Result<Self> {
        Self::new(n_spins, bias)
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn is_homogeneous(&self) -> bool {
        self.bias == 0.0
    }

    /// Same length, different bias.
    pub fn with_bias(&self, bias: f64) -> Result<Self> {
        Self::new(self.n_spins, bias)
    }

    /// The center spin ω = (N+1)/2 of an odd chain, 1-based.
    pub fn center(&self) -> Result<usize> {
        center_index(self.n_spins)
    }
}

pub fn center_index(n_spins: usize) -> Result<usize> {
    if n_spins % 2 == 0 {
        return Err(ItcError::InvalidChain(format!(
            "N = {n_spins} is even and has no center spin"
        )));
    }
    Ok(n_spins.div_ceil(2))
}

pub(crate) fn check_spin(index: usize, n: usize) -> Result<()> {
    if index == 0 || index > n {
        Err(ItcError::IndexOutOfRange { index, n })
    } else {
        Ok(())
    }
}

/// Symmetric tridiagonal single-excitation Hamiltonian `T_N + ζE`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian1 {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl Hamiltonian1 {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Row-major dense expansion.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut dense = vec![0.0; n * n];
        for i in 0..n {
            dense[i * n + i] = self.diag[i];
        }
        for (i, &e) in self.offdiag.iter().enumerate() {
            dense[i * n + i + 1] = e;
            dense[(i + 1) * n + i] = e;
        }
        dense
    }

    /// `H x` for a vector in the spin basis.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.offdiag[i] * x[i + 1];
                }
                y
            })
            .collect()
    }
}

pub fn build_hamiltonian(spec: &ChainSpec) -> Hamiltonian1 {
    let n = spec.n_spins();
    let mut diag = vec![0.0; n];
    if spec.bias() > 0.0 {
        // odd n is guaranteed by ChainSpec
        diag[n.div_ceil(2) - 1] = spec.bias();
    }
    Hamiltonian1 {
        diag,
        offdiag: vec![1.0; n - 1],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_three_spin() {
        let h = build_hamiltonian(&ChainSpec::homogeneous(3).unwrap());
        assert_eq!(h.diag, vec![0.0, 0.0, 0.0]);
        assert_eq!(h.offdiag, vec![1.0, 1.0]);
    }

    #[test]
    fn bias_sits_on_center() {
        let h = build_hamiltonian(&ChainSpec::biased(5, 2.0).unwrap());
        assert_eq!(h.diag, vec![0.0, 0.0, 2.0, 0.0, 0.0]);
        assert_eq!(h.offdiag, vec![1.0; 4]);
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(matches!(
            ChainSpec::biased(4, 1.0),
            Err(ItcError::InvalidChain(_))
        ));
        assert!(ChainSpec::homogeneous(1).is_err());
        assert!(ChainSpec::biased(3, -1.0).is_err());
        assert!(ChainSpec::biased(3, f64::INFINITY).is_err());
        assert!(ChainSpec::biased(3, f64::NAN).is_err());
        // even chains are fine without bias
        assert!(ChainSpec::homogeneous(4).is_ok());
    }

    #[test]
    fn center_indices() {
        assert_eq!(center_index(3).unwrap(), 2);
        assert_eq!(center_index(21).unwrap(), 11);
        assert_eq!(center_index(201).unwrap(), 101);
        assert!(center_index(10).is_err());
    }

    #[test]
    fn dense_expansion_matches_toeplitz_plus_bias() {
        for &(n, z) in &[(2, 0.0), (3, 1.5), (7, 0.0), (9, 1e3)] {
            let spec = ChainSpec::new(n, z).unwrap();
            let dense = build_hamiltonian(&spec).to_dense();
            let w = if z > 0.0 {
                n.div_ceil(2) - 1
            } else {
                usize::MAX
            };
            for r in 0..n {
                for c in 0..n {
                    let toeplitz = if r.abs_diff(c) == 1 { 1.0 } else { 0.0 };
                    let bias = if r == w && c == w { z } else { 0.0 };
                    assert_eq!(dense[r * n + c], toeplitz + bias);
                }
            }
        }
    }

    #[test]
    fn build_is_deterministic() {
        let spec = ChainSpec::biased(11, 3.25).unwrap();
        assert_eq!(build_hamiltonian(&spec), build_hamiltonian(&spec));
    }
}
