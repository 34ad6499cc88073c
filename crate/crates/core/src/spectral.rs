//! Spectral functionals of the reduced density matrix.
//!
//! Entropies are in nats.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rdm::{hermitian_defect, ReducedDensityMatrix, RDM_TOLERANCE};

/// Eigenvalues in `[-CLAMP_THRESHOLD, 0)` are treated as numerical zeros.
pub const CLAMP_THRESHOLD: f64 = 1e-10;

/// Eigenvalues below `-NEGATIVE_FAILURE` mean the input is not a density matrix.
pub const NEGATIVE_FAILURE: f64 = 1e-8;

/// Real eigenvalues of ρ in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Sorts the given values into descending order.
    pub fn new(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Self { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// `Σ λ²`.
    pub fn purity(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l * l).sum()
    }

    /// `−Σ λ ln λ` with `0 ln 0 = 0`, after clamping small negatives to zero.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let mut s = 0.0;
        for &l in &self.eigenvalues {
            if l < -NEGATIVE_FAILURE {
                return Err(Error::NotDensityMatrix(format!(
                    "negative eigenvalue {l:e}"
                )));
            }
            if l > 0.0 {
                s -= l * l.ln();
            }
        }
        Ok(s)
    }

    /// Number of eigenvalues above `threshold`.
    pub fn count_above(&self, threshold: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > threshold).count()
    }

    /// Eigenvalues with values in `[-CLAMP_THRESHOLD, 0)` set to zero.
    pub fn clamped(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .map(|&l| {
                if (-CLAMP_THRESHOLD..0.0).contains(&l) {
                    0.0
                } else {
                    l
                }
            })
            .collect()
    }
}

/// Eigenvalues and eigenvectors (as columns) of a Hermitian ρ.
pub fn eigen_decomposition(rdm: &ReducedDensityMatrix) -> Result<(Spectrum, DMatrix<Complex64>)> {
    let asym = hermitian_defect(rdm.matrix());
    if !(asym <= RDM_TOLERANCE) {
        return Err(Error::NotHermitian(asym));
    }
    let eig = SymmetricEigen::new(rdm.matrix().clone());
    if eig.eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::NotDensityMatrix(
            "eigensolver produced non-finite values".into(),
        ));
    }
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(rdm.dim(), rdm.dim(), |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((
        Spectrum {
            eigenvalues: values,
        },
        vectors,
    ))
}

pub fn eigenvalues(rdm: &ReducedDensityMatrix) -> Result<Spectrum> {
    eigen_decomposition(rdm).map(|(s, _)| s)
}

/// `Tr ρ² = Σ_ij |ρ_ij|²` for Hermitian ρ.
pub fn purity(rdm: &ReducedDensityMatrix) -> f64 {
    rdm.matrix().iter().map(|c| c.norm_sqr()).sum()
}

/// `−Tr ρ ln ρ` in nats.
pub fn von_neumann_entropy(rdm: &ReducedDensityMatrix) -> Result<f64> {
    eigenvalues(rdm)?.von_neumann_entropy()
}

/// Shannon entropy `−Σ p ln p` of a probability vector.
///
/// Entries down to `-1e-12` are clamped to zero; the sum must be `1 ± 1e-9`.
pub fn shannon_entropy(distribution: &[f64]) -> Result<f64> {
    if let Some(bad) = distribution.iter().find(|p| !p.is_finite() || **p < -1e-12) {
        return Err(Error::InvalidDistribution(format!(
            "entry {bad} is negative or not finite"
        )));
    }
    let total: f64 = distribution.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!(
            "entries sum to {total}"
        )));
    }
    Ok(distribution
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum())
}
