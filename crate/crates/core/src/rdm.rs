//! Single-particle reduced density matrix and the convex decomposition of
//! its diagonal.
//!
//! `⟨i|ρ|j⟩ = (1/N) ⟨Ψ| a†_j a_i |Ψ⟩`, so `Tr ρ = 1`.
//!
//! In any basis, the diagonal `F_i = ⟨i|ρ|i⟩` is a convex combination
//! `F = Σ_k d_k f_k` of flat occupation profiles: `d_k = |c_k|²` is the weight
//! of determinant `k` and `f_k` puts `1/N` on each of its orbitals. Since every
//! `f_k` has `Σ_i f_ik² = 1/N`,
//!
//! ```text
//! Σ_i F_i² = 1/N − Σ_{k<k'} d_k d_k' Σ_i (f_ik − f_ik')²  ≤  1/N
//! ```
//!
//! with equality only when a single `d_k` is nonzero.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{self, OrbitalBasisIndex};
use crate::error::{Error, Result};
use crate::state::FermionState;

/// Hermiticity and trace tolerance for [`ReducedDensityMatrix::new`].
pub const RDM_TOLERANCE: f64 = 1e-12;

/// D×D Hermitian, unit-trace single-particle operator.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl ReducedDensityMatrix {
    /// Validates squareness, Hermiticity and unit trace.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let rdm = Self::from_hermitian(matrix)?;
        let trace = rdm.trace();
        if (trace - 1.0).abs() > RDM_TOLERANCE {
            return Err(Error::NotDensityMatrix(format!(
                "trace is {trace}, expected 1"
            )));
        }
        Ok(rdm)
    }

    /// Validates squareness and Hermiticity only; the trace is not checked.
    ///
    /// Meant for probing the spectral functionals on matrices that are not
    /// reduced states, e.g. a spectrum quoted without its normalization.
    pub fn from_hermitian(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "density matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let asym = hermitian_defect(&matrix);
        if !(asym <= RDM_TOLERANCE) {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self { matrix })
    }

    /// Diagonal matrix with the given real entries (trace unchecked).
    pub fn from_diagonal(diagonal: &[f64]) -> Self {
        let diag = DVector::from_iterator(
            diagonal.len(),
            diagonal.iter().map(|&x| Complex64::new(x, 0.0)),
        );
        Self {
            matrix: DMatrix::from_diagonal(&diag),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|c| c.re).sum()
    }

    /// Occupation distribution `F_i = ⟨i|ρ|i⟩` in the current basis.
    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|c| c.re).collect()
    }
}

pub(crate) fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Computes ρ by enumerating, for every occupied determinant `S` and every
/// `i ∈ S`, the determinants `S' = (S∖{i}) ∪ {j}` reachable by one hop.
pub fn compute_rdm(state: &FermionState) -> ReducedDensityMatrix {
    let basis: &OrbitalBasisIndex = state.basis();
    let (d, n) = (basis.d(), basis.n());
    let amps = state.amplitudes();
    let mut rho = DMatrix::<Complex64>::zeros(d, d);
    for (tuple, c) in state.entries() {
        for &i in &tuple {
            let (rest, sign_i) = basis::annihilate_sorted(&tuple, i).unwrap();
            for j in 0..d {
                let Some((target, sign_j)) = basis::create_sorted(&rest, j) else {
                    continue;
                };
                let c_target = amps[basis.rank_unchecked(&target)];
                rho[(i, j)] += c * c_target.conj() * (sign_i * sign_j) as f64;
            }
        }
    }
    rho.unscale_mut(n as f64);
    // both triangles accumulate the same products in different orders
    let rho = (&rho + rho.adjoint()).unscale(2.0);
    ReducedDensityMatrix { matrix: rho }
}

/// Weights `d_k`, flat profiles `f_ik` and their mixture `F_i = Σ_k d_k f_ik`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexDecomposition {
    n: usize,
    weights: Vec<f64>,
    distributions: DMatrix<f64>,
    diagonal: Vec<f64>,
}

/// Decomposes the computational-basis diagonal of ρ over basis determinants.
pub fn diagonal_decomposition(state: &FermionState) -> ConvexDecomposition {
    let basis = state.basis();
    let (d, n) = (basis.d(), basis.n());
    let weights: Vec<f64> = state.amplitudes().iter().map(|c| c.norm_sqr()).collect();
    let mut distributions = DMatrix::<f64>::zeros(basis.size(), d);
    for (k, tuple) in basis.tuples().enumerate() {
        for i in tuple {
            distributions[(k, i)] = 1.0 / n as f64;
        }
    }
    let diagonal = (0..d)
        .map(|i| {
            weights
                .iter()
                .enumerate()
                .map(|(k, w)| w * distributions[(k, i)])
                .sum()
        })
        .collect();
    ConvexDecomposition {
        n,
        weights,
        distributions,
        diagonal,
    }
}

impl ConvexDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `d_k`, one per basis determinant in rank order.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// M×D matrix of `f_ik` (row `k`, column `i`).
    pub fn distributions(&self) -> &DMatrix<f64> {
        &self.distributions
    }

    /// `F_i = Σ_k d_k f_ik`.
    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// `Σ_i F_i²`.
    pub fn diagonal_sum_of_squares(&self) -> f64 {
        self.diagonal.iter().map(|f| f * f).sum()
    }

    /// `Σ_{k<k'} d_k d_k' Σ_i (f_ik − f_ik')²`, the gap below `1/N`.
    pub fn spread(&self) -> f64 {
        let m = self.weights.len();
        let mut total = 0.0;
        for k in 0..m {
            if self.weights[k] == 0.0 {
                continue;
            }
            for kk in k + 1..m {
                if self.weights[kk] == 0.0 {
                    continue;
                }
                let dist: f64 = self
                    .distributions
                    .row(k)
                    .iter()
                    .zip(self.distributions.row(kk).iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                total += self.weights[k] * self.weights[kk] * dist;
            }
        }
        total
    }

    /// Right-hand side of the sum-of-squares identity, `1/N − spread`.
    pub fn sum_of_squares_identity(&self) -> f64 {
        1.0 / self.n as f64 - self.spread()
    }

    /// Weighted mean of the Shannon entropies of the profiles, `Σ_k d_k S[f_k]`.
    /// Every profile is flat on N orbitals, so this is `ln N` for normalized weights.
    pub fn mean_profile_entropy(&self) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let s: f64 = self
                    .distributions
                    .row(k)
                    .iter()
                    .filter(|&&f| f > 0.0)
                    .map(|&f| -f * f.ln())
                    .sum();
                w * s
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_diag(rdm: &ReducedDensityMatrix, expected: &[f64]) {
        let m = rdm.matrix();
        for i in 0..expected.len() {
            for j in 0..expected.len() {
                let want = if i == j { expected[i] } else { 0.0 };
                assert!(
                    (m[(i, j)] - c(want)).norm() < 1e-14,
                    "entry ({i},{j}) = {}",
                    m[(i, j)]
                );
            }
        }
    }

    #[test]
    fn full_shell_determinant() {
        let s = FermionState::from_coefficients(2, 2, &[(vec![0, 1], c(1.0))]).unwrap();
        assert_diag(&compute_rdm(&s), &[0.5, 0.5]);
    }

    #[test]
    fn localized_two_electron_example() {
        // modes (φ1+, φ1−, φ2+, φ2−); the pair φ1+ φ2− is tuple (0, 3)
        let s = FermionState::from_coefficients(4, 2, &[(vec![0, 3], c(1.0))]).unwrap();
        assert_diag(&compute_rdm(&s), &[0.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn two_determinant_superposition() {
        let s =
            FermionState::from_coefficients(4, 2, &[(vec![0, 1], c(1.0)), (vec![2, 3], c(1.0))])
                .unwrap();
        let rdm = compute_rdm(&s);
        assert_diag(&rdm, &[0.25; 4]);
        let dec = diagonal_decomposition(&s);
        let w = dec.weights();
        assert!((w[0] - 0.5).abs() < 1e-15 && (w[5] - 0.5).abs() < 1e-15);
        assert!(w[1..5].iter().all(|&x| x == 0.0));
        assert!(dec.diagonal().iter().all(|f| (f - 0.25).abs() < 1e-15));
    }

    #[test]
    fn single_determinant_has_one_weight() {
        let s = FermionState::from_coefficients(6, 3, &[(vec![1, 2, 5], Complex64::new(0.0, 2.0))])
            .unwrap();
        let dec = diagonal_decomposition(&s);
        let ones = dec
            .weights()
            .iter()
            .filter(|&&w| (w - 1.0).abs() < 1e-15)
            .count();
        let zeros = dec.weights().iter().filter(|&&w| w == 0.0).count();
        assert_eq!((ones, zeros), (1, 19));
        assert!(dec.spread() == 0.0);
    }

    #[test]
    fn hopping_term_sign() {
        // (|01⟩ + |02⟩)/√2: ρ_12 = (1/2)·(1/2)·(+1)(+1); both have orbital 1/2 at position 1
        let s =
            FermionState::from_coefficients(3, 2, &[(vec![0, 1], c(1.0)), (vec![0, 2], c(1.0))])
                .unwrap();
        let rho = compute_rdm(&s);
        assert!((rho.matrix()[(1, 2)] - c(0.25)).norm() < 1e-15);
        // (|01⟩ + |12⟩)/√2: moving 0 → 2 across occupied 1 flips the sign
        let s =
            FermionState::from_coefficients(3, 2, &[(vec![0, 1], c(1.0)), (vec![1, 2], c(1.0))])
                .unwrap();
        let rho = compute_rdm(&s);
        assert!((rho.matrix()[(0, 2)] - c(-0.25)).norm() < 1e-15);
    }

    #[test]
    fn validation() {
        let bad = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.2), c(0.5)]);
        assert!(matches!(
            ReducedDensityMatrix::new(bad),
            Err(Error::NotHermitian(_))
        ));
        let wrong_trace = DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.5), c(0.6)]));
        assert!(matches!(
            ReducedDensityMatrix::new(wrong_trace.clone()),
            Err(Error::NotDensityMatrix(_))
        ));
        assert!(ReducedDensityMatrix::from_hermitian(wrong_trace).is_ok());
        assert!(matches!(
            ReducedDensityMatrix::new(DMatrix::zeros(2, 3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn random_states_have_valid_rdms() {
        for seed in 0..20 {
            let s = FermionState::random_state(7, 3, seed).unwrap();
            let rho = compute_rdm(&s);
            assert!(ReducedDensityMatrix::new(rho.matrix().clone()).is_ok());
            let dec = diagonal_decomposition(&s);
            let total: f64 = dec.diagonal().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            for (a, b) in dec.diagonal().iter().zip(rho.diagonal()) {
                assert!((a - b).abs() < 1e-12);
            }
            assert!((dec.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!((dec.mean_profile_entropy() - 3f64.ln()).abs() < 1e-12);
        }
    }
}
