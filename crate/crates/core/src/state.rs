//! Pure states of N identical fermions in a D-dimensional single-particle space.
//!
//! A state is stored as one amplitude per basis determinant,
//! `|Ψ⟩ = Σ_t c_t a†_{t_0} … a†_{t_{N-1}} |0⟩` over sorted tuples `t`. In terms
//! of the fully antisymmetric coefficient tensor `w` this is `c_t = N! · w_t`,
//! so `Σ_t |c_t|² = 1` is the same statement as `Σ |w|² = 1/N!` over all
//! `D^N` index tuples.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::{self, OrbitalBasisIndex};
use crate::error::{Error, Result};
use crate::linalg;

/// Tolerance used when validating unitarity of a [`LocalUnitary`].
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Projected amplitudes at or below this norm count as the null vector.
pub const NULL_NORM: f64 = 1e-10;

/// A normalized N-fermion pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionState {
    basis: OrbitalBasisIndex,
    amplitudes: Vec<Complex64>,
}

impl FermionState {
    /// Builds a state from `(sorted tuple, amplitude)` pairs. Unlisted tuples
    /// are zero. The result is normalized.
    pub fn from_coefficients(
        d: usize,
        n: usize,
        entries: &[(Vec<usize>, Complex64)],
    ) -> Result<Self> {
        Self::from_coefficients_with_norm(d, n, entries).map(|(s, _)| s)
    }

    /// Like [`from_coefficients`](Self::from_coefficients), also returning the
    /// norm of the input before normalization.
    pub fn from_coefficients_with_norm(
        d: usize,
        n: usize,
        entries: &[(Vec<usize>, Complex64)],
    ) -> Result<(Self, f64)> {
        let basis = OrbitalBasisIndex::new(d, n)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); basis.size()];
        let mut seen = vec![false; basis.size()];
        for (tuple, c) in entries {
            let k = basis.rank(tuple)?;
            if std::mem::replace(&mut seen[k], true) {
                return Err(Error::DuplicateEntry(tuple.clone()));
            }
            amplitudes[k] = *c;
        }
        Self::from_amplitudes_with_norm(basis, amplitudes)
    }

    /// Builds a state from a dense amplitude vector in rank order.
    pub fn from_amplitudes(basis: OrbitalBasisIndex, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::from_amplitudes_with_norm(basis, amplitudes).map(|(s, _)| s)
    }

    fn from_amplitudes_with_norm(
        basis: OrbitalBasisIndex,
        mut amplitudes: Vec<Complex64>,
    ) -> Result<(Self, f64)> {
        if amplitudes.len() != basis.size() {
            return Err(Error::Dimension(format!(
                "expected {} amplitudes, got {}",
                basis.size(),
                amplitudes.len()
            )));
        }
        if amplitudes
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidParameter("non-finite amplitude".into()));
        }
        let norm = l2_norm(&amplitudes);
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        if !norm.is_finite() {
            return Err(Error::InvalidParameter("amplitude norm overflows".into()));
        }
        amplitudes.iter_mut().for_each(|c| *c /= norm);
        Ok((Self { basis, amplitudes }, norm))
    }

    /// Slater determinant of the given orbitals (each a length-D vector).
    ///
    /// The orbitals are orthonormalized first; the result depends only on
    /// their span, up to a global phase.
    pub fn slater_from_orbitals(orbitals: &[Vec<Complex64>]) -> Result<Self> {
        let n = orbitals.len();
        if n == 0 {
            return Err(Error::Dimension("need at least one orbital".into()));
        }
        let d = orbitals[0].len();
        if orbitals.iter().any(|o| o.len() != d) {
            return Err(Error::Dimension("orbitals have differing lengths".into()));
        }
        let m = DMatrix::from_fn(d, n, |i, k| orbitals[k][i]);
        Self::slater_from_matrix(&m)
    }

    /// Slater determinant of the columns of a D×N matrix.
    pub fn slater_from_matrix(orbitals: &DMatrix<Complex64>) -> Result<Self> {
        let (d, n) = orbitals.shape();
        let basis = OrbitalBasisIndex::new(d, n)?;
        let q = linalg::orthonormalize_columns(orbitals)?;
        let cols: Vec<usize> = (0..n).collect();
        let mut buf = Vec::with_capacity(n * n);
        let amplitudes = basis
            .tuples()
            .map(|rows| linalg::minor(&q, &rows, &cols, &mut buf))
            .collect();
        Self::from_amplitudes(basis, amplitudes)
    }

    /// Haar-like random state: i.i.d. complex Gaussian amplitudes, normalized.
    pub fn random_state(d: usize, n: usize, seed: u64) -> Result<Self> {
        Self::random_state_with(&mut ChaCha8Rng::seed_from_u64(seed), d, n)
    }

    pub fn random_state_with<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> Result<Self> {
        let basis = OrbitalBasisIndex::new(d, n)?;
        let amplitudes = (0..basis.size())
            .map(|_| linalg::complex_gaussian(rng))
            .collect();
        Self::from_amplitudes(basis, amplitudes)
    }

    /// Random Slater determinant built from a D×N complex Gaussian matrix.
    pub fn random_slater(d: usize, n: usize, seed: u64) -> Result<Self> {
        Self::random_slater_with(&mut ChaCha8Rng::seed_from_u64(seed), d, n)
    }

    pub fn random_slater_with<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> Result<Self> {
        OrbitalBasisIndex::new(d, n)?;
        let m = linalg::gaussian_matrix(rng, d, n);
        Self::slater_from_matrix(&m)
    }

    /// Applies the local transformation induced by a single-particle unitary:
    /// every creation operator `a†_i` is replaced by `Σ_k U_{ki} a†_k`.
    ///
    /// On amplitudes this is the N-th compound matrix of `U`:
    /// `c'_T = Σ_S det(U[T, S]) c_S`.
    pub fn apply_local_unitary(&self, u: &LocalUnitary) -> Result<Self> {
        let d = self.basis.d();
        if u.dim() != d {
            return Err(Error::Dimension(format!(
                "unitary is {0}x{0}, state has D = {d}",
                u.dim()
            )));
        }
        let n = self.basis.n();
        let occupied: Vec<(Vec<usize>, Complex64)> = self
            .basis
            .tuples()
            .zip(&self.amplitudes)
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(t, c)| (t, *c))
            .collect();
        let mut buf = Vec::with_capacity(n * n);
        let amplitudes = self
            .basis
            .tuples()
            .map(|rows| {
                occupied
                    .iter()
                    .map(|(cols, c)| linalg::minor(u.matrix(), &rows, cols, &mut buf) * c)
                    .sum()
            })
            .collect();
        Self::from_amplitudes(self.basis.clone(), amplitudes)
    }

    /// Contracts the state with the single-particle bra `⟨a|`, i.e. applies
    /// `Σ_i conj(a_i) a_i`, producing an unnormalized (N−1)-fermion vector.
    ///
    /// Returns the norm of that vector and, unless it is at most
    /// [`NULL_NORM`], the normalized (N−1)-fermion state.
    pub fn contract(&self, a: &[Complex64]) -> Result<(f64, Option<FermionState>)> {
        let (d, n) = (self.d(), self.n());
        if a.len() != d {
            return Err(Error::Dimension(format!(
                "direction has length {}, expected {d}",
                a.len()
            )));
        }
        if n < 2 {
            return Err(Error::Unsupported(
                "contraction needs at least two particles".into(),
            ));
        }
        let target = OrbitalBasisIndex::new(d, n - 1)?;
        let mut out = vec![Complex64::new(0.0, 0.0); target.size()];
        for (tuple, c) in self.entries() {
            for &i in &tuple {
                let (rest, sign) = basis::annihilate_sorted(&tuple, i).unwrap();
                out[target.rank_unchecked(&rest)] += a[i].conj() * c * sign as f64;
            }
        }
        let norm = l2_norm(&out);
        if norm <= NULL_NORM {
            return Ok((norm, None));
        }
        out.iter_mut().for_each(|c| *c /= norm);
        Ok((
            norm,
            Some(FermionState {
                basis: target,
                amplitudes: out,
            }),
        ))
    }

    pub fn basis(&self) -> &OrbitalBasisIndex {
        &self.basis
    }

    pub fn d(&self) -> usize {
        self.basis.d()
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    /// Amplitudes in rank order.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of a sorted tuple.
    pub fn amplitude(&self, tuple: &[usize]) -> Result<Complex64> {
        Ok(self.amplitudes[self.basis.rank(tuple)?])
    }

    /// `(tuple, amplitude)` for every nonzero amplitude, in rank order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, Complex64)> + '_ {
        self.basis
            .tuples()
            .zip(self.amplitudes.iter().copied())
            .filter(|(_, c)| c.norm_sqr() > 0.0)
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amplitudes)
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &FermionState) -> Result<Complex64> {
        if self.basis != other.basis {
            return Err(Error::Dimension("states live in different spaces".into()));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Overwrites one amplitude without renormalizing. Only for exercising
    /// failure paths in verification tooling.
    #[doc(hidden)]
    pub fn corrupt_amplitude(&mut self, rank: usize, value: Complex64) {
        self.amplitudes[rank] = value;
    }
}

fn l2_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// A unitary acting on the single-particle space.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary {
    matrix: DMatrix<Complex64>,
    tolerance: f64,
}

impl LocalUnitary {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::with_tolerance(matrix, UNITARY_TOLERANCE)
    }

    pub fn with_tolerance(matrix: DMatrix<Complex64>, tolerance: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "unitary must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let d = matrix.nrows();
        let gram = matrix.adjoint() * &matrix;
        let deviation = linalg::max_abs_diff(&gram, &DMatrix::identity(d, d));
        if !(deviation <= tolerance) {
            return Err(Error::NotUnitary(deviation));
        }
        Ok(Self { matrix, tolerance })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            matrix: DMatrix::identity(d, d),
            tolerance: UNITARY_TOLERANCE,
        }
    }

    /// Diagonal unitary `diag(e^{iα_0}, …)`.
    pub fn phases(angles: &[f64]) -> Self {
        let diag: Vec<Complex64> = angles
            .iter()
            .map(|&a| Complex64::from_polar(1.0, a))
            .collect();
        Self {
            matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)),
            tolerance: UNITARY_TOLERANCE,
        }
    }

    /// Haar-distributed unitary (Gram–Schmidt of a complex Gaussian matrix).
    pub fn random(d: usize, seed: u64) -> Result<Self> {
        Self::random_with(&mut ChaCha8Rng::seed_from_u64(seed), d)
    }

    pub fn random_with<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<Self> {
        let q = linalg::orthonormalize_columns(&linalg::gaussian_matrix(rng, d, d))?;
        Self::new(q)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `self` followed by `next`, i.e. the matrix product `next · self`.
    pub fn then(&self, next: &LocalUnitary) -> Result<Self> {
        Self::new(&next.matrix * &self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn e(d: usize, i: usize) -> Vec<Complex64> {
        (0..d).map(|k| c(if k == i { 1.0 } else { 0.0 })).collect()
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn single_determinant_full_shell() {
        let s = FermionState::from_coefficients(2, 2, &[(vec![0, 1], c(1.0))]).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0)]);
    }

    #[test]
    fn two_determinant_superposition_is_normalized() {
        let s =
            FermionState::from_coefficients(4, 2, &[(vec![0, 1], c(1.0)), (vec![2, 3], c(1.0))])
                .unwrap();
        let h = FRAC_1_SQRT_2;
        let zero = c(0.0);
        assert!(close(
            s.amplitudes(),
            &[c(h), zero, zero, zero, zero, c(h)],
            1e-15
        ));
    }

    #[test]
    fn random_coefficients_normalize() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let basis = OrbitalBasisIndex::new(6, 3).unwrap();
        let entries: Vec<_> = basis
            .tuples()
            .map(|t| (t, linalg::complex_gaussian(&mut rng) * 3.7))
            .collect();
        let (s, pre) = FermionState::from_coefficients_with_norm(6, 3, &entries).unwrap();
        assert!(pre > 1.0);
        let norm: f64 = s
            .amplitudes()
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!((norm - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(
            FermionState::from_coefficients(4, 2, &[(vec![0, 1], c(1.0)), (vec![0, 1], c(2.0))]),
            Err(Error::DuplicateEntry(vec![0, 1]))
        );
        assert_eq!(
            FermionState::from_coefficients(4, 2, &[(vec![0, 1], c(0.0))]),
            Err(Error::ZeroState)
        );
        assert_eq!(
            FermionState::from_coefficients(4, 2, &[]),
            Err(Error::ZeroState)
        );
        assert!(matches!(
            FermionState::from_coefficients(4, 2, &[(vec![1, 0], c(1.0))]),
            Err(Error::InvalidTuple { .. })
        ));
        assert!(matches!(
            FermionState::random_state(2, 3, 0),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            FermionState::random_slater(3, 4, 0),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn slater_of_standard_basis() {
        let s = FermionState::slater_from_orbitals(&[e(2, 0), e(2, 1)]).unwrap();
        assert!(close(s.amplitudes(), &[c(1.0)], 1e-15));
    }

    #[test]
    fn slater_depends_on_span_only() {
        let mixed: Vec<Complex64> = vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(0.0), c(0.0)];
        let s = FermionState::slater_from_orbitals(&[e(4, 0), mixed]).unwrap();
        let expected = FermionState::from_coefficients(4, 2, &[(vec![0, 1], c(1.0))]).unwrap();
        assert!(close(s.amplitudes(), expected.amplitudes(), 1e-14));
    }

    #[test]
    fn slater_rejects_dependent_orbitals() {
        let twice = vec![c(2.0), c(0.0), c(0.0)];
        assert!(matches!(
            FermionState::slater_from_orbitals(&[e(3, 0), twice]),
            Err(Error::DegenerateOrbitals(_))
        ));
    }

    #[test]
    fn random_generation_is_deterministic() {
        assert_eq!(
            FermionState::random_state(6, 3, 42).unwrap(),
            FermionState::random_state(6, 3, 42).unwrap()
        );
        assert_eq!(
            FermionState::random_slater(6, 3, 42).unwrap(),
            FermionState::random_slater(6, 3, 42).unwrap()
        );
        assert_ne!(
            FermionState::random_state(6, 3, 42).unwrap(),
            FermionState::random_state(6, 3, 43).unwrap()
        );
    }

    #[test]
    fn identity_unitary_leaves_state() {
        let s = FermionState::random_state(5, 2, 1).unwrap();
        let t = s.apply_local_unitary(&LocalUnitary::identity(5)).unwrap();
        assert!(close(s.amplitudes(), t.amplitudes(), 1e-14));
    }

    #[test]
    fn diagonal_phases_multiply_amplitude() {
        let angles = [0.3, -1.1, 2.0, 0.7];
        let s = FermionState::from_coefficients(4, 2, &[(vec![0, 1], c(1.0))]).unwrap();
        let t = s
            .apply_local_unitary(&LocalUnitary::phases(&angles))
            .unwrap();
        let expected = Complex64::from_polar(1.0, angles[0] + angles[1]);
        assert!((t.amplitude(&[0, 1]).unwrap() - expected).norm() < 1e-15);
        assert!(t.amplitudes()[1..].iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn unitary_validation() {
        let m = DMatrix::from_element(3, 3, c(1.0));
        assert!(matches!(LocalUnitary::new(m), Err(Error::NotUnitary(_))));
        let rect = DMatrix::<Complex64>::identity(3, 2);
        assert!(matches!(LocalUnitary::new(rect), Err(Error::Dimension(_))));
        let s = FermionState::random_state(4, 2, 0).unwrap();
        assert!(matches!(
            s.apply_local_unitary(&LocalUnitary::identity(5)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn compound_matrix_is_a_homomorphism() {
        for d in 4..=6 {
            for n in 2..=3 {
                let s = FermionState::random_state(d, n, d as u64 * 10 + n as u64).unwrap();
                let u = LocalUnitary::random(d, 1000 + d as u64).unwrap();
                let v = LocalUnitary::random(d, 2000 + d as u64).unwrap();
                let stepwise = s
                    .apply_local_unitary(&u)
                    .unwrap()
                    .apply_local_unitary(&v)
                    .unwrap();
                let combined = s.apply_local_unitary(&u.then(&v).unwrap()).unwrap();
                assert!(close(stepwise.amplitudes(), combined.amplitudes(), 1e-9));
                assert!((stepwise.norm() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn slater_span_invariance_up_to_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = linalg::gaussian_matrix(&mut rng, 6, 3);
        // change of basis within the span
        let mix = linalg::gaussian_matrix(&mut rng, 3, 3);
        let a = FermionState::slater_from_matrix(&m).unwrap();
        let b = FermionState::slater_from_matrix(&(&m * mix)).unwrap();
        let ov = a.overlap(&b).unwrap().norm();
        assert!((ov - 1.0).abs() < 1e-10);
    }

    #[test]
    fn contraction_of_determinant() {
        let s = FermionState::from_coefficients(4, 3, &[(vec![0, 1, 2], c(1.0))]).unwrap();
        // ⟨e1| removes orbital 1 at position 1 → sign −1
        let (norm, out) = s.contract(&e(4, 1)).unwrap();
        assert!((norm - 1.0).abs() < 1e-15);
        let out = out.unwrap();
        assert_eq!(out.n(), 2);
        assert!((out.amplitude(&[0, 2]).unwrap() - c(-1.0)).norm() < 1e-15);
        let (norm, out) = s.contract(&e(4, 3)).unwrap();
        assert_eq!(norm, 0.0);
        assert!(out.is_none());
    }
}
