//! Separability verdicts and entanglement measures.
//!
//! A pure N-fermion state is separable exactly when it is a single Slater
//! determinant. For its reduced density matrix ρ this is equivalent to each of
//!
//! * `Tr ρ² = 1/N` (the maximum possible value),
//! * `S[ρ] = ln N` (the minimum possible value),
//! * `ρ² = ρ/N`.
//!
//! The distances from the extremal values,
//! `E_L = 1/N − Tr ρ²` and `E_VN = S[ρ] − ln N`, are nonnegative and vanish
//! only on separable states.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rdm::{compute_rdm, ReducedDensityMatrix};
use crate::spectral::{self, Spectrum};
use crate::state::FermionState;

/// Default tolerance for the verdicts of [`analyze`].
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Eigenvalues above this count towards the two-fermion Slater rank.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Default number of random directions used by [`esbl_check`].
pub const DEFAULT_ESBL_SAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityReport {
    /// `Tr ρ²`.
    pub purity: f64,
    /// `−Tr ρ ln ρ` in nats.
    pub entropy: f64,
    /// `1/N − Tr ρ²`.
    pub e_l: f64,
    /// `S[ρ] − ln N`.
    pub e_vn: f64,
    /// `max_ij |(ρ² − ρ/N)_ij|`.
    pub idempotency_defect: f64,
    pub verdict_purity: bool,
    pub verdict_entropy: bool,
    pub verdict_idempotency: bool,
    pub tolerance: f64,
}

impl SeparabilityReport {
    /// The reported verdict. Purity decides; the other two are diagnostics.
    pub fn separable(&self) -> bool {
        self.verdict_purity
    }

    /// Whether the three criteria agree.
    pub fn verdicts_agree(&self) -> bool {
        self.verdict_purity == self.verdict_entropy
            && self.verdict_purity == self.verdict_idempotency
    }
}

/// Everything computed along the way by [`analyze_detailed`].
#[derive(Debug, Clone)]
pub struct Analysis {
    pub rdm: ReducedDensityMatrix,
    pub spectrum: Spectrum,
    pub report: SeparabilityReport,
}

pub fn analyze(state: &FermionState, tolerance: f64) -> Result<SeparabilityReport> {
    analyze_detailed(state, tolerance).map(|a| a.report)
}

pub fn analyze_detailed(state: &FermionState, tolerance: f64) -> Result<Analysis> {
    if !(tolerance >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tolerance} must be >= 0"
        )));
    }
    let rdm = compute_rdm(state);
    let spectrum = spectral::eigenvalues(&rdm)?;
    let report = report_from_parts(&rdm, &spectrum, state.n(), tolerance)?;
    Ok(Analysis {
        rdm,
        spectrum,
        report,
    })
}

/// Builds a report from an already computed ρ and its spectrum.
pub fn report_from_parts(
    rdm: &ReducedDensityMatrix,
    spectrum: &Spectrum,
    n: usize,
    tolerance: f64,
) -> Result<SeparabilityReport> {
    let nf = n as f64;
    let purity = spectral::purity(rdm);
    let entropy = spectrum.von_neumann_entropy()?;
    let e_l = 1.0 / nf - purity;
    let e_vn = entropy - nf.ln();
    let defect = idempotency_defect(rdm, n);
    Ok(SeparabilityReport {
        purity,
        entropy,
        e_l,
        e_vn,
        idempotency_defect: defect,
        verdict_purity: e_l.abs() <= tolerance,
        // S is flat to first order around the separable point
        verdict_entropy: e_vn.abs() <= tolerance * nf,
        verdict_idempotency: defect <= tolerance,
        tolerance,
    })
}

/// `max_ij |(ρ² − ρ/N)_ij|`; zero iff every nonzero eigenvalue equals `1/N`.
pub fn idempotency_defect(rdm: &ReducedDensityMatrix, n: usize) -> f64 {
    let rho = rdm.matrix();
    let square: DMatrix<Complex64> = rho * rho;
    let inv_n = 1.0 / n as f64;
    square
        .iter()
        .zip(rho.iter())
        .map(|(s, r)| (s - r * inv_n).norm())
        .fold(0.0, f64::max)
}

/// Slater rank of a two-fermion state: half the number of nonzero
/// eigenvalues of ρ, which come in degenerate pairs.
pub fn slater_rank_two_fermions(state: &FermionState) -> Result<usize> {
    two_fermion_spectrum(state).map(|s| s.count_above(RANK_THRESHOLD).div_ceil(2))
}

fn two_fermion_spectrum(state: &FermionState) -> Result<Spectrum> {
    if state.n() != 2 {
        return Err(Error::Unsupported(format!(
            "two-fermion Slater rank needs N = 2, got N = {}",
            state.n()
        )));
    }
    spectral::eigenvalues(&compute_rdm(state))
}

/// One sampled direction of [`esbl_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsblSample {
    /// Norm of `⟨a|Ψ⟩` before normalization.
    pub projection_norm: f64,
    /// Largest eigenvalue weight outside the leading pair found at the
    /// two-fermion end of the projection chain (0 for a rank-one result).
    pub residual: f64,
    /// Whether the projection was null or passed the recursive check.
    pub rank_one: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EsblOutcome {
    pub separable: bool,
    /// Maximum residual seen anywhere in the check.
    pub residual: f64,
    /// Top-level samples. Empty for N = 2, where the two-fermion test is
    /// applied directly.
    pub samples: Vec<EsblSample>,
}

/// Randomized projection test for Slater rank one.
///
/// A state has Slater rank one iff, for every single-particle `|a⟩`, the
/// contraction `⟨a|Ψ⟩` is zero or an (N−1)-fermion state of Slater rank one.
/// This checks `samples` random directions at each level, recursing down to
/// two fermions, where the Slater rank is read from the spectrum. Entangled
/// states are missed only on a measure-zero set of directions; separable
/// states always pass.
pub fn esbl_check(state: &FermionState, samples: usize, seed: u64) -> Result<EsblOutcome> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    if state.n() < 2 {
        return Err(Error::Unsupported("projection test needs N >= 2".into()));
    }
    if state.n() == 2 {
        let (rank_one, residual) = two_fermion_leaf(state)?;
        return Ok(EsblOutcome {
            separable: rank_one,
            residual,
            samples: Vec::new(),
        });
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let sub_seeds: Vec<u64> = (0..samples).map(|_| master.next_u64()).collect();
    let mut out = Vec::with_capacity(samples);
    for sub_seed in sub_seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
        let a = random_direction(&mut rng, state.d());
        let (projection_norm, projected) = state.contract(&a)?;
        let (rank_one, residual) = match projected {
            None => (true, 0.0),
            Some(p) => check_recursive(&p, samples, &mut rng)?,
        };
        out.push(EsblSample {
            projection_norm,
            residual,
            rank_one,
        });
    }
    Ok(EsblOutcome {
        separable: out.iter().all(|s| s.rank_one),
        residual: out.iter().map(|s| s.residual).fold(0.0, f64::max),
        samples: out,
    })
}

fn check_recursive<R: Rng>(
    state: &FermionState,
    samples: usize,
    rng: &mut R,
) -> Result<(bool, f64)> {
    match state.n() {
        1 => Ok((true, 0.0)),
        2 => two_fermion_leaf(state),
        _ => {
            let mut all = true;
            let mut worst: f64 = 0.0;
            for _ in 0..samples {
                let a = random_direction(rng, state.d());
                if let (_, Some(p)) = state.contract(&a)? {
                    let (ok, residual) = check_recursive(&p, samples, rng)?;
                    all &= ok;
                    worst = worst.max(residual);
                }
            }
            Ok((all, worst))
        }
    }
}

fn two_fermion_leaf(state: &FermionState) -> Result<(bool, f64)> {
    let spectrum = two_fermion_spectrum(state)?;
    let rank = spectrum.count_above(RANK_THRESHOLD).div_ceil(2);
    let residual = spectrum.eigenvalues()[2..].iter().map(|l| l.max(0.0)).sum();
    Ok((rank <= 1, residual))
}

fn random_direction<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex64> {
    let mut a: Vec<Complex64> = (0..d).map(|_| linalg::complex_gaussian(rng)).collect();
    let norm = a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    a.iter_mut().for_each(|c| *c /= norm);
    a
}
