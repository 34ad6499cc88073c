//! Separability and entanglement of pure states of N identical fermions.
//!
//! A pure N-fermion state is unentangled when it is a single Slater
//! determinant. This crate represents such states in the determinant basis,
//! computes the single-particle reduced density matrix ρ, and decides
//! separability from `Tr ρ² = 1/N`, `S[ρ] = ln N` or `ρ² = ρ/N`.
//!
//! ```
//! use fermisep::{analyze, FermionState, DEFAULT_TOLERANCE};
//! use num_complex::Complex64;
//!
//! let one = Complex64::new(1.0, 0.0);
//! let pair = FermionState::from_coefficients(4, 2, &[(vec![0, 1], one), (vec![2, 3], one)])?;
//! let report = analyze(&pair, DEFAULT_TOLERANCE)?;
//! assert!(!report.separable());
//! assert!((report.e_l - 0.25).abs() < 1e-12);
//! # Ok::<(), fermisep::Error>(())
//! ```

pub mod basis;
pub mod error;
pub mod io;
mod linalg;
pub mod oracle;
pub mod rdm;
pub mod separability;
pub mod spectral;
pub mod state;

pub use basis::OrbitalBasisIndex;
pub use error::{Error, Result};
pub use linalg::max_abs_diff;
pub use rdm::{compute_rdm, diagonal_decomposition, ConvexDecomposition, ReducedDensityMatrix};
pub use separability::{
    analyze, analyze_detailed, esbl_check, idempotency_defect, slater_rank_two_fermions, Analysis,
    EsblOutcome, EsblSample, SeparabilityReport, DEFAULT_ESBL_SAMPLES, DEFAULT_TOLERANCE,
};
pub use spectral::{eigenvalues, purity, shannon_entropy, von_neumann_entropy, Spectrum};
pub use state::{FermionState, LocalUnitary};

pub use nalgebra::DMatrix;
pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/basis.md")]
    mod basis {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/reduced_density_matrix.md")]
    mod reduced_density_matrix {}
    #[doc = include_str!("../../../book/src/criteria.md")]
    mod criteria {}
    #[doc = include_str!("../../../book/src/local_unitaries.md")]
    mod local_unitaries {}
    #[doc = include_str!("../../../book/src/projection_test.md")]
    mod projection_test {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
