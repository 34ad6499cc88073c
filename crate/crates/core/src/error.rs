use thiserror::Error;

/// Errors produced by the fermisep library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    Dimension(String),

    #[error("invalid orbital tuple {tuple:?}: {reason}")]
    InvalidTuple { tuple: Vec<usize>, reason: String },

    #[error("rank {index} out of range for basis of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("duplicate entry for orbital tuple {0:?}")]
    DuplicateEntry(Vec<usize>),

    #[error("state has zero norm")]
    ZeroState,

    #[error("orbitals are linearly dependent (residual norm {0:.3e})")]
    DegenerateOrbitals(f64),

    #[error("matrix is not unitary: max deviation of U^dagger U from identity is {0:.3e}")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian: max asymmetry {0:.3e}")]
    NotHermitian(f64),

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resource limit: dense tensor with {required} entries exceeds cap {cap}")]
    ResourceLimit { required: u128, cap: u128 },

    #[error("malformed state file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
