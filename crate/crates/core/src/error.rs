use thiserror::Error;

/// Errors raised by the operator algebra, the generator builders and the
/// model layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector of length {0} is not a perfect square")]
    NonSquareLength(usize),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("steady state is not unique: kernel has dimension {kernel_dim}")]
    NonUniqueSteadyState { kernel_dim: usize },

    #[error("kernel vector has vanishing trace")]
    TracelessKernel,

    #[error("bosonic mode at energy {eps} does not lie above the chemical potential {mu}")]
    InvalidBosonicMode { eps: f64, mu: f64 },

    #[error("H and N do not commute (deviation {0:.3e})")]
    NonCommuting(f64),

    #[error("coupling operator {index} of bath `{bath}` has no local reference frequency")]
    MissingReferenceFrequency { bath: String, index: usize },

    #[error("unsupported spectral profile: {0}")]
    UnsupportedProfile(String),

    #[error("expected {expected} baths, found {found}")]
    BathCount { expected: usize, found: usize },

    #[error("generator bundle has no dissipative part for bath `{0}`")]
    MissingBath(String),

    #[error("Fock truncation not converged: cutoff {cutoff} -> {doubled} changed currents by {rel_change:.3e} (relative)")]
    NotConverged {
        cutoff: usize,
        doubled: usize,
        rel_change: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("linear solve failed: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;
