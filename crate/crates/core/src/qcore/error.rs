use thiserror::Error;

/// Failures of the dense linear-algebra kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("invalid register layout: {0}")]
    InvalidLayout(String),
    #[error("label clash: register `{0}` appears on both sides")]
    LabelClash(String),
    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("unknown register label `{0}`")]
    UnknownLabel(String),
    #[error("operator is not unitary")]
    NotUnitary,
    #[error("operator is not hermitian")]
    NotHermitian,
    #[error("operator is not involutory (O^2 != I)")]
    NotInvolutory,
    #[error("expectation value has imaginary residue {residue:e}")]
    NonrealResult { residue: f64 },
    #[error("state norm {norm} is not within tolerance of 1")]
    NotNormalized { norm: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("observables {first} and {second} do not commute")]
    ContextIncompatible { first: usize, second: usize },
    #[error("branch probability {probability:e} is below tolerance")]
    ZeroBranch { probability: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}
