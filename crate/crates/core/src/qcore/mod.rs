//! Dense complex state-vector and density-matrix kernel.
//!
//! Operators carry the layout of their support and act on any state whose
//! layout contains those registers, so scenario-sized states never need
//! full-space matrices.

mod born;
mod density;
mod error;
mod layout;
mod operator;
mod state;

pub use born::{born_table, born_table_within, outcome_tuple, BornTable, Sign};
pub use density::{partial_trace, DensityMatrix, Reducible};
pub use error::QError;
pub use layout::{Embedding, Register, RegisterLayout};
pub use operator::{commutes, commutes_embedded, on_common_support, paulis, spectral_projectors, OpFlags, Operator};
pub use state::QState;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Tolerances: `structural` for hermitian/unitary/involutory flags and
/// commutation, `numeric` for asserted values.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub structural: f64,
    pub numeric: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { structural: 1e-10, numeric: 1e-12 }
    }
}

/// Kronecker composition of two operators or two states.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Result<Self, QError>;
}

impl Tensor for Operator {
    fn tensor(&self, other: &Self) -> Result<Self, QError> {
        Operator::tensor(self, other)
    }
}

impl Tensor for QState {
    fn tensor(&self, other: &Self) -> Result<Self, QError> {
        QState::tensor(self, other)
    }
}

/// Free-function form of [`Tensor::tensor`].
pub fn tensor<T: Tensor>(a: &T, b: &T) -> Result<T, QError> {
    a.tensor(b)
}
