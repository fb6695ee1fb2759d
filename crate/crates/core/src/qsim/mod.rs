//! Dense statevector simulation of small qubit registers.
//!
//! Basis index bit `i` is qubit `i`; qubit 0 is the least significant bit, so
//! `|101⟩` is index 5. Gates act in place on a [`StateVector`].

mod gates;
mod state;

pub use gates::{hadamard, rot, rx, ry, rz, Matrix2};
pub use num_complex::Complex64;
pub use state::{amplitude_encode, basis_encode, bloch_state, BlochAngles, StateVector, MAX_QUBITS};

/// Accepted deviation of a register's squared norm from 1.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QsimError {
    #[error("a register needs between 1 and {MAX_QUBITS} qubits, got {0}")]
    QubitCount(usize),
    #[error("qubit {qubit} is out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("control and target are both qubit {0}")]
    SameQubit(usize),
    #[error("basis index {index} does not fit in {num_qubits} qubits")]
    BasisIndex { index: usize, num_qubits: usize },
    #[error("amplitude vector length {0} is not a power of two")]
    Length(usize),
    #[error("amplitude vector has norm {0}, expected 1")]
    NotNormalized(f64),
    #[error("Bloch angles (colatitude {colatitude}, longitude {longitude}) are out of range")]
    BlochAngles { colatitude: f64, longitude: f64 },
}
