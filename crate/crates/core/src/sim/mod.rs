//! Statevector simulation core: register layouts, gates, state evolution,
//! Fourier-transform circuits, and interference measurements.

pub mod gate;
pub mod layout;
pub mod measure;
pub mod qft;
pub mod state;

pub use gate::{Circuit, ControlBit, GateOp};
pub use layout::{LayoutBuilder, RegisterLayout, Role, DEFAULT_QUBIT_CAPACITY};
pub use measure::{hadamard_test, hadamard_test_sampled};
pub use qft::{inverse_qft_circuit, qft_circuit};
pub use state::{unitary_matrix, StateVector};
