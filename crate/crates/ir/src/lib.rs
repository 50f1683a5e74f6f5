//! Circuit intermediate representation.
//!
//! Qubit 0 is the most significant bit of a basis index. A gate's matrix acts
//! on its qubit list with the first listed qubit most significant. Gates are
//! stored in time order, so [`Circuit::unitary_of`] is `G_n ... G_1`.

pub mod circuit;
pub mod depth;
pub mod gate;
pub mod json;
pub mod lower;
pub mod report;
mod sim;
pub mod sparse;
pub mod std_gates;

pub use circuit::{Circuit, Connectivity, MAX_DENSE_QUBITS, MAX_STATE_QUBITS};
pub use depth::{depth, layers};
pub use gate::{Control, Gate};
pub use json::{circuit_from_json, circuit_to_json, MatrixJson};
pub use lower::{fuse_basis, lower_to_basis};
pub use report::CompilationReport;
pub use sparse::SparseState;

#[derive(Debug, thiserror::Error)]
pub enum IrError {
    #[error("qubit {qubit} out of range for a {total}-qubit register")]
    QubitOutOfRange { qubit: usize, total: usize },
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("{what} is not unitary (defect {defect:.3e})")]
    NonUnitary { what: String, defect: f64 },
    #[error("{qubits} qubits exceeds the limit of {max}")]
    TooManyQubits { qubits: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("circuit contains a non-basis gate ({0})")]
    NotLowered(&'static str),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("malformed circuit JSON: {0}")]
    Json(String),
}
