//! Precomputation identities.
//!
//! A multiplexer `diag(U0, U1)` with control `c` over `k` target wires is
//! rewritten, in time order, as
//!
//! 1. `P` on the targets,
//! 2. a `c`-controlled diagonal `D` (or, for staircases, a `c`-controlled
//!    one-qubit `Q` on the bottom target `b`),
//! 3. `Phi` on `b` (absent when `Q` is used),
//! 4. a multiplexer `R` controlled by `(c, b)` on the middle targets.
//!
//! `P` and `R` do not depend on anything outside the block, so in a cascade
//! every `P` can be moved to the start and every `R` to the end.

mod identity;
mod valley;

pub use identity::{mn_precompute, precompute_identity, refined_stub_factor, PrecomputeParts, RefinedFactor};
pub use valley::{valley_cs, valley_stub_product, StubVector};

/// Largest target register handled with dense matrices.
pub const MAX_BLOCK_QUBITS: usize = 12;

#[derive(Debug, thiserror::Error)]
pub enum PrecomputeError {
    #[error("{what} is not unitary (defect {defect:.3e})")]
    NonUnitary { what: String, defect: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("layer {0} is not a single-qubit unitary")]
    NonSingleQubitLayer(usize),
    #[error("inconsistent decomposition dimensions: {0}")]
    InconsistentDimensions(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("stub values disagree with the predicted pattern by {0:.3e}")]
    StubMismatch(f64),
    #[error("block of {qubits} qubits exceeds the dense limit of {max}")]
    GuardExceeded { qubits: usize, max: usize },
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl From<qcasc_numerics::NumericsError> for PrecomputeError {
    fn from(e: qcasc_numerics::NumericsError) -> Self {
        match e {
            qcasc_numerics::NumericsError::NonUnitary { defect, .. } => {
                PrecomputeError::NonUnitary { what: "input".into(), defect }
            }
            other => PrecomputeError::Numeric(other.to_string()),
        }
    }
}

impl From<qcasc_ir::IrError> for PrecomputeError {
    fn from(e: qcasc_ir::IrError) -> Self {
        PrecomputeError::Numeric(e.to_string())
    }
}

impl From<qcasc_cascade::CascadeError> for PrecomputeError {
    fn from(e: qcasc_cascade::CascadeError) -> Self {
        match e {
            qcasc_cascade::CascadeError::NonUnitary { what, defect } => PrecomputeError::NonUnitary { what, defect },
            qcasc_cascade::CascadeError::NonSingleQubitLayer(j) => PrecomputeError::NonSingleQubitLayer(j),
            other => PrecomputeError::Numeric(other.to_string()),
        }
    }
}
