//! Compiler passes over control cascades.
//!
//! Every pass rewrites each multiplexer with the precomputation identity,
//! moves all preprocessing gates to the start and all postprocessing
//! multiplexers to the end (they touch disjoint wires or share only control
//! wires), and then deals with the sequential middle part:
//!
//! - [`compile_exact_diagonal`] keeps the chain of controlled diagonals;
//! - [`compile_select_exact`] and [`compile_load_approx`] apply the phases
//!   through ancilla registers prepared in parallel;
//! - [`compile_mn_log_depth`] recurses on the staircase formed by the
//!   controlled one-qubit gates that remain.

mod ancilla;
mod exact;
mod mn;
mod phase;

use std::fmt;
use std::str::FromStr;

use qcasc_ir::{fuse_basis, lower_to_basis, Circuit, CompilationReport};

pub use ancilla::{compile_load_approx, compile_select_exact, fanout, multiplexed_phase_load, multiplexed_phase_select};
pub use exact::{block_plans, compile_exact_diagonal, BlockPlan};
pub use mn::{compile_mn_log_depth, mn_log_depth_stages, MnStages, DEFAULT_BLOCK_SIZE};
pub use phase::{phase_tables_of, turns, ApproxBudget, PhaseTable};

/// Widest block body the exact pass synthesizes.
pub const MAX_EXACT_K: usize = 6;
/// Widest block body the ancilla passes accept.
pub const MAX_ANCILLA_K: usize = 4;

#[derive(Debug, thiserror::Error)]
pub enum ParallelError {
    #[error("{what} is not unitary (defect {defect:.3e})")]
    NonUnitary { what: String, defect: f64 },
    #[error("{what} is {value}, limit is {max}")]
    GuardExceeded { what: &'static str, value: usize, max: usize },
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("phase {index} has modulus {modulus}")]
    NonUnitModulus { index: usize, modulus: f64 },
    #[error("block size must be at least 2, got {0}")]
    InvalidBlockSize(usize),
    #[error("empty cascade")]
    Empty,
    #[error(transparent)]
    Precompute(#[from] qcasc_precompute::PrecomputeError),
    #[error(transparent)]
    Cascade(#[from] qcasc_cascade::CascadeError),
    #[error(transparent)]
    Ir(#[from] qcasc_ir::IrError),
}

/// Output of a pass: the basis-level circuit, the block-level circuit it was
/// lowered from, and the cost report of the basis circuit.
#[derive(Clone, Debug)]
pub struct Compilation {
    pub circuit: Circuit,
    pub structured: Circuit,
    pub report: CompilationReport,
}

impl Compilation {
    /// Lowers and fuses `structured` and measures the result.
    pub fn finish(structured: Circuit, apriori_error: f64) -> Result<Self, ParallelError> {
        let circuit = fuse_basis(&lower_to_basis(&structured)?)?;
        let report = CompilationReport::of(&circuit, apriori_error)?;
        Ok(Compilation { circuit, structured, report })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pass {
    ExactDiagonal,
    Select,
    Load,
    MnLog,
}

impl FromStr for Pass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact-diagonal" => Ok(Pass::ExactDiagonal),
            "select" => Ok(Pass::Select),
            "load" => Ok(Pass::Load),
            "mn-log" => Ok(Pass::MnLog),
            other => Err(format!("unknown pass '{other}' (expected exact-diagonal, select, load or mn-log)")),
        }
    }
}

impl fmt::Display for Pass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pass::ExactDiagonal => "exact-diagonal",
            Pass::Select => "select",
            Pass::Load => "load",
            Pass::MnLog => "mn-log",
        })
    }
}
