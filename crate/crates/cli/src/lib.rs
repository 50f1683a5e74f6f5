//! Batch front end for the cascade compiler.
//!
//! Exit codes: 0 success, 2 tolerance failure, 3 invalid input, 4 guard
//! exceeded, 1 I/O failure.

mod commands;
mod config;

pub use commands::{cmd_bench, cmd_compile, cmd_gen, cmd_verify, load_circuit, run, write_atomic, BenchRow};
pub use config::{BenchArgs, Command, CompileArgs, GenArgs, Kind, OutputFormat, RunConfig, SourceArgs, VerifyArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("limit exceeded: {0}")]
    Guard(String),
    #[error("tolerance exceeded: {0}")]
    Tolerance(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Tolerance(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Guard(_) => 4,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<qcasc_ir::IrError> for CliError {
    fn from(e: qcasc_ir::IrError) -> Self {
        match e {
            qcasc_ir::IrError::TooManyQubits { .. } => CliError::Guard(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<qcasc_cascade::CascadeError> for CliError {
    fn from(e: qcasc_cascade::CascadeError) -> Self {
        match e {
            qcasc_cascade::CascadeError::Ir(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<qcasc_precompute::PrecomputeError> for CliError {
    fn from(e: qcasc_precompute::PrecomputeError) -> Self {
        match e {
            qcasc_precompute::PrecomputeError::GuardExceeded { .. } => CliError::Guard(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<qcasc_parallel::ParallelError> for CliError {
    fn from(e: qcasc_parallel::ParallelError) -> Self {
        use qcasc_parallel::ParallelError as P;
        match e {
            P::GuardExceeded { .. } => CliError::Guard(e.to_string()),
            P::Precompute(inner) => inner.into(),
            P::Cascade(inner) => inner.into(),
            P::Ir(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<qcasc_grid2d::Grid2dError> for CliError {
    fn from(e: qcasc_grid2d::Grid2dError) -> Self {
        use qcasc_grid2d::Grid2dError as G;
        match e {
            G::Parallel(inner) => inner.into(),
            G::Ir(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<qcasc_verify::VerifyError> for CliError {
    fn from(e: qcasc_verify::VerifyError) -> Self {
        match e {
            qcasc_verify::VerifyError::GuardExceeded { .. } => CliError::Guard(e.to_string()),
            qcasc_verify::VerifyError::Ir(inner) => inner.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}
