//! Equivalence checking on the data register.
//!
//! Ancillae of either circuit start in |0>; outputs are projected back onto
//! ancillae in |0>, and whatever norm leaks out of that subspace is reported
//! as the ancilla residual. Comparisons are phase-sensitive.

use qcasc_ir::{Circuit, MAX_DENSE_QUBITS};
use qcasc_numerics::{norm, op_norm_distance, random_state, Mat, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Widest register simulated with a dense statevector; wider circuits use
/// the sparse simulator.
pub const MAX_DENSE_STATE_QUBITS: usize = 20;
/// Widest data register for random trial states.
pub const MAX_SAMPLED_DATA_QUBITS: usize = 26;
/// Amplitudes below this are dropped by the sparse simulator.
pub const PRUNE: f64 = 1e-14;
/// Ancilla leakage above this marks a result as unclean.
pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("{what} register of {qubits} qubits exceeds the limit of {max}")]
    GuardExceeded { what: &'static str, qubits: usize, max: usize },
    #[error("data registers differ: {0} vs {1} qubits")]
    DataMismatch(usize, usize),
    #[error(transparent)]
    Ir(#[from] qcasc_ir::IrError),
    #[error(transparent)]
    Numerics(#[from] qcasc_numerics::NumericsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "sampled" => Ok(Mode::Sampled),
            other => Err(format!("unknown mode {other:?} (expected exact or sampled)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceResult {
    pub mode: Mode,
    /// Operator-norm distance of the data blocks, or the largest deviation
    /// over the trial states.
    pub distance: f64,
    pub trials: usize,
    pub ancilla_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

impl EquivalenceResult {
    pub fn ancilla_clean(&self) -> bool {
        self.ancilla_residual <= RESIDUAL_TOL
    }

    pub fn within(&self, tolerance: f64) -> bool {
        self.distance <= tolerance && self.ancilla_clean()
    }
}

fn data_width(c1: &Circuit, c2: &Circuit) -> Result<usize, VerifyError> {
    if c1.num_data_qubits != c2.num_data_qubits {
        return Err(VerifyError::DataMismatch(c1.num_data_qubits, c2.num_data_qubits));
    }
    Ok(c1.num_data_qubits)
}

/// Norm of the amplitudes with some ancilla (low `anc` bits) set.
fn leaked(full: &[C64], anc: usize) -> f64 {
    let mask = (1usize << anc) - 1;
    full.iter().enumerate().filter(|(i, _)| i & mask != 0).map(|(_, a)| a.norm_sqr()).fold(0.0, |s, x| s + x).sqrt()
}

/// Runs `c` on `psi (x) |0>`; returns the data part and the leaked norm.
pub fn run_on_data(c: &Circuit, psi: &[C64]) -> Result<(Vec<C64>, f64), VerifyError> {
    let n = c.total_qubits();
    if n > MAX_DENSE_STATE_QUBITS {
        return Ok(c.apply_sparse(psi, PRUNE)?);
    }
    let anc = c.num_ancilla;
    let mut full = vec![C64::new(0.0, 0.0); 1 << n];
    for (j, &a) in psi.iter().enumerate() {
        full[j << anc] = a;
    }
    let out = c.apply_state(&full)?;
    let data: Vec<C64> = (0..psi.len()).map(|j| out[j << anc]).collect();
    Ok((data, leaked(&out, anc)))
}

/// The data block of `c` with ancillae contracted against |0> on both sides,
/// and the largest leaked column norm.
pub fn data_block(c: &Circuit) -> Result<(Mat, f64), VerifyError> {
    let d = c.num_data_qubits;
    if d > MAX_DENSE_QUBITS {
        return Err(VerifyError::GuardExceeded { what: "data", qubits: d, max: MAX_DENSE_QUBITS });
    }
    let dim = 1usize << d;
    let n = c.total_qubits();
    if n <= MAX_DENSE_QUBITS {
        let anc = c.num_ancilla;
        let mut cols = Mat::zeros(1 << n, dim);
        for j in 0..dim {
            cols[(j << anc, j)] = C64::new(1.0, 0.0);
        }
        let out = c.apply_columns(&cols)?;
        let block = Mat::from_fn(dim, dim, |r, k| out[(r << anc, k)]);
        let leak = (0..dim).map(|k| leaked(&out.col(k), anc)).fold(0.0, f64::max);
        return Ok((block, leak));
    }
    let mut block = Mat::zeros(dim, dim);
    let mut leak = 0.0f64;
    for k in 0..dim {
        let mut e = vec![C64::new(0.0, 0.0); dim];
        e[k] = C64::new(1.0, 0.0);
        let (col, rest) = c.apply_sparse(&e, PRUNE)?;
        block.set_col(k, &col);
        leak = leak.max(rest);
    }
    Ok((block, leak))
}

/// Operator-norm distance between the data blocks of `c1` and `c2`.
pub fn check_exact(c1: &Circuit, c2: &Circuit) -> Result<EquivalenceResult, VerifyError> {
    data_width(c1, c2)?;
    let (a, la) = data_block(c1)?;
    let (b, lb) = data_block(c2)?;
    Ok(EquivalenceResult {
        mode: Mode::Exact,
        distance: op_norm_distance(&a, &b)?,
        trials: 0,
        ancilla_residual: la.max(lb),
        seed: None,
    })
}

/// As [`check_exact`], after rotating `c2`'s block by the global phase that
/// best aligns it with `c1`'s. For debugging only.
pub fn check_exact_modulo_phase(c1: &Circuit, c2: &Circuit) -> Result<EquivalenceResult, VerifyError> {
    data_width(c1, c2)?;
    let (a, la) = data_block(c1)?;
    let (b, lb) = data_block(c2)?;
    let overlap = b.adjoint().matmul(&a).trace();
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { C64::new(1.0, 0.0) };
    Ok(EquivalenceResult {
        mode: Mode::Exact,
        distance: op_norm_distance(&a, &b.scale(phase))?,
        trials: 0,
        ancilla_residual: la.max(lb),
        seed: None,
    })
}

/// Largest deviation between `c1` and `c2` over `trials` seeded Haar-random
/// data states.
pub fn check_sampled(c1: &Circuit, c2: &Circuit, trials: usize, seed: u64) -> Result<EquivalenceResult, VerifyError> {
    let d = data_width(c1, c2)?;
    if d > MAX_SAMPLED_DATA_QUBITS {
        return Err(VerifyError::GuardExceeded { what: "data", qubits: d, max: MAX_SAMPLED_DATA_QUBITS });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut distance, mut residual) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let psi = random_state(&mut rng, 1 << d);
        let (a, ra) = run_on_data(c1, &psi)?;
        let (b, rb) = run_on_data(c2, &psi)?;
        let diff: Vec<C64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        distance = distance.max(norm(&diff));
        residual = residual.max(ra).max(rb);
    }
    Ok(EquivalenceResult { mode: Mode::Sampled, distance, trials, ancilla_residual: residual, seed: Some(seed) })
}
