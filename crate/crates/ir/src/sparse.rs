//! Sparse statevector simulation for registers too wide for a dense vector.
//!
//! Useful when most wires stay in computational basis states, as ancilla
//! registers driven by reversible logic do. Amplitudes below a pruning
//! threshold are dropped after every gate.

use std::collections::HashMap;

use qcasc_numerics::C64;

use crate::circuit::Circuit;
use crate::gate::Gate;
use crate::IrError;

type Key = Box<[u64]>;

#[derive(Clone, Debug)]
pub struct SparseState {
    n: usize,
    amps: HashMap<Key, C64>,
}

fn get(k: &[u64], q: usize) -> bool {
    k[q / 64] >> (q % 64) & 1 == 1
}

fn set(k: &mut [u64], q: usize, v: bool) {
    if v {
        k[q / 64] |= 1 << (q % 64);
    } else {
        k[q / 64] &= !(1 << (q % 64));
    }
}

impl SparseState {
    /// `psi` on the first `data` wires, all later wires in |0>.
    pub fn from_data(n: usize, data: usize, psi: &[C64]) -> Result<Self, IrError> {
        if data > n || psi.len() != 1usize << data {
            return Err(IrError::DimensionMismatch { expected: 1 << data.min(63), found: psi.len() });
        }
        let words = n.div_ceil(64).max(1);
        let mut amps = HashMap::new();
        for (i, &a) in psi.iter().enumerate() {
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            let mut k = vec![0u64; words].into_boxed_slice();
            for q in 0..data {
                set(&mut k, q, (i >> (data - 1 - q)) & 1 == 1);
            }
            amps.insert(k, a);
        }
        Ok(SparseState { n, amps })
    }

    pub fn support(&self) -> usize {
        self.amps.len()
    }

    pub fn apply(&mut self, g: &Gate, prune: f64) {
        if let Gate::GlobalPhase { angle } = g {
            let z = C64::from_polar(1.0, *angle);
            self.amps.values_mut().for_each(|a| *a *= z);
            return;
        }
        let qs = g.qubits();
        let m = g.local_matrix();
        let dim = m.rows();
        let mut out: HashMap<Key, C64> = HashMap::with_capacity(self.amps.len());
        for (k, a) in self.amps.drain() {
            let col = qs.iter().fold(0usize, |acc, &q| (acc << 1) | get(&k, q) as usize);
            for row in 0..dim {
                let z = m[(row, col)];
                if z == C64::new(0.0, 0.0) {
                    continue;
                }
                let mut nk = k.clone();
                for (i, &q) in qs.iter().enumerate() {
                    set(&mut nk, q, (row >> (qs.len() - 1 - i)) & 1 == 1);
                }
                *out.entry(nk).or_insert(C64::new(0.0, 0.0)) += z * a;
            }
        }
        out.retain(|_, a| a.norm() > prune);
        self.amps = out;
    }

    /// Amplitudes with every wire from `data` on in |0>, and the norm of the rest.
    pub fn project_data(&self, data: usize) -> (Vec<C64>, f64) {
        let mut psi = vec![C64::new(0.0, 0.0); 1 << data];
        let mut rest = 0.0;
        for (k, a) in &self.amps {
            if (data..self.n).any(|q| get(k, q)) {
                rest += a.norm_sqr();
            } else {
                let i = (0..data).fold(0usize, |acc, q| (acc << 1) | get(k, q) as usize);
                psi[i] += a;
            }
        }
        (psi, rest.sqrt())
    }
}

impl Circuit {
    /// Runs the circuit on `psi (x) |0...0>` with sparse amplitudes; returns
    /// the data-register state with ancillae in |0> and the leftover norm.
    pub fn apply_sparse(&self, psi: &[C64], prune: f64) -> Result<(Vec<C64>, f64), IrError> {
        let mut s = SparseState::from_data(self.total_qubits(), self.num_data_qubits, psi)?;
        for g in &self.gates {
            s.apply(g, prune);
        }
        Ok(s.project_data(self.num_data_qubits))
    }
}
