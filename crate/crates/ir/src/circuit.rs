use qcasc_numerics::{Mat, C64};

use crate::gate::Gate;
use crate::sim::apply_gate;
use crate::IrError;

/// Largest register for which a dense unitary is built.
pub const MAX_DENSE_QUBITS: usize = 13;
/// Largest register for statevector simulation.
pub const MAX_STATE_QUBITS: usize = 26;

#[derive(Clone, Debug, PartialEq)]
pub enum Connectivity {
    AllToAll,
    /// `placement[q] = (column, row)` of qubit `q` on a `width x height` grid.
    Grid2D { width: usize, height: usize, placement: Vec<(usize, usize)> },
}

impl Connectivity {
    /// Whether a two-qubit gate may act on `a` and `b`.
    pub fn allows(&self, a: usize, b: usize) -> bool {
        match self {
            Connectivity::AllToAll => true,
            Connectivity::Grid2D { placement, .. } => {
                let (pa, pb) = (placement[a], placement[b]);
                pa.0.abs_diff(pb.0) + pa.1.abs_diff(pb.1) == 1
            }
        }
    }
}

/// Ordered gate list over `num_data_qubits + num_ancilla` wires. Ancillae take
/// the high indices and start and end in |0>.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub num_data_qubits: usize,
    pub num_ancilla: usize,
    pub connectivity: Connectivity,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_data_qubits: usize) -> Self {
        Circuit { num_data_qubits, num_ancilla: 0, connectivity: Connectivity::AllToAll, gates: vec![] }
    }

    pub fn with_ancilla(num_data_qubits: usize, num_ancilla: usize) -> Self {
        Circuit { num_ancilla, ..Circuit::new(num_data_qubits) }
    }

    pub fn total_qubits(&self) -> usize {
        self.num_data_qubits + self.num_ancilla
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) {
        self.gates.extend(gates);
    }

    /// Appends `other`'s gates with qubit `q` of `other` placed on `wires[q]`.
    pub fn append_mapped(&mut self, other: &Circuit, wires: &[usize]) {
        self.gates.extend(other.gates.iter().map(|g| g.remap(|q| wires[q])));
    }

    pub fn gate_count(&self) -> usize {
        self.gates.iter().filter(|g| !matches!(g, Gate::GlobalPhase { .. })).count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.qubits().len() == 2).count()
    }

    pub fn is_lowered(&self) -> bool {
        self.gates.iter().all(Gate::is_basis)
    }

    /// Reverse order, adjoint of every gate.
    pub fn inverse(&self) -> Circuit {
        Circuit { gates: self.gates.iter().rev().map(Gate::adjoint).collect(), ..self.clone() }
    }

    pub fn validate(&self) -> Result<(), IrError> {
        let n = self.total_qubits();
        if let Connectivity::Grid2D { width, height, placement } = &self.connectivity {
            if placement.len() != n {
                return Err(IrError::InvalidGate(format!(
                    "placement lists {} cells for {n} qubits",
                    placement.len()
                )));
            }
            let mut seen = std::collections::HashSet::new();
            for &(x, y) in placement {
                if x >= *width || y >= *height || !seen.insert((x, y)) {
                    return Err(IrError::InvalidGate(format!("bad grid cell ({x}, {y})")));
                }
            }
        }
        let tol = 1e-9;
        for g in &self.gates {
            g.validate(n, tol)?;
        }
        Ok(())
    }

    /// Two-qubit gates whose wires are not adjacent under the connectivity.
    pub fn adjacency_violations(&self) -> Vec<usize> {
        self.gates
            .iter()
            .enumerate()
            .filter_map(|(i, g)| {
                let q = g.qubits();
                (q.len() == 2 && !self.connectivity.allows(q[0], q[1])).then_some(i)
            })
            .collect()
    }

    /// Dense matrix of the whole register, gate products included in order.
    pub fn unitary_of(&self) -> Result<Mat, IrError> {
        let n = self.total_qubits();
        if n > MAX_DENSE_QUBITS {
            return Err(IrError::TooManyQubits { qubits: n, max: MAX_DENSE_QUBITS });
        }
        let dim = 1usize << n;
        let mut buf = Mat::identity(dim).into_data();
        for g in &self.gates {
            apply_gate(&mut buf, n, dim, g);
        }
        Ok(Mat::from_vec(dim, dim, buf))
    }

    pub fn apply_state(&self, psi: &[C64]) -> Result<Vec<C64>, IrError> {
        let n = self.total_qubits();
        if n > MAX_STATE_QUBITS {
            return Err(IrError::TooManyQubits { qubits: n, max: MAX_STATE_QUBITS });
        }
        if psi.len() != 1usize << n {
            return Err(IrError::DimensionMismatch { expected: 1 << n, found: psi.len() });
        }
        let mut out = psi.to_vec();
        for g in &self.gates {
            apply_gate(&mut out, n, 1, g);
        }
        Ok(out)
    }

    /// Applies the circuit to a batch of `cols` column vectors stored row-major
    /// in a `2^n x cols` matrix.
    pub fn apply_columns(&self, m: &Mat) -> Result<Mat, IrError> {
        let n = self.total_qubits();
        if m.rows() != 1usize << n {
            return Err(IrError::DimensionMismatch { expected: 1 << n, found: m.rows() });
        }
        let cols = m.cols();
        let mut buf = m.data().to_vec();
        for g in &self.gates {
            apply_gate(&mut buf, n, cols, g);
        }
        Ok(Mat::from_vec(m.rows(), cols, buf))
    }
}
