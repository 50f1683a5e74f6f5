//! Input programs: control cascades, Moore-Nilsson staircases and valley
//! circuits.
//!
//! A control cascade of `m` blocks with `k`-qubit bodies lives on `k*m + 1`
//! wires. Wire 0 controls block 1; the last target of block `j` controls
//! block `j + 1`. A Moore-Nilsson cascade is the `k = 1` case with identity
//! on the open branch.

pub mod generate;
pub mod json;

use qcasc_ir::{Circuit, Control, Gate};
use qcasc_numerics::Mat;

#[derive(Debug, thiserror::Error)]
pub enum CascadeError {
    #[error("block size must be at least 1, got {0}")]
    InvalidBlockSize(usize),
    #[error("{what} is not unitary (defect {defect:.3e})")]
    NonUnitary { what: String, defect: f64 },
    #[error("{0}")]
    DimensionMismatch(String),
    #[error("layer {0} is not a single-qubit unitary")]
    NonSingleQubitLayer(usize),
    #[error("malformed cascade: {0}")]
    Format(String),
    #[error(transparent)]
    Ir(#[from] qcasc_ir::IrError),
}

const TOL: f64 = 1e-10;

fn check_unitary(m: &Mat, what: impl FnOnce() -> String) -> Result<(), CascadeError> {
    if !m.is_square() {
        return Err(CascadeError::DimensionMismatch(format!("{} is not square", what())));
    }
    let defect = m.unitarity_defect();
    if defect > TOL {
        return Err(CascadeError::NonUnitary { what: what(), defect });
    }
    Ok(())
}

fn qubits_of(m: &Mat) -> Result<usize, CascadeError> {
    qcasc_numerics::qubits_of(m.rows()).map_err(|e| CascadeError::DimensionMismatch(e.to_string()))
}

/// One multiplexer of a cascade: `u0` on the open branch, `u1` on the closed.
#[derive(Clone, Debug, PartialEq)]
pub struct CascadeBlock {
    pub u0: Mat,
    pub u1: Mat,
}

impl CascadeBlock {
    pub fn qubits(&self) -> usize {
        self.u0.rows().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> Mat {
        Mat::block_diag(&self.u0, &self.u1)
    }
}

/// Cascade of multiplexers. Blocks may have different widths (a grouped
/// Moore-Nilsson cascade ends with a shorter block).
#[derive(Clone, Debug, PartialEq)]
pub struct ControlCascade {
    pub blocks: Vec<CascadeBlock>,
}

impl ControlCascade {
    pub fn new(blocks: Vec<CascadeBlock>) -> Result<Self, CascadeError> {
        for (j, b) in blocks.iter().enumerate() {
            if b.u0.rows() != b.u1.rows() {
                return Err(CascadeError::DimensionMismatch(format!(
                    "block {j}: U0 is {}-dimensional, U1 is {}-dimensional",
                    b.u0.rows(),
                    b.u1.rows()
                )));
            }
            qubits_of(&b.u0)?;
            check_unitary(&b.u0, || format!("block {j} U0"))?;
            check_unitary(&b.u1, || format!("block {j} U1"))?;
        }
        Ok(ControlCascade { blocks })
    }

    /// Uniform body width, if every block has the same one.
    pub fn k(&self) -> Option<usize> {
        let k = self.blocks.first()?.qubits();
        self.blocks.iter().all(|b| b.qubits() == k).then_some(k)
    }

    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    pub fn total_qubits(&self) -> usize {
        1 + self.blocks.iter().map(CascadeBlock::qubits).sum::<usize>()
    }

    /// `(control, targets)` of each block.
    pub fn wires(&self) -> Vec<(usize, Vec<usize>)> {
        let mut next = 1;
        let mut ctrl = 0;
        self.blocks
            .iter()
            .map(|b| {
                let t: Vec<usize> = (next..next + b.qubits()).collect();
                next += b.qubits();
                let w = (ctrl, t);
                ctrl = next - 1;
                w
            })
            .collect()
    }

    pub fn lower_naive(&self) -> Circuit {
        let mut c = Circuit::new(self.total_qubits());
        for (b, (ctrl, t)) in self.blocks.iter().zip(self.wires()) {
            c.push(Gate::multiplexer(vec![ctrl], t, vec![b.u0.clone(), b.u1.clone()]));
        }
        c
    }
}

/// Moore-Nilsson staircase: gate `j` acts on wire `j` when wire `j - 1` is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct MnCascade {
    pub gates: Vec<Mat>,
}

impl MnCascade {
    pub fn new(gates: Vec<Mat>) -> Result<Self, CascadeError> {
        for (j, g) in gates.iter().enumerate() {
            if g.rows() != 2 || g.cols() != 2 {
                return Err(CascadeError::NonSingleQubitLayer(j));
            }
            check_unitary(g, || format!("gate {j}"))?;
        }
        Ok(MnCascade { gates })
    }

    pub fn m(&self) -> usize {
        self.gates.len()
    }

    pub fn total_qubits(&self) -> usize {
        self.gates.len() + 1
    }

    pub fn lower_naive(&self) -> Circuit {
        let mut c = Circuit::new(self.total_qubits());
        for (j, g) in self.gates.iter().enumerate() {
            c.push(Gate::controlled(vec![Control::closed(j)], vec![j + 1], g.clone()));
        }
        c
    }

    pub fn as_control_cascade(&self) -> ControlCascade {
        let blocks = self.gates.iter().map(|g| CascadeBlock { u0: Mat::identity(2), u1: g.clone() }).collect();
        ControlCascade { blocks }
    }

    pub fn group(&self, l: usize) -> Result<GroupedMn, CascadeError> {
        if l < 1 {
            return Err(CascadeError::InvalidBlockSize(l));
        }
        Ok(GroupedMn { groups: self.gates.chunks(l).map(|c| MnGroup { gates: c.to_vec() }).collect() })
    }
}

/// A run of consecutive staircase gates treated as one multiplexer on
/// `gates.len()` targets.
#[derive(Clone, Debug, PartialEq)]
pub struct MnGroup {
    pub gates: Vec<Mat>,
}

impl MnGroup {
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Sub-staircase on `len()` wires; the first gate is applied
    /// unconditionally when `with_first`, omitted otherwise.
    pub fn branch_circuit(&self, with_first: bool) -> Circuit {
        let mut c = Circuit::new(self.len());
        if with_first {
            c.push(Gate::one(0, self.gates[0].clone()));
        }
        for (j, g) in self.gates.iter().enumerate().skip(1) {
            c.push(Gate::controlled(vec![Control::closed(j - 1)], vec![j], g.clone()));
        }
        c
    }

    /// Open branch: the staircase without its first gate.
    pub fn v0(&self) -> Result<Mat, CascadeError> {
        Ok(self.branch_circuit(false).unitary_of()?)
    }

    /// Closed branch: the staircase with its first gate applied.
    pub fn v1(&self) -> Result<Mat, CascadeError> {
        Ok(self.branch_circuit(true).unitary_of()?)
    }

    pub fn block(&self) -> Result<CascadeBlock, CascadeError> {
        Ok(CascadeBlock { u0: self.v0()?, u1: self.v1()? })
    }

    /// The valley obtained from this group, innermost layer first.
    pub fn valley(&self) -> ValleySpec {
        ValleySpec { layers: self.gates.clone() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupedMn {
    pub groups: Vec<MnGroup>,
}

impl GroupedMn {
    pub fn to_control_cascade(&self) -> Result<ControlCascade, CascadeError> {
        Ok(ControlCascade { blocks: self.groups.iter().map(MnGroup::block).collect::<Result<_, _>>()? })
    }

    pub fn ungroup(&self) -> MnCascade {
        MnCascade { gates: self.groups.iter().flat_map(|g| g.gates.iter().cloned()).collect() }
    }
}

/// Valley circuit layers `U^(1), ..., U^(l)`, innermost first. Layers may act
/// on different numbers of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct ValleySpec {
    pub layers: Vec<Mat>,
}

impl ValleySpec {
    pub fn new(layers: Vec<Mat>) -> Result<Self, CascadeError> {
        for (j, u) in layers.iter().enumerate() {
            qubits_of(u)?;
            check_unitary(u, || format!("valley layer {}", j + 1))?;
        }
        Ok(ValleySpec { layers })
    }

    pub fn layer_qubits(&self) -> Vec<usize> {
        self.layers.iter().map(|u| u.rows().trailing_zeros() as usize).collect()
    }

    pub fn total_qubits(&self) -> usize {
        self.layer_qubits().iter().sum()
    }

    /// First wire of each layer's block. The outermost layer sits on top and
    /// the innermost at the bottom.
    pub fn offsets(&self) -> Vec<usize> {
        let q = self.layer_qubits();
        let mut off = vec![0; q.len()];
        let mut at = 0;
        for j in (0..q.len()).rev() {
            off[j] = at;
            at += q[j];
        }
        off
    }

    pub fn is_single_qubit(&self) -> bool {
        self.layers.iter().all(|u| u.rows() == 2)
    }

    /// The palindromic circuit: controlled adjoints of the outer layers from
    /// the outside in, the innermost layer, then the controlled layers back
    /// out. Layer `j + 1` is controlled by the top wire of layer `j`.
    pub fn build(&self) -> Circuit {
        let q = self.layer_qubits();
        let off = self.offsets();
        let l = self.layers.len();
        let wires = |j: usize| (off[j]..off[j] + q[j]).collect::<Vec<_>>();
        let ctrl = |j: usize| vec![Control::closed(off[j - 1])];
        let mut c = Circuit::new(self.total_qubits());
        for j in (1..l).rev() {
            c.push(Gate::controlled(ctrl(j), wires(j), self.layers[j].adjoint()));
        }
        if l > 0 {
            c.push(Gate::unitary(wires(0), self.layers[0].clone()));
        }
        for j in 1..l {
            c.push(Gate::controlled(ctrl(j), wires(j), self.layers[j].clone()));
        }
        c
    }

    pub fn dense(&self) -> Result<Mat, CascadeError> {
        Ok(self.build().unitary_of()?)
    }
}

pub fn build_valley(v: &ValleySpec) -> Circuit {
    v.build()
}
