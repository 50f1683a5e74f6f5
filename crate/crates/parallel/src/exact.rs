use qcasc_cascade::ControlCascade;
use qcasc_ir::{Circuit, Gate};
use qcasc_precompute::{precompute_identity, PrecomputeParts};

use crate::{Compilation, ParallelError, MAX_EXACT_K};

/// One rewritten block of a cascade, with its wires.
#[derive(Clone, Debug)]
pub struct BlockPlan {
    pub control: usize,
    pub targets: Vec<usize>,
    pub parts: PrecomputeParts,
}

impl BlockPlan {
    pub fn bottom(&self) -> usize {
        *self.targets.last().expect("nonempty block")
    }
}

pub fn block_plans(c: &ControlCascade, max_k: usize) -> Result<Vec<BlockPlan>, ParallelError> {
    if c.blocks.is_empty() {
        return Err(ParallelError::Empty);
    }
    c.blocks
        .iter()
        .zip(c.wires())
        .map(|(b, (control, targets))| {
            if b.qubits() > max_k {
                return Err(ParallelError::GuardExceeded { what: "block width", value: b.qubits(), max: max_k });
            }
            Ok(BlockPlan { control, targets, parts: precompute_identity(&b.u0, &b.u1)? })
        })
        .collect()
}

pub(crate) fn p_layer(plans: &[BlockPlan]) -> Vec<Gate> {
    plans.iter().map(|p| p.parts.p_gate(&p.targets)).collect()
}

/// Postprocessing multiplexers, even-indexed blocks first. Neighbours share
/// one control wire, so each half is a single layer.
pub(crate) fn r_layers(plans: &[BlockPlan]) -> Vec<Gate> {
    let r = |p: &BlockPlan| p.parts.r_gate(p.control, &p.targets);
    let even = plans.iter().step_by(2).map(r);
    let odd = plans.iter().skip(1).step_by(2).map(r);
    even.chain(odd).collect()
}

/// Ancilla-free compilation: preprocessing layer, the chain of controlled
/// diagonals and `Phi` gates, then two layers of postprocessing multiplexers.
pub fn compile_exact_diagonal(c: &ControlCascade) -> Result<Compilation, ParallelError> {
    let plans = block_plans(c, MAX_EXACT_K)?;
    let mut out = Circuit::new(c.total_qubits());
    out.extend(p_layer(&plans));
    for p in &plans {
        out.extend(p.parts.middle_gates(p.control, &p.targets));
    }
    out.extend(r_layers(&plans));
    Compilation::finish(out, 0.0)
}
