use qcasc_cascade::MnCascade;
use qcasc_ir::{Circuit, Control, Gate};
use qcasc_numerics::Mat;
use qcasc_precompute::mn_precompute;

use crate::{Compilation, ParallelError};

pub const DEFAULT_BLOCK_SIZE: usize = 2;

/// Gates of the log-depth staircase, grouped by recursion level.
#[derive(Clone, Debug, Default)]
pub struct MnStages {
    /// Preprocessing gates, outermost level first.
    pub pre: Vec<Vec<Gate>>,
    /// The base-case staircase.
    pub middle: Vec<Gate>,
    /// Postprocessing multiplexers, innermost level first; within a level the
    /// even-indexed groups precede the odd ones.
    pub post: Vec<Vec<Gate>>,
}

impl MnStages {
    /// All gates in time order.
    pub fn flatten(self) -> Vec<Gate> {
        let mut out: Vec<Gate> = self.pre.into_iter().flatten().collect();
        out.extend(self.middle);
        out.extend(self.post.into_iter().flatten());
        out
    }
}

/// Splits the staircase `gates` on `wires` (`wires[0]` is the first control)
/// into logarithmically many stages: per group of `b` gates a preprocessing
/// gate, a controlled one-qubit gate on the group's bottom wire and a
/// postprocessing multiplexer. The controlled gates form a shorter staircase
/// over the group bottoms, which is split again until at most `b` remain.
pub fn mn_log_depth_stages(gates: &[Mat], wires: &[usize], b: usize) -> Result<MnStages, ParallelError> {
    debug_assert_eq!(wires.len(), gates.len() + 1);
    if gates.len() <= b {
        let middle = gates
            .iter()
            .enumerate()
            .map(|(j, g)| Gate::controlled(vec![Control::closed(wires[j])], vec![wires[j + 1]], g.clone()))
            .collect();
        return Ok(MnStages { middle, ..MnStages::default() });
    }
    let mut pre = Vec::new();
    let mut post = Vec::new();
    let mut inner_gates = Vec::new();
    let mut inner_wires = vec![wires[0]];
    for (gi, chunk) in gates.chunks(b).enumerate() {
        let off = gi * b;
        let control = wires[off];
        let targets = &wires[off + 1..=off + chunk.len()];
        inner_wires.push(*targets.last().expect("nonempty chunk"));
        if chunk.len() == 1 {
            inner_gates.push(chunk[0].clone());
            continue;
        }
        let parts = mn_precompute(chunk)?;
        pre.push(parts.p_gate(targets));
        inner_gates.push(parts.q.clone().expect("staircase parts carry Q"));
        post.push((gi, parts.r_gate(control, targets)));
    }
    let mut inner = mn_log_depth_stages(&inner_gates, &inner_wires, b)?;
    inner.pre.insert(0, pre);
    let (even, odd): (Vec<_>, Vec<_>) = post.into_iter().partition(|(gi, _)| gi % 2 == 0);
    inner.post.push(even.into_iter().chain(odd).map(|(_, g)| g).collect());
    Ok(inner)
}

pub fn compile_mn_log_depth(c: &MnCascade, b: usize) -> Result<Compilation, ParallelError> {
    if b < 2 {
        return Err(ParallelError::InvalidBlockSize(b));
    }
    if c.gates.is_empty() {
        return Err(ParallelError::Empty);
    }
    let wires: Vec<usize> = (0..c.total_qubits()).collect();
    let mut out = Circuit::new(c.total_qubits());
    out.extend(mn_log_depth_stages(&c.gates, &wires, b)?.flatten());
    Compilation::finish(out, 0.0)
}
