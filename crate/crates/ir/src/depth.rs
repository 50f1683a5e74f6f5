use crate::circuit::Circuit;
use crate::gate::Gate;
use crate::IrError;

/// Number of layers under greedy as-soon-as-possible scheduling of one- and
/// two-qubit gates. Global phases take no layer.
pub fn depth(c: &Circuit) -> Result<usize, IrError> {
    let mut level = vec![0usize; c.total_qubits()];
    let mut total = 0;
    for g in &c.gates {
        match g {
            Gate::GlobalPhase { .. } => continue,
            Gate::OneQubit { .. } | Gate::TwoQubit { .. } | Gate::Swap { .. } => {}
            other => return Err(IrError::NotLowered(other.kind())),
        }
        let qs = g.qubits();
        let l = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for q in qs {
            level[q] = l;
        }
        total = total.max(l);
    }
    Ok(total)
}

/// Layer index (1-based) assigned to each gate by [`depth`]'s schedule;
/// global phases get 0.
pub fn layers(c: &Circuit) -> Result<Vec<usize>, IrError> {
    let mut level = vec![0usize; c.total_qubits()];
    let mut out = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        if let Gate::GlobalPhase { .. } = g {
            out.push(0);
            continue;
        }
        if !matches!(g, Gate::OneQubit { .. } | Gate::TwoQubit { .. } | Gate::Swap { .. }) {
            return Err(IrError::NotLowered(g.kind()));
        }
        let qs = g.qubits();
        let l = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for q in qs {
            level[q] = l;
        }
        out.push(l);
    }
    Ok(out)
}
