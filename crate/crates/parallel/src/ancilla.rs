use std::f64::consts::TAU;

use qcasc_cascade::ControlCascade;
use qcasc_ir::std_gates::{phase_turns, x};
use qcasc_ir::{Circuit, Control, Gate};
use qcasc_numerics::{phi, Mat, C64};

use crate::exact::{block_plans, p_layer, r_layers, BlockPlan};
use crate::phase::{phase_tables_of, ApproxBudget, PhaseTable};
use crate::{Compilation, ParallelError, MAX_ANCILLA_K};

/// Copies `c AND b` onto every wire of `fan`: one Toffoli, then a binary
/// tree of CNOTs. Each gate is self-inverse, so the reversed list undoes it.
pub fn fanout(c: usize, b: usize, fan: &[usize]) -> Vec<Gate> {
    let mut g = vec![Gate::controlled(vec![Control::closed(c), Control::closed(b)], vec![fan[0]], x())];
    let mut have = 1;
    while have < fan.len() {
        for i in 0..have.min(fan.len() - have) {
            g.push(Gate::cnot(fan[i], fan[i + have]));
        }
        have *= 2;
    }
    g
}

/// A multiplexed phase gate split into a preparation stage on the index
/// wires, the part that touches the control and bottom wires, and the undo
/// of the preparation.
#[derive(Clone, Debug, Default)]
pub struct AncillaPhase {
    pub prepare: Vec<Gate>,
    pub apply: Vec<Gate>,
    pub unprepare: Vec<Gate>,
}

fn pattern_controls(index: &[usize], i: usize) -> Vec<Control> {
    let n = index.len();
    index
        .iter()
        .enumerate()
        .map(|(j, &q)| if (i >> (n - 1 - j)) & 1 == 1 { Control::closed(q) } else { Control::open(q) })
        .collect()
}

fn kickback(c: usize, b: usize, flags: &[usize], fan: &[usize], angles: &[f64]) -> Vec<Gate> {
    let spread = fanout(c, b, fan);
    let mut g = spread.clone();
    for ((&f, &t), &a) in flags.iter().zip(fan).zip(angles) {
        if a != 0.0 {
            g.push(Gate::controlled(vec![Control::closed(f)], vec![t], phase_turns(a)));
        }
    }
    g.extend(spread.into_iter().rev());
    g
}

/// Phase `angles[x]` (turns) on `c = b = 1` and index `x`, through a one-hot
/// register `sel` and a fanout register `fan`, both `2^|index|` wide.
pub fn multiplexed_phase_select(
    c: usize,
    index: &[usize],
    b: usize,
    angles: &[f64],
    sel: &[usize],
    fan: &[usize],
) -> AncillaPhase {
    let prepare: Vec<Gate> = (0..angles.len())
        .map(|i| {
            if index.is_empty() {
                Gate::one(sel[i], x())
            } else {
                Gate::controlled(pattern_controls(index, i), vec![sel[i]], x())
            }
        })
        .collect();
    AncillaPhase {
        unprepare: prepare.iter().rev().cloned().collect(),
        apply: kickback(c, b, sel, fan, angles),
        prepare,
    }
}

/// Phase `angles[x]` truncated to `budget.r` bits, through a register `load`
/// holding the binary digits of the indexed angle and a fanout register.
pub fn multiplexed_phase_load(
    c: usize,
    index: &[usize],
    b: usize,
    angles: &[f64],
    budget: &ApproxBudget,
    load: &[usize],
    fan: &[usize],
) -> AncillaPhase {
    let bits: Vec<Vec<bool>> = angles.iter().map(|&t| budget.bits(t)).collect();
    let mut prepare = Vec::new();
    for (j, &q) in load.iter().enumerate() {
        let set: Vec<bool> = bits.iter().map(|b| b[j]).collect();
        if !set.iter().any(|&s| s) {
            continue;
        }
        if index.is_empty() {
            prepare.push(Gate::one(q, x()));
        } else {
            let cases: Vec<Mat> = set.iter().map(|&s| if s { x() } else { Mat::identity(2) }).collect();
            prepare.push(Gate::multiplexer(index.to_vec(), vec![q], cases));
        }
    }
    let weights: Vec<f64> = (0..load.len()).map(|j| 0.5f64.powi(j as i32 + 1)).collect();
    AncillaPhase {
        unprepare: prepare.iter().rev().cloned().collect(),
        apply: kickback(c, b, load, fan, &weights),
        prepare,
    }
}

fn tables(plans: &[BlockPlan]) -> Result<Vec<PhaseTable>, ParallelError> {
    plans.iter().map(|p| phase_tables_of(&p.parts.d)).collect()
}

/// Rewrites the angles of one block for truncation and returns the worst
/// phase error left. Each index `x` gets a common shift `gamma[x]` that makes
/// the two angles' truncation errors as close as possible; the exact
/// compensation, including the midpoint of the two errors, goes into the
/// `c = 1` cases of the postprocessing multiplexer, which act on the index
/// wires after `Phi`. What remains is at most a quarter unit in the last place.
fn gauge_for_truncation(plan: &mut BlockPlan, t: &PhaseTable, budget: &ApproxBudget) -> (PhaseTable, f64) {
    let scale = (1u64 << budget.r) as f64;
    let mut out = t.clone();
    let mut fix = vec![C64::new(1.0, 0.0); t.theta.len()];
    let mut worst: f64 = 0.0;
    for x in 0..t.theta.len() {
        let (th, ph) = (t.theta[x], t.phi[x]);
        let gap = ((th - ph) * scale).rem_euclid(1.0);
        // Pin the angle whose choice leaves the smaller error on the other.
        let (pinned, other) = if gap <= 0.5 { (ph, th) } else { (th, ph) };
        let exact = ((pinned * scale).ceil() / scale).rem_euclid(1.0);
        let moved = (other - pinned + exact).rem_euclid(1.0);
        let gamma = exact - pinned;
        let err = moved - budget.truncate(moved);
        if gap <= 0.5 {
            (out.phi[x], out.theta[x]) = (exact, moved);
        } else {
            (out.theta[x], out.phi[x]) = (exact, moved);
        }
        let mid = err / 2.0;
        fix[x] = C64::from_polar(1.0, TAU * (mid - gamma));
        worst = worst.max((C64::new(1.0, 0.0) - C64::from_polar(1.0, TAU * mid)).norm());
    }
    let fix = Mat::diag(&fix);
    for case in &mut plan.parts.r_cases[2..] {
        *case = case.matmul(&fix);
    }
    (out, worst)
}

/// Shared layout, with `width(p)` ancillae per phase gate of block `p`: preprocessing, all preparations, the sequential chain,
/// all unpreparations, postprocessing.
fn assemble(
    n: usize,
    plans: &[BlockPlan],
    width: impl Fn(&BlockPlan) -> usize,
    mut phase_gate: impl FnMut(usize, &BlockPlan, bool, usize) -> AncillaPhase,
) -> Circuit {
    let mut prepare = Vec::new();
    let mut chain = Vec::new();
    let mut unprepare = Vec::new();
    let mut next = n;
    for (j, p) in plans.iter().enumerate() {
        let b = p.bottom();
        let w = width(p);
        let theta = phase_gate(j, p, true, next);
        let phi_gate = phase_gate(j, p, false, next + w);
        next += 2 * w;
        prepare.extend(theta.prepare);
        prepare.extend(phi_gate.prepare);
        chain.extend(theta.apply);
        chain.push(Gate::one(b, x()));
        chain.extend(phi_gate.apply);
        chain.push(Gate::one(b, x()));
        chain.push(Gate::one(b, phi()));
        unprepare.extend(theta.unprepare);
        unprepare.extend(phi_gate.unprepare);
    }
    let mut c = Circuit::with_ancilla(n, next - n);
    c.extend(p_layer(plans));
    c.extend(prepare);
    c.extend(chain);
    c.extend(unprepare);
    c.extend(r_layers(plans));
    c
}

/// Exact compilation with `2^(k+1)` ancillae per block: each controlled
/// diagonal becomes two multiplexed phase gates applied by phase kickback
/// from one-hot index registers.
pub fn compile_select_exact(c: &ControlCascade) -> Result<Compilation, ParallelError> {
    let plans = block_plans(c, MAX_ANCILLA_K)?;
    let tabs = tables(&plans)?;
    let circuit = assemble(c.total_qubits(), &plans, |p| 2 << (p.targets.len() - 1), |j, p, is_theta, at| {
        let h = 1 << (p.targets.len() - 1);
        let sel: Vec<usize> = (at..at + h).collect();
        let fan: Vec<usize> = (at + h..at + 2 * h).collect();
        let angles = if is_theta { &tabs[j].theta } else { &tabs[j].phi };
        let index = &p.targets[..p.targets.len() - 1];
        multiplexed_phase_select(p.control, index, p.bottom(), angles, &sel, &fan)
    });
    Compilation::finish(circuit, 0.0)
}

/// Approximate compilation with `4 r` ancillae per block, `r = ceil(log2(m / epsilon))`.
/// Angles are truncated toward zero after the shift of `gauge_for_truncation`;
/// the a-priori error is the sum over blocks of the largest phase deviation
/// that remains.
pub fn compile_load_approx(c: &ControlCascade, epsilon: f64) -> Result<Compilation, ParallelError> {
    let budget = ApproxBudget::new(c.m(), epsilon)?;
    let mut plans = block_plans(c, MAX_ANCILLA_K)?;
    let raw = tables(&plans)?;
    let (tabs, errors): (Vec<PhaseTable>, Vec<f64>) =
        plans.iter_mut().zip(&raw).map(|(p, t)| gauge_for_truncation(p, t, &budget)).unzip();
    let r = budget.r;
    let circuit = assemble(c.total_qubits(), &plans, |_| 2 * r, |j, p, is_theta, at| {
        let load: Vec<usize> = (at..at + r).collect();
        let fan: Vec<usize> = (at + r..at + 2 * r).collect();
        let angles = if is_theta { &tabs[j].theta } else { &tabs[j].phi };
        let index = &p.targets[..p.targets.len() - 1];
        multiplexed_phase_load(p.control, index, p.bottom(), angles, &budget, &load, &fan)
    });
    Compilation::finish(circuit, errors.iter().sum())
}
