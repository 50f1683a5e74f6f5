//! Expansion of block gates into one- and two-qubit gates.
//!
//! Multi-target multiplexers split recursively through the cosine-sine
//! decomposition; single-target multiplexers go through ZYZ angles and
//! Gray-code rotation chains; diagonals peel one multiplexed `rz` per qubit.

use qcasc_numerics::{cs_decompose, Mat, C64, ONE};

use crate::circuit::Circuit;
use crate::gate::{all_diagonal, scalar_phase, unit, Gate};
use crate::std_gates::{ry, rz, zyz};
use crate::IrError;

const DIAG_TOL: f64 = 1e-13;

pub fn lower_to_basis(c: &Circuit) -> Result<Circuit, IrError> {
    let mut out = Circuit { gates: Vec::with_capacity(c.gates.len()), ..c.clone() };
    for g in &c.gates {
        lower_gate(g, &mut out.gates)?;
    }
    Ok(out)
}

pub fn lower_gate(g: &Gate, out: &mut Vec<Gate>) -> Result<(), IrError> {
    match g {
        Gate::OneQubit { .. } | Gate::TwoQubit { .. } | Gate::GlobalPhase { .. } => out.push(g.clone()),
        Gate::Swap { a, b } => out.push(Gate::two(*a, *b, crate::std_gates::swap())),
        Gate::Diagonal { targets, phases } => lower_diagonal(targets, phases, out),
        Gate::Controlled { controls, targets, body } => {
            let cq: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
            let pattern = controls.iter().fold(0usize, |acc, c| (acc << 1) | c.closed as usize);
            let id = Mat::identity(body.rows());
            let cases: Vec<Mat> =
                (0..1usize << cq.len()).map(|i| if i == pattern { body.clone() } else { id.clone() }).collect();
            lower_multiplexer(&cq, targets, &cases, out)?;
        }
        Gate::Multiplexer { controls, targets, cases } => lower_multiplexer(controls, targets, cases, out)?,
    }
    Ok(())
}

fn emit_small(qubits: Vec<usize>, m: Mat, out: &mut Vec<Gate>) {
    if let Some(angle) = scalar_phase(&m, DIAG_TOL) {
        if angle != 0.0 {
            out.push(Gate::GlobalPhase { angle });
        }
        return;
    }
    match qubits.len() {
        1 => out.push(Gate::one(qubits[0], m)),
        2 => out.push(Gate::two(qubits[0], qubits[1], m)),
        _ => unreachable!("small gate on {} qubits", qubits.len()),
    }
}

/// Diagonal gate as a chain of multiplexed `rz` rotations plus a global phase.
pub fn lower_diagonal(targets: &[usize], phases: &[C64], out: &mut Vec<Gate>) {
    let first = phases[0];
    if phases.iter().all(|p| (p - first).norm() <= DIAG_TOL) {
        let angle = first.arg();
        if angle != 0.0 {
            out.push(Gate::GlobalPhase { angle });
        }
        return;
    }
    if targets.len() <= 2 {
        emit_small(targets.to_vec(), Mat::diag(phases), out);
        return;
    }
    let angles: Vec<f64> = phases.iter().map(|p| p.arg()).collect();
    let half = phases.len() / 2;
    let mut mean = Vec::with_capacity(half);
    let mut theta = Vec::with_capacity(half);
    for x in 0..half {
        let (a0, a1) = (angles[2 * x], angles[2 * x + 1]);
        mean.push(unit((a0 + a1) / 2.0));
        theta.push(a1 - a0);
    }
    let (rest, last) = targets.split_at(targets.len() - 1);
    multiplexed_rotation(Axis::Z, rest, last[0], &theta, out);
    lower_diagonal(rest, &mean, out);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Y,
    Z,
}

fn rotation(axis: Axis, t: f64) -> Mat {
    match axis {
        Axis::Y => ry(t),
        Axis::Z => rz(t),
    }
}

/// Uniformly controlled rotation: angle `angles[x]` on `target` when the
/// controls read `x`. Uses the Gray-code CNOT chain with `2^c` rotations.
pub fn multiplexed_rotation(axis: Axis, controls: &[usize], target: usize, angles: &[f64], out: &mut Vec<Gate>) {
    let c = controls.len();
    let k = 1usize << c;
    debug_assert_eq!(angles.len(), k);
    if angles.iter().all(|a| a.abs() <= 1e-15) {
        return;
    }
    if c == 0 {
        out.push(Gate::one(target, rotation(axis, angles[0])));
        return;
    }
    if c == 1 {
        let mut m = Mat::zeros(4, 4);
        m.set_block(0, 0, &rotation(axis, angles[0]));
        m.set_block(2, 2, &rotation(axis, angles[1]));
        out.push(Gate::two(controls[0], target, m));
        return;
    }
    let gray = |i: usize| i ^ (i >> 1);
    let scale = 1.0 / k as f64;
    for i in 0..k {
        let g = gray(i);
        let t: f64 = (0..k)
            .map(|x| if (x & g).count_ones() % 2 == 0 { angles[x] } else { -angles[x] })
            .sum::<f64>()
            * scale;
        out.push(Gate::one(target, rotation(axis, t)));
        let flip = g ^ gray((i + 1) % k);
        let bit = flip.trailing_zeros() as usize;
        out.push(Gate::cnot(controls[c - 1 - bit], target));
    }
}

pub fn lower_multiplexer(
    controls: &[usize],
    targets: &[usize],
    cases: &[Mat],
    out: &mut Vec<Gate>,
) -> Result<(), IrError> {
    let nq = controls.len() + targets.len();
    if nq <= 2 {
        let g = Gate::multiplexer(controls.to_vec(), targets.to_vec(), cases.to_vec());
        let mut qs = controls.to_vec();
        qs.extend_from_slice(targets);
        emit_small(qs, g.local_matrix(), out);
        return Ok(());
    }
    if all_diagonal(cases, DIAG_TOL) {
        let phases: Vec<C64> = cases.iter().flat_map(|m| m.diagonal()).collect();
        let mut qs = controls.to_vec();
        qs.extend_from_slice(targets);
        lower_diagonal(&qs, &phases, out);
        return Ok(());
    }
    if targets.len() == 1 {
        let angles: Vec<_> = cases.iter().map(zyz).collect();
        let t = targets[0];
        multiplexed_rotation(Axis::Z, controls, t, &angles.iter().map(|a| a.delta).collect::<Vec<_>>(), out);
        multiplexed_rotation(Axis::Y, controls, t, &angles.iter().map(|a| a.gamma).collect::<Vec<_>>(), out);
        multiplexed_rotation(Axis::Z, controls, t, &angles.iter().map(|a| a.beta).collect::<Vec<_>>(), out);
        let phases: Vec<C64> = angles.iter().map(|a| unit(a.alpha)).collect();
        if controls.is_empty() {
            if phases[0] != ONE {
                out.push(Gate::GlobalPhase { angle: angles[0].alpha });
            }
        } else {
            lower_diagonal(controls, &phases, out);
        }
        return Ok(());
    }

    // Split on the first target: T-multiplexer, multiplexed ry, S-multiplexer.
    let (t0, rest) = (targets[0], &targets[1..]);
    let rest_dim = 1usize << rest.len();
    let mut t_cases = Vec::with_capacity(2 * cases.len());
    let mut s_cases = Vec::with_capacity(2 * cases.len());
    let mut ry_angles = Vec::with_capacity(cases.len() * rest_dim);
    for u in cases {
        let d = cs_decompose(u).map_err(|e| IrError::Numeric(e.to_string()))?;
        t_cases.push(d.t0);
        t_cases.push(d.t1);
        s_cases.push(d.s0);
        s_cases.push(d.s1);
        for r in 0..rest_dim {
            ry_angles.push(-2.0 * d.sigma2[r].atan2(d.sigma1[r]));
        }
    }
    let mut outer = controls.to_vec();
    outer.push(t0);
    let mut ry_controls = controls.to_vec();
    ry_controls.extend_from_slice(rest);
    lower_multiplexer(&outer, rest, &t_cases, out)?;
    multiplexed_rotation(Axis::Y, &ry_controls, t0, &ry_angles, out);
    lower_multiplexer(&outer, rest, &s_cases, out)?;
    Ok(())
}

/// Peephole pass over a basis circuit: folds one-qubit gates into the
/// neighbouring two-qubit gate on the same wire, merges consecutive gates on
/// the same wire set, and collects all global phases into one trailing gate.
pub fn fuse_basis(c: &Circuit) -> Result<Circuit, IrError> {
    if !c.is_lowered() {
        let bad = c.gates.iter().find(|g| !g.is_basis()).map(Gate::kind).unwrap_or("?");
        return Err(IrError::NotLowered(bad));
    }
    let n = c.total_qubits();
    let mut slots: Vec<Option<Gate>> = Vec::with_capacity(c.gates.len());
    let mut hist: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut phase = 0.0;
    for g in &c.gates {
        match g {
            Gate::GlobalPhase { angle } => phase += angle,
            Gate::OneQubit { qubit, matrix } => {
                let q = *qubit;
                if let Some(&last) = hist[q].last() {
                    match slots[last].as_mut().expect("live gate") {
                        Gate::OneQubit { matrix: m, .. } => {
                            *m = matrix.matmul(m);
                            continue;
                        }
                        Gate::TwoQubit { qubits, matrix: m } => {
                            let lifted = lift_one(matrix, qubits[0] == q);
                            *m = lifted.matmul(m);
                            continue;
                        }
                        _ => unreachable!(),
                    }
                }
                hist[q].push(slots.len());
                slots.push(Some(g.clone()));
            }
            Gate::TwoQubit { qubits, matrix } => {
                let [a, b] = *qubits;
                let mut m = matrix.clone();
                // Absorb trailing one-qubit gates on either wire.
                for (pos, q) in [(true, a), (false, b)] {
                    if let Some(&last) = hist[q].last() {
                        if let Some(Gate::OneQubit { matrix: u, .. }) = &slots[last] {
                            m = m.matmul(&lift_one(u, pos));
                            slots[last] = None;
                            hist[q].pop();
                        }
                    }
                }
                let la = hist[a].last().copied();
                if la.is_some() && la == hist[b].last().copied() {
                    let idx = la.unwrap();
                    if let Some(Gate::TwoQubit { qubits: prev, matrix: pm }) = slots[idx].as_mut() {
                        let aligned = if prev[0] == a { m } else { swap_conj(&m) };
                        *pm = aligned.matmul(pm);
                        continue;
                    }
                }
                hist[a].push(slots.len());
                hist[b].push(slots.len());
                slots.push(Some(Gate::two(a, b, m)));
            }
            _ => unreachable!(),
        }
    }
    let mut gates: Vec<Gate> = Vec::with_capacity(slots.len() + 1);
    for g in slots.into_iter().flatten() {
        match g {
            Gate::OneQubit { qubit, matrix } => match scalar_phase(&matrix, DIAG_TOL) {
                Some(a) => phase += a,
                None => gates.push(Gate::OneQubit { qubit, matrix }),
            },
            Gate::TwoQubit { qubits, matrix } => match scalar_phase(&matrix, DIAG_TOL) {
                Some(a) => phase += a,
                None => gates.push(Gate::TwoQubit { qubits, matrix }),
            },
            other => gates.push(other),
        }
    }
    let phase = phase.rem_euclid(std::f64::consts::TAU);
    if phase.abs() > 1e-15 && (phase - std::f64::consts::TAU).abs() > 1e-15 {
        gates.push(Gate::GlobalPhase { angle: phase });
    }
    Ok(Circuit { gates, ..c.clone() })
}

/// `u` on the first (`high`) or second wire of a two-qubit space.
fn lift_one(u: &Mat, high: bool) -> Mat {
    let id = Mat::identity(2);
    if high {
        qcasc_numerics::kron(u, &id)
    } else {
        qcasc_numerics::kron(&id, u)
    }
}

/// Same operator written with its two wires listed in the other order.
fn swap_conj(m: &Mat) -> Mat {
    let s = crate::std_gates::swap();
    s.matmul(m).matmul(&s)
}
