//! In-place gate application on a batch of amplitude rows.
//!
//! The buffer holds `2^n` rows of `inner` amplitudes each. A statevector uses
//! `inner = 1`; a full unitary uses `inner = 2^n` (columns ride along).

use qcasc_numerics::{Mat, C64, ZERO};

use crate::gate::Gate;

#[inline]
fn mask(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

pub(crate) fn apply_gate(buf: &mut [C64], n: usize, inner: usize, g: &Gate) {
    match g {
        Gate::GlobalPhase { angle } => {
            let z = C64::from_polar(1.0, *angle);
            buf.iter_mut().for_each(|x| *x *= z);
        }
        Gate::Swap { a, b } => {
            let (ma, mb) = (mask(n, *a), mask(n, *b));
            for idx in 0..(1usize << n) {
                if idx & ma != 0 && idx & mb == 0 {
                    let j = idx ^ ma ^ mb;
                    let (lo, hi) = (idx.min(j), idx.max(j));
                    let (left, right) = buf.split_at_mut(hi * inner);
                    left[lo * inner..(lo + 1) * inner].swap_with_slice(&mut right[..inner]);
                }
            }
        }
        Gate::Diagonal { targets, phases } => {
            let ms: Vec<usize> = targets.iter().map(|&q| mask(n, q)).collect();
            for idx in 0..(1usize << n) {
                let sub = ms.iter().fold(0usize, |acc, &m| (acc << 1) | (idx & m != 0) as usize);
                let p = phases[sub];
                if p != C64::new(1.0, 0.0) {
                    buf[idx * inner..(idx + 1) * inner].iter_mut().for_each(|x| *x *= p);
                }
            }
        }
        Gate::OneQubit { qubit, matrix } => dense(buf, n, inner, &[], &[*qubit], |_| Some(matrix)),
        Gate::TwoQubit { qubits, matrix } => dense(buf, n, inner, &[], qubits, |_| Some(matrix)),
        Gate::Controlled { controls, targets, body } => {
            let cq: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
            let pattern = controls.iter().fold(0usize, |acc, c| (acc << 1) | c.closed as usize);
            dense(buf, n, inner, &cq, targets, |case| (case == pattern).then_some(body))
        }
        Gate::Multiplexer { controls, targets, cases } => {
            dense(buf, n, inner, controls, targets, |case| Some(&cases[case]))
        }
    }
}

fn dense<'a>(
    buf: &mut [C64],
    n: usize,
    inner: usize,
    controls: &[usize],
    targets: &[usize],
    pick: impl Fn(usize) -> Option<&'a Mat>,
) {
    let nt = targets.len();
    let dt = 1usize << nt;
    let tmasks: Vec<usize> = targets.iter().map(|&q| mask(n, q)).collect();
    let tall = tmasks.iter().fold(0, |a, &m| a | m);
    let cmasks: Vec<usize> = controls.iter().map(|&q| mask(n, q)).collect();
    let offsets: Vec<usize> = (0..dt)
        .map(|s| (0..nt).filter(|&j| s >> (nt - 1 - j) & 1 == 1).fold(0, |a, j| a | tmasks[j]))
        .collect();
    let mut tmp = vec![ZERO; dt * inner];
    for base in 0..(1usize << n) {
        if base & tall != 0 {
            continue;
        }
        let case = cmasks.iter().fold(0usize, |acc, &m| (acc << 1) | (base & m != 0) as usize);
        let Some(m) = pick(case) else { continue };
        for (s, &off) in offsets.iter().enumerate() {
            let row = (base | off) * inner;
            tmp[s * inner..(s + 1) * inner].copy_from_slice(&buf[row..row + inner]);
        }
        for (r, &off) in offsets.iter().enumerate() {
            let row = (base | off) * inner;
            let dst = &mut buf[row..row + inner];
            dst.fill(ZERO);
            for s in 0..dt {
                let a = m[(r, s)];
                if a == ZERO {
                    continue;
                }
                let src = &tmp[s * inner..(s + 1) * inner];
                for (d, &x) in dst.iter_mut().zip(src) {
                    *d += a * x;
                }
            }
        }
    }
}
