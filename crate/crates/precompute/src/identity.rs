use qcasc_cascade::{ControlCascade, MnGroup, ValleySpec};
use qcasc_ir::{Circuit, Control, Gate};
use qcasc_numerics::{cs_decompose, kron, kron_vec, phi, rev, rev_vec, CsDecomposition, Mat, C64, ONE};

use crate::valley::valley_stub_product;
use crate::{PrecomputeError, MAX_BLOCK_QUBITS};

/// Factors of a rewritten multiplexer on `k` targets.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecomputeParts {
    /// Number of target wires.
    pub k: usize,
    /// Preprocessing unitary on all targets.
    pub p: Mat,
    /// Phases of the controlled diagonal on the last `d_qubits` targets.
    pub d: Vec<C64>,
    pub d_qubits: usize,
    /// Controlled one-qubit gate on the bottom target, replacing `D` and `Phi`.
    pub q: Option<Mat>,
    /// Cases of `R` indexed by `(c, b)`; each acts on the `k - 1` middle targets.
    pub r_cases: Vec<Mat>,
    /// Stub permutation applied to the raw decomposition (`new[i] = old[perm[i]]`).
    pub stub_order: Vec<usize>,
}

impl PrecomputeParts {
    fn bottom(targets: &[usize]) -> usize {
        *targets.last().expect("at least one target")
    }

    pub fn p_gate(&self, targets: &[usize]) -> Gate {
        Gate::unitary(targets.to_vec(), self.p.clone())
    }

    /// Gates between `P` and `R`.
    pub fn middle_gates(&self, control: usize, targets: &[usize]) -> Vec<Gate> {
        let b = Self::bottom(targets);
        match &self.q {
            Some(q) => vec![Gate::controlled(vec![Control::closed(control)], vec![b], q.clone())],
            None => {
                let mut wires = vec![control];
                wires.extend_from_slice(&targets[targets.len() - self.d_qubits..]);
                let mut phases = vec![ONE; self.d.len()];
                phases.extend_from_slice(&self.d);
                vec![Gate::diagonal(wires, phases), Gate::one(b, phi())]
            }
        }
    }

    pub fn r_gate(&self, control: usize, targets: &[usize]) -> Gate {
        let b = Self::bottom(targets);
        if self.k == 1 {
            Gate::diagonal(vec![control, b], self.r_cases.iter().map(|m| m[(0, 0)]).collect())
        } else {
            Gate::multiplexer(vec![control, b], targets[..self.k - 1].to_vec(), self.r_cases.clone())
        }
    }

    /// All gates in time order.
    pub fn gates(&self, control: usize, targets: &[usize]) -> Vec<Gate> {
        let mut g = vec![self.p_gate(targets)];
        g.extend(self.middle_gates(control, targets));
        g.push(self.r_gate(control, targets));
        g
    }

    /// The rewritten circuit on `k + 1` wires with the control on wire 0.
    pub fn circuit(&self) -> Circuit {
        let targets: Vec<usize> = (1..=self.k).collect();
        let mut c = Circuit::new(self.k + 1);
        c.extend(self.gates(0, &targets));
        c
    }

    pub fn assemble(&self) -> Result<Mat, PrecomputeError> {
        Ok(self.circuit().unitary_of()?)
    }
}

fn check_pair(u0: &Mat, u1: &Mat) -> Result<usize, PrecomputeError> {
    if !u0.is_square() || u0.rows() != u1.rows() || u0.cols() != u1.cols() {
        return Err(PrecomputeError::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            u0.rows(),
            u0.cols(),
            u1.rows(),
            u1.cols()
        )));
    }
    let k = qcasc_numerics::qubits_of(u0.rows())?;
    if k == 0 {
        return Err(PrecomputeError::DimensionMismatch("bodies must act on at least one qubit".into()));
    }
    if k > MAX_BLOCK_QUBITS {
        return Err(PrecomputeError::GuardExceeded { qubits: k, max: MAX_BLOCK_QUBITS });
    }
    for (m, what) in [(u0, "U0"), (u1, "U1")] {
        let defect = m.unitarity_defect();
        if defect > 1e-10 {
            return Err(PrecomputeError::NonUnitary { what: what.into(), defect });
        }
    }
    Ok(k)
}

/// `rev` of `diag(a, b)`: the multiplexer on the targets selected by the bottom wire.
fn bottom_mux(a: &Mat, b: &Mat) -> Result<Mat, PrecomputeError> {
    Ok(rev(&Mat::block_diag(a, b))?)
}

fn r_cases(cs: &CsDecomposition) -> Result<Vec<Mat>, PrecomputeError> {
    Ok(vec![rev(&cs.t0)?.adjoint(), rev(&cs.t1)?.adjoint(), rev(&cs.s0)?, rev(&cs.s1)?])
}

/// Parts for `diag(u0, u1)` from a decomposition of `rev(u1 u0^dagger)`.
fn parts_from_cs(u0: &Mat, cs: &CsDecomposition, k: usize, stub_order: Vec<usize>) -> Result<PrecomputeParts, PrecomputeError> {
    let t_mux = bottom_mux(&cs.t0, &cs.t1)?;
    let phi_b = kron(&Mat::identity(1 << (k - 1)), &phi());
    let p = phi_b.adjoint().matmul(&t_mux).matmul(u0);
    let mut w_order: Vec<C64> = cs.sigma1.iter().zip(&cs.sigma2).map(|(&c, &s)| C64::new(c, s)).collect();
    w_order.extend(cs.sigma1.iter().zip(&cs.sigma2).map(|(&c, &s)| C64::new(c, -s)));
    Ok(PrecomputeParts {
        k,
        p,
        d: rev_vec(&w_order)?,
        d_qubits: k,
        q: None,
        r_cases: r_cases(cs)?,
        stub_order,
    })
}

/// Rewrites `diag(u0, u1)` through a cosine-sine decomposition of
/// `W = rev(u1 u0^dagger)`.
pub fn precompute_identity(u0: &Mat, u1: &Mat) -> Result<PrecomputeParts, PrecomputeError> {
    let k = check_pair(u0, u1)?;
    let w = rev(&u1.matmul(&u0.adjoint()))?;
    let cs = cs_decompose(&w)?;
    parts_from_cs(u0, &cs, k, (0..cs.half()).collect())
}

/// Staircase form for a run of one-qubit gates `U^(1..l)`: the diagonal
/// collapses to a single controlled one-qubit `Q` on the bottom wire.
pub fn mn_precompute(gates: &[Mat]) -> Result<PrecomputeParts, PrecomputeError> {
    if gates.is_empty() {
        return Err(PrecomputeError::ShapeMismatch("empty staircase".into()));
    }
    let k = gates.len();
    if k > MAX_BLOCK_QUBITS {
        return Err(PrecomputeError::GuardExceeded { qubits: k, max: MAX_BLOCK_QUBITS });
    }
    let stub = valley_stub_product(&ValleySpec::new(gates.to_vec())?)?;
    let group = MnGroup { gates: gates.to_vec() };
    let (v0, v1) = (group.v0()?, group.v1()?);
    let w = rev(&v1.matmul(&v0.adjoint()))?;
    let mut cs = cs_decompose(&w)?;
    let s = stub.value();
    let spread = cs.sigma2.iter().map(|x| (x - s).abs()).fold(0.0, f64::max);
    if spread > 1e-8 {
        return Err(PrecomputeError::StubMismatch(spread));
    }
    let c = (1.0 - s * s).max(0.0).sqrt();
    cs.sigma1.fill(c);
    cs.sigma2.fill(s);
    let t_mux = bottom_mux(&cs.t0, &cs.t1)?;
    let q = Mat::from_real(2, 2, &[c, s, -s, c]);
    Ok(PrecomputeParts {
        k,
        p: t_mux.matmul(&v0),
        d: vec![C64::new(c, s), C64::new(c, -s)],
        d_qubits: 1,
        q: Some(q),
        r_cases: r_cases(&cs)?,
        stub_order: (0..cs.half()).collect(),
    })
}

/// Result of [`refined_stub_factor`].
#[derive(Clone, Debug, PartialEq)]
pub struct RefinedFactor {
    /// Phases of `D'` on the last `d - l` wires.
    pub d_prime: Vec<C64>,
    /// The unfactored diagonal over all targets, `I^(l-1) (x) D'`.
    pub d_full: Vec<C64>,
    /// Parts whose diagonal is `D'`.
    pub parts: PrecomputeParts,
}

/// Permutation `perm` with `values[perm[i]]` close to `target[i]`, found by
/// matching the two sorted orders.
fn sorted_matching(values: &[f64], target: &[f64]) -> (Vec<usize>, f64) {
    let order = |v: &[f64]| {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)));
        idx
    };
    let (ov, ot) = (order(values), order(target));
    let mut perm = vec![0; values.len()];
    let mut worst: f64 = 0.0;
    for (&i, &j) in ov.iter().zip(&ot) {
        perm[j] = i;
        worst = worst.max((values[i] - target[j]).abs());
    }
    (perm, worst)
}

/// Rewrites a whole cascade of `l` blocks, taken as one multiplexer controlled
/// by wire 0, so that its diagonal acts on only the last `d - l` wires.
pub fn refined_stub_factor(c: &ControlCascade) -> Result<RefinedFactor, PrecomputeError> {
    let l = c.m();
    if l == 0 {
        return Err(PrecomputeError::ShapeMismatch("cascade has no blocks".into()));
    }
    let k = c.total_qubits() - 1;
    if k > MAX_BLOCK_QUBITS {
        return Err(PrecomputeError::GuardExceeded { qubits: k, max: MAX_BLOCK_QUBITS });
    }
    let full = c.lower_naive().unitary_of()?;
    let h = full.rows() / 2;
    let (u0, u1) = (full.block(0, 0, h, h), full.block(h, h, h, h));
    let w = rev(&u1.matmul(&u0.adjoint()))?;
    let cs = cs_decompose(&w)?;

    // Predicted stubs: tensor product of the layer stubs, then the identity
    // factor on the last l - 1 wires of the reversed order.
    let mut hat = vec![1.0];
    for b in &c.blocks {
        let layer = rev(&b.u1.matmul(&b.u0.adjoint()))?;
        hat = kron_vec(&hat, &cs_decompose(&layer)?.sigma2);
    }
    let target = kron_vec(&hat, &vec![1.0; 1 << (l - 1)]);
    if target.len() != cs.half() {
        return Err(PrecomputeError::ShapeMismatch(format!(
            "predicted {} stubs, decomposition has {}",
            target.len(),
            cs.half()
        )));
    }
    let (perm, worst) = sorted_matching(&cs.sigma2, &target);
    if worst > 1e-8 {
        return Err(PrecomputeError::StubMismatch(worst));
    }
    let cs = cs.permuted(&perm);
    let mut parts = parts_from_cs(&u0, &cs, k, perm)?;
    let dq = k - (l - 1);
    let width = 1usize << dq;
    let d_full = parts.d.clone();
    let d_prime = d_full[..width].to_vec();
    let rep = d_full.iter().enumerate().map(|(x, z)| (z - d_prime[x % width]).norm()).fold(0.0, f64::max);
    if rep > 1e-9 {
        return Err(PrecomputeError::StubMismatch(rep));
    }
    parts.d = d_prime.clone();
    parts.d_qubits = dq;
    Ok(RefinedFactor { d_prime, d_full, parts })
}
