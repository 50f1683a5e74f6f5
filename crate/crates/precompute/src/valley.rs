use qcasc_cascade::ValleySpec;
use qcasc_numerics::{kron, CsDecomposition, Mat, C64, ONE};

use crate::PrecomputeError;

/// Sine stubs of a decomposition, each in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StubVector {
    pub values: Vec<f64>,
}

impl StubVector {
    /// The common value of a constant stub vector (the first entry).
    pub fn value(&self) -> f64 {
        self.values[0]
    }

    /// Matching cosine stubs.
    pub fn partners(&self) -> Vec<f64> {
        self.values.iter().map(|s| (1.0 - s * s).max(0.0).sqrt()).collect()
    }
}

/// Constant sine stub of a valley of one-qubit layers: the product of the
/// off-diagonal magnitudes, repeated over half the valley's dimension.
pub fn valley_stub_product(v: &ValleySpec) -> Result<StubVector, PrecomputeError> {
    let mut s = 1.0;
    for (j, u) in v.layers.iter().enumerate() {
        if u.rows() != 2 || u.cols() != 2 {
            return Err(PrecomputeError::NonSingleQubitLayer(j + 1));
        }
        s *= u[(0, 1)].norm();
    }
    Ok(StubVector { values: vec![s.min(1.0); 1 << v.layers.len().saturating_sub(1)] })
}

fn proj(bit: usize) -> Mat {
    let mut p = Mat::zeros(2, 2);
    p[(bit, bit)] = ONE;
    p
}

fn check(cs: &CsDecomposition, name: &str) -> Result<(), PrecomputeError> {
    let n = cs.half();
    let ok = n > 0
        && cs.sigma2.len() == n
        && [&cs.s0, &cs.s1, &cs.t0, &cs.t1].iter().all(|m| m.rows() == n && m.cols() == n);
    if ok {
        Ok(())
    } else {
        Err(PrecomputeError::InconsistentDimensions(format!("decomposition of {name} has mismatched blocks")))
    }
}

/// Decomposition of the basic valley built from decompositions of its two
/// layers. `v` is the inner layer; `u` sits above it and is controlled by
/// `v`'s top wire, so the valley is, in time order, `cU^dagger, V, cU`
/// (see [`ValleySpec`] with layers `[V, U]`).
///
/// The sine stubs come out as `sigma2(U) (x) I_2 (x) sigma2(V)` in the order
/// (rest of `U`, top wire of `V`, rest of `V`), and the cosines are the
/// singular values of the top-left block.
pub fn valley_cs(u: &CsDecomposition, v: &CsDecomposition) -> Result<CsDecomposition, PrecomputeError> {
    check(u, "U")?;
    check(v, "V")?;
    let (nu, nv) = (u.half(), v.half());
    let half = nu * 2 * nv;

    // Work with the adjoint layer: U^dagger = diag(T0^+, -T1^+) core diag(S0^+, -S1^+).
    let su = [u.t0.adjoint(), u.t1.adjoint().scale(-ONE)];
    let tu = [u.s0.adjoint(), u.s1.adjoint().scale(-ONE)];
    // Multiplexer on the rest of U selected by (top of U, top of V).
    let rt = [[su[0].adjoint(), tu[0].clone()], [su[1].adjoint(), tu[1].clone()]];
    let (sv, tv) = ([&v.s0, &v.s1], [&v.t0, &v.t1]);

    let mut outer_left = [Mat::zeros(half, half), Mat::zeros(half, half)];
    let mut outer_right = [Mat::zeros(half, half), Mat::zeros(half, half)];
    for top in 0..2 {
        for w in 0..2 {
            outer_left[top] = &outer_left[top] + &kron(&kron(&rt[top][w].adjoint(), &proj(w)), sv[w]);
            outer_right[top] = &outer_right[top] + &kron(&kron(&rt[top][w], &proj(w)), tv[w]);
        }
    }

    // Diagonal core: per (p, q) a real 4x4 block on (top of U, top of V) whose
    // top-left 2x2 block is [[alpha, a beta], [-a beta, alpha]].
    let mut inner_s = [Mat::zeros(half, half), Mat::zeros(half, half)];
    let mut inner_t = [Mat::zeros(half, half), Mat::zeros(half, half)];
    let mut sigma1 = vec![0.0; half];
    let mut sigma2 = vec![0.0; half];
    let re = |x: f64| C64::new(x, 0.0);
    for p in 0..nu {
        let (a, s) = (u.sigma1[p], u.sigma2[p]);
        for q in 0..nv {
            let (alpha, beta) = (v.sigma1[q], v.sigma2[q]);
            let b = a * beta;
            let c = alpha.hypot(b);
            // L diagonalizes [[b, alpha], [alpha, -b]] = L^T diag(c, -c) L.
            let theta = if c > 0.0 { alpha.atan2(b) } else { 0.0 };
            let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            let l = [[ch, sh], [-sh, ch]];
            let lt = |i: usize, j: usize| l[j][i];
            let idx = |w: usize| (p * 2 + w) * nv + q;
            for i in 0..2 {
                sigma1[idx(i)] = c;
                sigma2[idx(i)] = s * beta;
                for j in 0..2 {
                    let z = if j == 0 { 1.0 } else { -1.0 };
                    let zi = if i == 0 { 1.0 } else { -1.0 };
                    // S0 = L^T, S1 = L^T Z, T0 = Z L X, T1 = L X
                    inner_s[0][(idx(i), idx(j))] = re(lt(i, j));
                    inner_s[1][(idx(i), idx(j))] = re(lt(i, j) * z);
                    inner_t[0][(idx(i), idx(j))] = re(zi * l[i][1 - j]);
                    inner_t[1][(idx(i), idx(j))] = re(l[i][1 - j]);
                }
            }
        }
    }
    Ok(CsDecomposition {
        s0: outer_left[0].matmul(&inner_s[0]),
        s1: outer_left[1].matmul(&inner_s[1]),
        sigma1,
        sigma2,
        t0: inner_t[0].matmul(&outer_right[0]),
        t1: inner_t[1].matmul(&outer_right[1]),
    })
}
