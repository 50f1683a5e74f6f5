//! Cosine-sine decomposition of an even-dimensional unitary.
//!
//! `U = diag(S0, S1) * [[C, S], [-S, C]] * diag(T0, T1)` with `C`, `S` real,
//! nonnegative and diagonal, and the cosines in ascending order.

use crate::matrix::{Mat, C64};
use crate::policy::policy;
use crate::svd::{orthonormal_completion, svd};
use crate::NumericsError;

#[derive(Clone, Debug, PartialEq)]
pub struct CsDecomposition {
    pub s0: Mat,
    pub s1: Mat,
    pub sigma1: Vec<f64>,
    pub sigma2: Vec<f64>,
    pub t0: Mat,
    pub t1: Mat,
}

impl CsDecomposition {
    /// Half dimension `N` of the `2N x 2N` source matrix.
    pub fn half(&self) -> usize {
        self.sigma1.len()
    }

    /// The middle factor `[[C, S], [-S, C]]`.
    pub fn core(&self) -> Mat {
        cs_core(&self.sigma1, &self.sigma2)
    }

    pub fn reconstruct(&self) -> Mat {
        let left = Mat::block_diag(&self.s0, &self.s1);
        let right = Mat::block_diag(&self.t0, &self.t1);
        left.matmul(&self.core()).matmul(&right)
    }

    /// Reorders the stub entries so that new entry `i` is old entry `perm[i]`,
    /// absorbing the permutation into the block unitaries.
    pub fn permuted(&self, perm: &[usize]) -> CsDecomposition {
        assert_eq!(perm.len(), self.half());
        CsDecomposition {
            s0: self.s0.permute_cols(perm),
            s1: self.s1.permute_cols(perm),
            sigma1: perm.iter().map(|&p| self.sigma1[p]).collect(),
            sigma2: perm.iter().map(|&p| self.sigma2[p]).collect(),
            t0: self.t0.permute_rows(perm),
            t1: self.t1.permute_rows(perm),
        }
    }
}

/// `[[C, S], [-S, C]]` for diagonal `C = diag(c)`, `S = diag(s)`.
pub fn cs_core(c: &[f64], s: &[f64]) -> Mat {
    let n = c.len();
    let mut m = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, i)] = C64::new(c[i], 0.0);
        m[(n + i, n + i)] = C64::new(c[i], 0.0);
        m[(i, n + i)] = C64::new(s[i], 0.0);
        m[(n + i, i)] = C64::new(-s[i], 0.0);
    }
    m
}

pub fn cs_decompose(u: &Mat) -> Result<CsDecomposition, NumericsError> {
    if !u.is_square() {
        return Err(NumericsError::NotSquare { rows: u.rows(), cols: u.cols() });
    }
    let dim = u.rows();
    if dim % 2 != 0 || dim == 0 {
        return Err(NumericsError::OddDimension(dim));
    }
    let pol = policy();
    let defect = u.unitarity_defect();
    if defect > pol.unitarity_tol {
        return Err(NumericsError::NonUnitary { defect, tol: pol.unitarity_tol });
    }
    let n = dim / 2;
    let u00 = u.block(0, 0, n, n);
    let u01 = u.block(0, n, n, n);
    let u10 = u.block(n, 0, n, n);
    let u11 = u.block(n, n, n, n);

    // Right singular vectors of the leading block fix T0; cosines ascending.
    let dec = svd(&u00);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| dec.s[i].partial_cmp(&dec.s[j]).unwrap().then(i.cmp(&j)));
    let mut c: Vec<f64> = order.iter().map(|&i| dec.s[i].min(1.0)).collect();
    let mut t0 = Mat::zeros(n, n);
    for (row, &i) in order.iter().enumerate() {
        for k in 0..n {
            t0[(row, k)] = dec.v[(k, i)].conj();
        }
    }
    let mut s: Vec<f64> = c.iter().map(|&x| (1.0 - x * x).max(0.0).sqrt()).collect();

    // Within a cluster of near-equal cosines the SVD basis is arbitrary. Re-pick
    // it from the block where the cluster's values are small, which resolves
    // them to full relative accuracy.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && c[end] - c[end - 1] <= pol.cluster_tol {
            end += 1;
        }
        refine_cluster(u, &mut t0, &mut c, &mut s, start, end);
        start = end;
    }

    let t0h = t0.adjoint();
    let a = u00.matmul(&t0h);
    let b = u10.matmul(&t0h);

    // Orthonormalize each block from its best-conditioned column downwards.
    let s0 = ordered_basis(&a, &c, false);
    let s1 = ordered_basis(&b, &s, true);

    let x = s0.adjoint().matmul(&u01);
    let y = s1.adjoint().matmul(&u11);
    let mut t1 = Mat::zeros(n, n);
    for i in 0..n {
        let (src, w) = if s[i] >= c[i] { (&x, s[i]) } else { (&y, c[i]) };
        for k in 0..n {
            t1[(i, k)] = src[(i, k)] / w;
        }
    }

    let mut out = CsDecomposition { s0, s1, sigma1: c, sigma2: s, t0, t1 };
    normalize_phases(&mut out, pol.phase_tol);
    Ok(out)
}

fn refine_cluster(u: &Mat, t0: &mut Mat, c: &mut [f64], s: &mut [f64], lo: usize, hi: usize) {
    let n = t0.rows();
    let p = hi - lo;
    let use_sines = c[lo..hi].iter().sum::<f64>() / p as f64 >= std::f64::consts::FRAC_1_SQRT_2;
    let rows = t0.block(lo, 0, p, n);
    let blk = if use_sines { u.block(n, 0, n, n) } else { u.block(0, 0, n, n) };
    let proj = blk.matmul(&rows.adjoint());
    let dec = svd(&proj);
    // Singular values come out descending: descending sines, or cosines to flip.
    let mut perm: Vec<usize> = (0..p).collect();
    if !use_sines {
        perm.sort_by(|&i, &j| dec.s[i].partial_cmp(&dec.s[j]).unwrap().then(i.cmp(&j)));
    }
    let r = dec.v.permute_cols(&perm);
    let new_rows = r.adjoint().matmul(&rows);
    t0.set_block(lo, 0, &new_rows);
    for (k, &j) in perm.iter().enumerate() {
        let v = dec.s[j].min(1.0);
        let w = (1.0 - v * v).max(0.0).sqrt();
        if use_sines {
            s[lo + k] = v;
            c[lo + k] = w;
        } else {
            c[lo + k] = v;
            s[lo + k] = w;
        }
    }
}

/// Unitary whose column `i` is the direction of `m`'s column `i` (negated when
/// `negate`), built by Gram-Schmidt in order of decreasing weight.
fn ordered_basis(m: &Mat, weight: &[f64], negate: bool) -> Mat {
    let n = m.rows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| weight[j].partial_cmp(&weight[i]).unwrap().then(i.cmp(&j)));
    let sign = if negate { -1.0 } else { 1.0 };
    let cols: Vec<Vec<C64>> = idx
        .iter()
        .map(|&i| {
            if weight[i] > f64::EPSILON * 16.0 {
                m.col(i).into_iter().map(|z| z * sign).collect()
            } else {
                vec![C64::new(0.0, 0.0); n]
            }
        })
        .collect();
    let q = orthonormal_completion(&cols, n);
    let mut out = Mat::zeros(n, n);
    for (k, &i) in idx.iter().enumerate() {
        out.set_col(i, &q.col(k));
    }
    out
}

/// Makes the first significant entry of every row of `T0` real positive.
fn normalize_phases(d: &mut CsDecomposition, tol: f64) {
    let n = d.half();
    for i in 0..n {
        let lead = (0..n).map(|k| d.t0[(i, k)]).find(|z| z.norm() > tol);
        let Some(z) = lead else { continue };
        let ph = z / z.norm();
        let phc = ph.conj();
        for k in 0..n {
            d.t0[(i, k)] *= phc;
            d.t1[(i, k)] *= phc;
            d.s0[(k, i)] *= ph;
            d.s1[(k, i)] *= ph;
        }
    }
}
