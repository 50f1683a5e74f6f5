//! One-sided Jacobi SVD for complex matrices.

use crate::matrix::{dot, norm, Mat, C64, ZERO};

/// `a = u * diag(s) * v^dagger` with `s` nonincreasing.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Mat,
    pub s: Vec<f64>,
    pub v: Mat,
}

impl Svd {
    pub fn reconstruct(&self) -> Mat {
        let k = self.s.len();
        let us = Mat::from_fn(self.u.rows(), k, |r, c| self.u[(r, c)] * self.s[c]);
        let vk = Mat::from_fn(self.v.rows(), k, |r, c| self.v[(r, c)]);
        us.matmul(&vk.adjoint())
    }
}

const MAX_SWEEPS: usize = 80;

/// Singular value decomposition of an arbitrary matrix.
///
/// Wide inputs are handled through their adjoint. `u` is square (rows x rows),
/// `v` is square (cols x cols), and `s` has `min(rows, cols)` entries.
pub fn svd(a: &Mat) -> Svd {
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    let (m, n) = (a.rows(), a.cols());
    // Work on columns stored contiguously.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|c| a.col(c)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|c| {
            let mut e = vec![ZERO; n];
            e[c] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    let eps = f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|x| x.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|x| x.norm_sqr()).sum();
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // [a_p a_q] <- [a_p a_q] * [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
                let ph = phase.conj();
                rotate(&mut cols, p, q, c, s, ph);
                rotate(&mut v, p, q, c, s, ph);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap().then(i.cmp(&j)));

    let smax = norms.iter().cloned().fold(0.0, f64::max);
    let floor = smax * (m.max(n) as f64) * eps;
    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(m);
    let mut s = Vec::with_capacity(n);
    let mut vmat = Mat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        s.push(norms[i]);
        vmat.set_col(k, &v[i]);
        if norms[i] > floor && norms[i] > 0.0 {
            let inv = 1.0 / norms[i];
            u_cols.push(cols[i].iter().map(|x| x * inv).collect());
        } else {
            u_cols.push(vec![ZERO; m]);
        }
    }
    // Re-orthonormalize from the largest column down; fills rank-deficient slots.
    let u = orthonormal_completion(&u_cols, m);
    Svd { u, s, v: vmat }
}

fn rotate(vs: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, ph: C64) {
    let (lo, hi) = vs.split_at_mut(q);
    let (ap, aq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in ap.iter_mut().zip(aq.iter_mut()) {
        let xp = *x;
        let yq = *y * ph;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

/// Gram-Schmidt (two passes) over the given columns in order. Zero or
/// dependent columns are replaced by the standard basis vector that best
/// survives projection. Returns an `m x m` unitary.
pub fn orthonormal_completion(cols: &[Vec<C64>], m: usize) -> Mat {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m);
    let mut out_cols: Vec<Vec<C64>> = Vec::with_capacity(m);
    let mut pending: Vec<Option<Vec<C64>>> = cols.iter().map(|c| Some(c.clone())).collect();
    while pending.len() < m {
        pending.push(None);
    }
    for cand in pending.into_iter() {
        let mut placed = None;
        if let Some(c) = cand {
            let n0 = norm(&c);
            if n0 > 0.0 {
                let w = project_out(&c, &basis);
                let nw = norm(&w);
                if nw > 1e-3 * n0 {
                    placed = Some(w.iter().map(|x| x / nw).collect::<Vec<_>>());
                }
            }
        }
        let col = match placed {
            Some(c) => c,
            None => {
                // Standard basis vector with the largest residual.
                let mut best: Option<(f64, Vec<C64>)> = None;
                for k in 0..m {
                    let mut e = vec![ZERO; m];
                    e[k] = C64::new(1.0, 0.0);
                    let w = project_out(&e, &basis);
                    let nw = norm(&w);
                    if best.as_ref().is_none_or(|(b, _)| nw > *b + 1e-12) {
                        best = Some((nw, w));
                    }
                }
                let (nw, w) = best.expect("empty space");
                w.iter().map(|x| x / nw).collect()
            }
        };
        basis.push(col.clone());
        out_cols.push(col);
    }
    let mut u = Mat::zeros(m, m);
    for (k, c) in out_cols.iter().enumerate() {
        u.set_col(k, c);
    }
    u
}

fn project_out(v: &[C64], basis: &[Vec<C64>]) -> Vec<C64> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for b in basis {
            let p = dot(b, &w);
            for (x, y) in w.iter_mut().zip(b) {
                *x -= p * y;
            }
        }
    }
    w
}

/// Largest singular value. Exact Jacobi for small matrices, power iteration
/// on `a^dagger a` otherwise.
pub fn spectral_norm(a: &Mat) -> f64 {
    let n = a.rows().min(a.cols());
    if n == 0 {
        return 0.0;
    }
    if n <= 64 {
        return svd(a).s[0];
    }
    power_norm(a)
}

fn power_norm(a: &Mat) -> f64 {
    let n = a.cols();
    // Deterministic start vector with all components populated.
    let mut x: Vec<C64> =
        (0..n).map(|i| C64::new(1.0 + (i as f64 * 0.618).fract(), (i as f64 * 0.382).fract())).collect();
    let nx = norm(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let ah = a.adjoint();
    let mut est = 0.0;
    for it in 0..400 {
        let y = a.matvec(&x);
        let ny = norm(&y);
        if ny == 0.0 {
            return 0.0;
        }
        let z = ah.matvec(&y);
        let nz = norm(&z);
        let new_est = ny;
        x = z.iter().map(|v| v / nz).collect();
        if it > 5 && (new_est - est).abs() <= 1e-13 * new_est.max(1e-300) {
            return new_est;
        }
        est = new_est;
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, random_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diag_values() {
        let a = Mat::diag_real(&[3.0, 1.0]);
        let r = svd(&a);
        assert!((r.s[0] - 3.0).abs() < 1e-15 && (r.s[1] - 1.0).abs() < 1e-15);
        let b = Mat::diag_real(&[1.0, 3.0]);
        let r = svd(&b);
        assert_eq!(r.s, vec![3.0, 1.0]);
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 1..10 {
            let a = random_matrix(&mut rng, n, n);
            let r = svd(&a);
            assert!(r.reconstruct().max_abs_diff(&a) < 1e-12, "n={n}");
            assert!(r.u.is_unitary(1e-12) && r.v.is_unitary(1e-12));
            assert!(r.s.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_matrix(&mut rng, 5, 3);
        let r = svd(&a);
        assert!(r.reconstruct().max_abs_diff(&a) < 1e-12);
        let w = random_matrix(&mut rng, 2, 4);
        let r = svd(&w);
        assert!(r.reconstruct().max_abs_diff(&w) < 1e-12);
        let x = random_matrix(&mut rng, 4, 1);
        let rank1 = x.matmul(&x.adjoint());
        let r = svd(&rank1);
        assert!(r.reconstruct().max_abs_diff(&rank1) < 1e-12);
        assert!(r.u.is_unitary(1e-12));
        assert!(r.s[1] < 1e-12);
    }

    #[test]
    fn unitary_has_unit_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = haar_unitary(&mut rng, 6);
        let r = svd(&u);
        assert!(r.s.iter().all(|s| (s - 1.0).abs() < 1e-13));
    }

    #[test]
    fn power_matches_jacobi() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_matrix(&mut rng, 70, 70);
        let exact = svd(&a).s[0];
        assert!((power_norm(&a) - exact).abs() < 1e-9 * exact);
    }
}
