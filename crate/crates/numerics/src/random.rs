//! Seeded random matrices for tests and generators.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::{Mat, C64};

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Mat {
    Mat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed unitary: Gram-Schmidt on a Ginibre matrix, which leaves
/// the triangular factor with a positive diagonal.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Mat {
    let g = random_matrix(rng, n, n);
    let cols: Vec<Vec<C64>> = (0..n).map(|c| g.col(c)).collect();
    crate::svd::orthonormal_completion(&cols, n)
}

/// Random unit vector in `C^n`.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let nv = crate::matrix::norm(&v);
    v.into_iter().map(|x| x / nv).collect()
}

/// Uniform phase `e^{i t}` with `t` in `[0, 2 pi)`.
pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}
