//! Dense complex linear algebra for circuit compilation.
//!
//! Basis convention: qubit 0 is the most significant bit of a basis index.

pub mod csd;
pub mod matrix;
pub mod policy;
pub mod random;
pub mod svd;

pub use csd::{cs_core, cs_decompose, CsDecomposition};
pub use matrix::{dot, norm, Mat, C64, I, ONE, ZERO};
pub use policy::{policy, set_policy, NumericPolicy};
pub use svd::{spectral_norm, svd, Svd};
pub use random::{haar_unitary, random_matrix, random_phase, random_state};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("matrix is not unitary: defect {defect:.3e} exceeds {tol:.1e}")]
    NonUnitary { defect: f64, tol: f64 },
    #[error("dimension {0} is not even")]
    OddDimension(usize),
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0:?} vs {1:?}")]
    DimensionMismatch((usize, usize), (usize, usize)),
}

/// Number of qubits for a power-of-two dimension.
pub fn qubits_of(dim: usize) -> Result<usize, NumericsError> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(NumericsError::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Reverses the low `bits` bits of `x`.
#[inline]
pub fn bit_reverse(x: usize, bits: usize) -> usize {
    if bits == 0 {
        0
    } else {
        x.reverse_bits() >> (usize::BITS as usize - bits)
    }
}

/// The same operator with qubit order reversed.
pub fn rev(u: &Mat) -> Result<Mat, NumericsError> {
    if !u.is_square() {
        return Err(NumericsError::NotSquare { rows: u.rows(), cols: u.cols() });
    }
    let q = qubits_of(u.rows())?;
    Ok(Mat::from_fn(u.rows(), u.cols(), |r, c| u[(bit_reverse(r, q), bit_reverse(c, q))]))
}

/// Reverses the qubit order of a diagonal given as a vector.
pub fn rev_vec<T: Copy>(v: &[T]) -> Result<Vec<T>, NumericsError> {
    let q = qubits_of(v.len())?;
    Ok((0..v.len()).map(|i| v[bit_reverse(i, q)]).collect())
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (br, bc) = (b.rows(), b.cols());
    Mat::from_fn(a.rows() * br, a.cols() * bc, |r, c| a[(r / br, c / bc)] * b[(r % br, c % bc)])
}

pub fn kron_vec<T: Copy + std::ops::Mul<Output = T>>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

/// Spectral norm of `a - b`.
pub fn op_norm_distance(a: &Mat, b: &Mat) -> Result<f64, NumericsError> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(NumericsError::DimensionMismatch((a.rows(), a.cols()), (b.rows(), b.cols())));
    }
    Ok(spectral_norm(&(a - b)))
}

/// The fixed two-level gate `(1/sqrt 2) [[1, i], [i, 1]]`.
pub fn phi() -> Mat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Mat::from_rows(&[&[C64::new(h, 0.0), C64::new(0.0, h)], &[C64::new(0.0, h), C64::new(h, 0.0)]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use random::{haar_unitary, random_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn permutation_oracle(q: usize) -> Mat {
        let n = 1 << q;
        let mut p = Mat::zeros(n, n);
        for i in 0..n {
            // Build the reversed index digit by digit.
            let mut j = 0;
            for b in 0..q {
                if i & (1 << b) != 0 {
                    j |= 1 << (q - 1 - b);
                }
            }
            p[(j, i)] = ONE;
        }
        p
    }

    #[test]
    fn rev_single_qubit_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let u = haar_unitary(&mut rng, 2);
        assert_eq!(rev(&u).unwrap(), u);
    }

    #[test]
    fn rev_swaps_tensor_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = haar_unitary(&mut rng, 2);
        let b = haar_unitary(&mut rng, 2);
        assert!(rev(&kron(&a, &b)).unwrap().max_abs_diff(&kron(&b, &a)) < 1e-15);
    }

    #[test]
    fn rev_matches_permutation_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = haar_unitary(&mut rng, 8);
        let p = permutation_oracle(3);
        let expect = p.matmul(&u).matmul(&p);
        assert!(rev(&u).unwrap().max_abs_diff(&expect) < 1e-15);
        assert!(rev(&rev(&u).unwrap()).unwrap().max_abs_diff(&u) < 1e-14);
        assert!(matches!(rev(&Mat::identity(3)), Err(NumericsError::NotPowerOfTwo(3))));
    }

    #[test]
    fn distance_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = haar_unitary(&mut rng, 4);
        assert_eq!(op_norm_distance(&u, &u).unwrap(), 0.0);
        let id = Mat::identity(4);
        let d = op_norm_distance(&id, &id.scale(C64::new(-1.0, 0.0))).unwrap();
        assert!((d - 2.0).abs() < 1e-14);
        let a = random_matrix(&mut rng, 5, 5);
        let b = random_matrix(&mut rng, 5, 5);
        let full = svd(&(&a - &b)).s[0];
        assert!((op_norm_distance(&a, &b).unwrap() - full).abs() < 1e-12);
        assert!(op_norm_distance(&a, &Mat::identity(4)).is_err());
    }

    #[test]
    fn kron_identity() {
        assert_eq!(kron(&Mat::identity(2), &Mat::identity(2)), Mat::identity(4));
    }

    #[test]
    fn phi_is_sqrtz_h_sqrtz() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let had = Mat::from_real(2, 2, &[h, h, h, -h]);
        let sz = Mat::diag(&[ONE, I]);
        let prod = sz.matmul(&had).matmul(&sz);
        assert!(prod.max_abs_diff(&phi()) < 1e-12);
    }
}
