//! Seeded input generators.

use qcasc_ir::std_gates::h;
use qcasc_numerics::{haar_unitary, random_phase, Mat, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CascadeBlock, ControlCascade, MnCascade};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Independent Haar-random bodies.
    Haar,
    /// Every gate a Hadamard.
    Hadamard,
    /// Random diagonal bodies.
    Diagonal,
    /// Identity bodies.
    Identity,
    /// Antidiagonal bodies with random phases: permutations that flip every
    /// bit, so staircase stubs stay at 1.
    AntiDiagonal,
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "haar" | "random" => Ok(Family::Haar),
            "hadamard" | "h" => Ok(Family::Hadamard),
            "diagonal" => Ok(Family::Diagonal),
            "identity" => Ok(Family::Identity),
            "antidiagonal" => Ok(Family::AntiDiagonal),
            _ => Err(format!("unknown family '{s}'")),
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn body<R: Rng>(rng: &mut R, family: Family, dim: usize) -> Mat {
    match family {
        Family::Haar => haar_unitary(rng, dim),
        Family::Hadamard => {
            let mut m = Mat::identity(1);
            for _ in 0..dim.trailing_zeros() {
                m = qcasc_numerics::kron(&m, &h());
            }
            m
        }
        Family::Diagonal => {
            let d: Vec<C64> = (0..dim).map(|_| random_phase(rng)).collect();
            Mat::diag(&d)
        }
        Family::Identity => Mat::identity(dim),
        Family::AntiDiagonal => {
            let mut m = Mat::zeros(dim, dim);
            for i in 0..dim {
                m[(dim - 1 - i, i)] = random_phase(rng);
            }
            m
        }
    }
}

pub fn mn_cascade(m: usize, family: Family, seed: u64) -> MnCascade {
    let mut r = rng(seed);
    MnCascade { gates: (0..m).map(|_| body(&mut r, family, 2)).collect() }
}

/// Cascade of `m` multiplexers with `k`-qubit bodies. The Hadamard family puts
/// the identity on the open branch.
pub fn control_cascade(k: usize, m: usize, family: Family, seed: u64) -> ControlCascade {
    let mut r = rng(seed);
    let dim = 1 << k;
    let blocks = (0..m)
        .map(|_| match family {
            Family::Hadamard => CascadeBlock { u0: Mat::identity(dim), u1: body(&mut r, family, dim) },
            _ => CascadeBlock { u0: body(&mut r, family, dim), u1: body(&mut r, family, dim) },
        })
        .collect();
    ControlCascade { blocks }
}
