//! Fixed gate matrices and single-qubit Euler angles.

use qcasc_numerics::{Mat, C64, I, ONE, ZERO};

pub fn x() -> Mat {
    Mat::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])
}

pub fn z() -> Mat {
    Mat::diag(&[ONE, -ONE])
}

pub fn h() -> Mat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Mat::from_real(2, 2, &[s, s, s, -s])
}

pub fn s_gate() -> Mat {
    Mat::diag(&[ONE, I])
}

/// `diag(e^{-i t/2}, e^{i t/2})`.
pub fn rz(theta: f64) -> Mat {
    Mat::diag(&[C64::from_polar(1.0, -theta / 2.0), C64::from_polar(1.0, theta / 2.0)])
}

/// `[[cos t/2, -sin t/2], [sin t/2, cos t/2]]`.
pub fn ry(theta: f64) -> Mat {
    let (s, c) = (theta / 2.0).sin_cos();
    Mat::from_real(2, 2, &[c, -s, s, c])
}

/// Phase gate `diag(1, e^{2 pi i t})` with `t` in turns.
pub fn phase_turns(t: f64) -> Mat {
    Mat::diag(&[ONE, C64::from_polar(1.0, std::f64::consts::TAU * t)])
}

pub fn cnot() -> Mat {
    Mat::from_real(
        4,
        4,
        &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.],
    )
}

pub fn swap() -> Mat {
    Mat::from_real(
        4,
        4,
        &[1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.],
    )
}

/// Angles with `u = e^{i alpha} rz(beta) ry(gamma) rz(delta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zyz {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl Zyz {
    pub fn matrix(&self) -> Mat {
        rz(self.beta)
            .matmul(&ry(self.gamma))
            .matmul(&rz(self.delta))
            .scale(C64::from_polar(1.0, self.alpha))
    }
}

pub fn zyz(u: &Mat) -> Zyz {
    assert_eq!((u.rows(), u.cols()), (2, 2), "zyz needs a 2x2 matrix");
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let alpha = det.arg() / 2.0;
    let ph = C64::from_polar(1.0, -alpha);
    let a = u[(0, 0)] * ph;
    let b = u[(1, 0)] * ph;
    let gamma = 2.0 * b.norm().atan2(a.norm());
    let tol = 1e-14;
    let (sum, diff) = match (a.norm() > tol, b.norm() > tol) {
        (true, true) => (-2.0 * a.arg(), 2.0 * b.arg()),
        (true, false) => (-2.0 * a.arg(), 0.0),
        (false, _) => (0.0, 2.0 * b.arg()),
    };
    Zyz { alpha, beta: (sum + diff) / 2.0, gamma, delta: (sum - diff) / 2.0 }
}
