use std::f64::consts::TAU;

use qcasc_numerics::C64;

use crate::ParallelError;

/// Angle of `z` in turns, in `[0, 1)`.
pub fn turns(z: C64) -> f64 {
    let t = (z.arg() / TAU).rem_euclid(1.0);
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

fn unit_turns(t: f64) -> C64 {
    C64::from_polar(1.0, TAU * t)
}

/// A controlled diagonal on `k` targets split into two multiplexed phase
/// gates on the bottom target: `theta[x]` applies when the bottom bit is 1,
/// `phi[x]` when it is 0, both under the control and the upper bits `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseTable {
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
}

impl PhaseTable {
    /// The diagonal the two phase gates apply under a closed control.
    pub fn diagonal(&self) -> Vec<C64> {
        self.phi.iter().zip(&self.theta).flat_map(|(&p, &t)| [unit_turns(p), unit_turns(t)]).collect()
    }
}

pub fn phase_tables_of(d: &[C64]) -> Result<PhaseTable, ParallelError> {
    if d.len() < 2 || !d.len().is_power_of_two() {
        return Err(ParallelError::GuardExceeded { what: "diagonal length", value: d.len(), max: 1 << 30 });
    }
    if let Some((index, z)) = d.iter().enumerate().find(|(_, z)| (z.norm() - 1.0).abs() > 1e-10) {
        return Err(ParallelError::NonUnitModulus { index, modulus: z.norm() });
    }
    Ok(PhaseTable {
        phi: d.iter().step_by(2).map(|&z| turns(z)).collect(),
        theta: d.iter().skip(1).step_by(2).map(|&z| turns(z)).collect(),
    })
}

/// Bits per angle for `m` blocks at target error `epsilon`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxBudget {
    pub epsilon: f64,
    pub r: usize,
}

impl ApproxBudget {
    pub fn new(m: usize, epsilon: f64) -> Result<Self, ParallelError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(ParallelError::InvalidEpsilon(epsilon));
        }
        let r = (m.max(1) as f64 / epsilon).log2().ceil().max(1.0) as usize;
        Ok(ApproxBudget { epsilon, r })
    }

    /// First `r` binary digits of `t` in `[0, 1)`, most significant first.
    pub fn bits(&self, t: f64) -> Vec<bool> {
        let mut v = t;
        (0..self.r)
            .map(|_| {
                v *= 2.0;
                let b = v >= 1.0;
                if b {
                    v -= 1.0;
                }
                b
            })
            .collect()
    }

    /// `t` truncated to `r` binary digits.
    pub fn truncate(&self, t: f64) -> f64 {
        self.bits(t).iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| 0.5f64.powi(j as i32 + 1)).sum()
    }

    /// Operator-norm error of replacing the phase `t` by its truncation.
    pub fn phase_error(&self, t: f64) -> f64 {
        (unit_turns(t) - unit_turns(self.truncate(t))).norm()
    }

    /// Linear error budget `m 2^(1-r)` over `2m` truncated phase gates.
    pub fn nominal(&self, m: usize) -> f64 {
        m as f64 * 0.5f64.powi(self.r as i32 - 1)
    }
}
