use qcasc_numerics::{Mat, C64};

use crate::IrError;

/// A control wire together with the value it must read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    /// `true` fires on |1> (closed dot), `false` on |0> (open dot).
    pub closed: bool,
}

impl Control {
    pub fn closed(qubit: usize) -> Self {
        Control { qubit, closed: true }
    }

    pub fn open(qubit: usize) -> Self {
        Control { qubit, closed: false }
    }
}

/// One instruction. Matrices act on their qubit lists with the first listed
/// qubit as the most significant bit; multiplexer cases are indexed the same
/// way by the control bits.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    OneQubit { qubit: usize, matrix: Mat },
    TwoQubit { qubits: [usize; 2], matrix: Mat },
    Controlled { controls: Vec<Control>, targets: Vec<usize>, body: Mat },
    Multiplexer { controls: Vec<usize>, targets: Vec<usize>, cases: Vec<Mat> },
    Diagonal { targets: Vec<usize>, phases: Vec<C64> },
    Swap { a: usize, b: usize },
    /// Multiplies the whole state by `e^{i angle}`.
    GlobalPhase { angle: f64 },
}

impl Gate {
    pub fn one(qubit: usize, matrix: Mat) -> Gate {
        Gate::OneQubit { qubit, matrix }
    }

    pub fn two(a: usize, b: usize, matrix: Mat) -> Gate {
        Gate::TwoQubit { qubits: [a, b], matrix }
    }

    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::two(control, target, crate::std_gates::cnot())
    }

    /// Uncontrolled unitary on any number of qubits.
    pub fn unitary(targets: Vec<usize>, matrix: Mat) -> Gate {
        match targets.len() {
            1 => Gate::one(targets[0], matrix),
            2 => Gate::two(targets[0], targets[1], matrix),
            _ => Gate::Multiplexer { controls: vec![], targets, cases: vec![matrix] },
        }
    }

    pub fn controlled(controls: Vec<Control>, targets: Vec<usize>, body: Mat) -> Gate {
        Gate::Controlled { controls, targets, body }
    }

    pub fn multiplexer(controls: Vec<usize>, targets: Vec<usize>, cases: Vec<Mat>) -> Gate {
        Gate::Multiplexer { controls, targets, cases }
    }

    pub fn diagonal(targets: Vec<usize>, phases: Vec<C64>) -> Gate {
        Gate::Diagonal { targets, phases }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Gate::OneQubit { .. } => "one_qubit",
            Gate::TwoQubit { .. } => "two_qubit",
            Gate::Controlled { .. } => "controlled",
            Gate::Multiplexer { .. } => "multiplexer",
            Gate::Diagonal { .. } => "diagonal",
            Gate::Swap { .. } => "swap",
            Gate::GlobalPhase { .. } => "global_phase",
        }
    }

    /// Every qubit the gate touches: controls first, then targets.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::OneQubit { qubit, .. } => vec![*qubit],
            Gate::TwoQubit { qubits, .. } => qubits.to_vec(),
            Gate::Controlled { controls, targets, .. } => {
                controls.iter().map(|c| c.qubit).chain(targets.iter().copied()).collect()
            }
            Gate::Multiplexer { controls, targets, .. } => {
                controls.iter().chain(targets.iter()).copied().collect()
            }
            Gate::Diagonal { targets, .. } => targets.clone(),
            Gate::Swap { a, b } => vec![*a, *b],
            Gate::GlobalPhase { .. } => vec![],
        }
    }

    /// Whether the gate belongs to the 1- and 2-qubit basis.
    pub fn is_basis(&self) -> bool {
        matches!(self, Gate::OneQubit { .. } | Gate::TwoQubit { .. } | Gate::GlobalPhase { .. })
    }

    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::OneQubit { qubit, matrix } => Gate::one(*qubit, matrix.adjoint()),
            Gate::TwoQubit { qubits, matrix } => Gate::TwoQubit { qubits: *qubits, matrix: matrix.adjoint() },
            Gate::Controlled { controls, targets, body } => {
                Gate::controlled(controls.clone(), targets.clone(), body.adjoint())
            }
            Gate::Multiplexer { controls, targets, cases } => Gate::multiplexer(
                controls.clone(),
                targets.clone(),
                cases.iter().map(Mat::adjoint).collect(),
            ),
            Gate::Diagonal { targets, phases } => {
                Gate::diagonal(targets.clone(), phases.iter().map(|p| p.conj()).collect())
            }
            Gate::Swap { a, b } => Gate::Swap { a: *a, b: *b },
            Gate::GlobalPhase { angle } => Gate::GlobalPhase { angle: -angle },
        }
    }

    /// Relabels every qubit through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::OneQubit { qubit, matrix } => Gate::one(f(*qubit), matrix.clone()),
            Gate::TwoQubit { qubits, matrix } => Gate::two(f(qubits[0]), f(qubits[1]), matrix.clone()),
            Gate::Controlled { controls, targets, body } => Gate::controlled(
                controls.iter().map(|c| Control { qubit: f(c.qubit), closed: c.closed }).collect(),
                targets.iter().map(|&t| f(t)).collect(),
                body.clone(),
            ),
            Gate::Multiplexer { controls, targets, cases } => Gate::multiplexer(
                controls.iter().map(|&q| f(q)).collect(),
                targets.iter().map(|&q| f(q)).collect(),
                cases.clone(),
            ),
            Gate::Diagonal { targets, phases } => {
                Gate::diagonal(targets.iter().map(|&q| f(q)).collect(), phases.clone())
            }
            Gate::Swap { a, b } => Gate::Swap { a: f(*a), b: f(*b) },
            Gate::GlobalPhase { angle } => Gate::GlobalPhase { angle: *angle },
        }
    }

    /// Structural and numerical checks against a register of `n` qubits.
    pub fn validate(&self, n: usize, tol: f64) -> Result<(), IrError> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= n {
                return Err(IrError::QubitOutOfRange { qubit: q, total: n });
            }
        }
        let mut sorted = qs.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(IrError::InvalidGate(format!("{} repeats a qubit: {qs:?}", self.kind())));
        }
        let check = |m: &Mat, dim: usize, what: &str| -> Result<(), IrError> {
            if m.rows() != dim || m.cols() != dim {
                return Err(IrError::InvalidGate(format!(
                    "{what} is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
            let defect = m.unitarity_defect();
            if defect > tol {
                return Err(IrError::NonUnitary { what: what.to_string(), defect });
            }
            Ok(())
        };
        match self {
            Gate::OneQubit { matrix, .. } => check(matrix, 2, "one-qubit matrix"),
            Gate::TwoQubit { matrix, .. } => check(matrix, 4, "two-qubit matrix"),
            Gate::Controlled { targets, body, .. } => check(body, 1 << targets.len(), "controlled body"),
            Gate::Multiplexer { controls, targets, cases } => {
                if cases.len() != 1 << controls.len() {
                    return Err(IrError::InvalidGate(format!(
                        "multiplexer with {} controls has {} cases",
                        controls.len(),
                        cases.len()
                    )));
                }
                cases.iter().try_for_each(|m| check(m, 1 << targets.len(), "multiplexer case"))
            }
            Gate::Diagonal { targets, phases } => {
                if phases.len() != 1 << targets.len() {
                    return Err(IrError::InvalidGate("diagonal length mismatch".into()));
                }
                match phases.iter().find(|p| (p.norm() - 1.0).abs() > tol) {
                    Some(p) => Err(IrError::NonUnitary { what: "diagonal phase".into(), defect: (p.norm() - 1.0).abs() }),
                    None => Ok(()),
                }
            }
            Gate::Swap { .. } | Gate::GlobalPhase { .. } => Ok(()),
        }
    }

    /// Dense matrix of the gate on its own qubit list (see [`Gate::qubits`]).
    pub fn local_matrix(&self) -> Mat {
        match self {
            Gate::OneQubit { matrix, .. } | Gate::TwoQubit { matrix, .. } => matrix.clone(),
            Gate::Controlled { controls, targets, body } => {
                let nc = controls.len();
                let dt = 1 << targets.len();
                let pattern = controls.iter().fold(0usize, |acc, c| (acc << 1) | c.closed as usize);
                let mut m = Mat::identity(dt << nc);
                m.set_block(pattern * dt, pattern * dt, body);
                m
            }
            Gate::Multiplexer { targets, cases, .. } => {
                let dt = 1 << targets.len();
                let mut m = Mat::zeros(dt * cases.len(), dt * cases.len());
                for (i, c) in cases.iter().enumerate() {
                    m.set_block(i * dt, i * dt, c);
                }
                m
            }
            Gate::Diagonal { phases, .. } => Mat::diag(phases),
            Gate::Swap { .. } => crate::std_gates::swap(),
            Gate::GlobalPhase { angle } => Mat::from_vec(1, 1, vec![C64::from_polar(1.0, *angle)]),
        }
    }
}

/// `true` if every case is diagonal to `tol`.
pub(crate) fn all_diagonal(cases: &[Mat], tol: f64) -> bool {
    cases.iter().all(|m| m.is_diagonal(tol))
}

/// `e^{i angle}` if `m` is that multiple of the identity to `tol`.
pub(crate) fn scalar_phase(m: &Mat, tol: f64) -> Option<f64> {
    let z = m[(0, 0)];
    if (z.norm() - 1.0).abs() > tol {
        return None;
    }
    let target = Mat::identity(m.rows()).scale(z);
    (m.max_abs_diff(&target) <= tol).then(|| z.arg())
}

pub(crate) fn unit(angle: f64) -> C64 {
    C64::from_polar(1.0, angle)
}
