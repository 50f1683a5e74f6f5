//! JSON interchange for circuits and matrices.

use qcasc_numerics::{Mat, C64};
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Connectivity};
use crate::gate::{Control, Gate};
use crate::IrError;

pub const FORMAT_VERSION: u32 = 1;

/// Row-major matrix as `[re, im]` pairs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&Mat> for MatrixJson {
    fn from(m: &Mat) -> Self {
        MatrixJson { dim: m.rows(), entries: pairs(m.data()) }
    }
}

impl TryFrom<&MatrixJson> for Mat {
    type Error = IrError;
    fn try_from(j: &MatrixJson) -> Result<Mat, IrError> {
        if j.entries.len() != j.dim * j.dim {
            return Err(IrError::Json(format!("matrix of dim {} has {} entries", j.dim, j.entries.len())));
        }
        Ok(Mat::from_vec(j.dim, j.dim, unpairs(&j.entries)))
    }
}

pub fn pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn unpairs(v: &[[f64; 2]]) -> Vec<C64> {
    v.iter().map(|p| C64::new(p[0], p[1])).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ConnectivityJson {
    AllToAll,
    Grid2d { width: usize, height: usize, placement: Vec<[usize; 2]> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ControlJson {
    pub qubit: usize,
    pub closed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GateJson {
    pub kind: String,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub controls: Option<Vec<ControlJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_controls: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CircuitJson {
    pub version: u32,
    pub num_data_qubits: usize,
    pub num_ancilla: usize,
    pub connectivity: ConnectivityJson,
    pub gates: Vec<GateJson>,
}

fn bare(kind: &str, qubits: Vec<usize>) -> GateJson {
    GateJson {
        kind: kind.to_string(),
        qubits,
        dim: None,
        matrix: None,
        controls: None,
        num_controls: None,
        cases: None,
        phases: None,
        angle: None,
    }
}

impl From<&Gate> for GateJson {
    fn from(g: &Gate) -> Self {
        let mut j = bare(g.kind(), g.qubits());
        match g {
            Gate::OneQubit { matrix, .. } | Gate::TwoQubit { matrix, .. } => {
                j.dim = Some(matrix.rows());
                j.matrix = Some(pairs(matrix.data()));
            }
            Gate::Controlled { controls, body, .. } => {
                j.controls =
                    Some(controls.iter().map(|c| ControlJson { qubit: c.qubit, closed: c.closed }).collect());
                j.dim = Some(body.rows());
                j.matrix = Some(pairs(body.data()));
            }
            Gate::Multiplexer { controls, targets, cases } => {
                j.num_controls = Some(controls.len());
                j.dim = Some(1 << targets.len());
                j.cases = Some(cases.iter().map(|m| pairs(m.data())).collect());
            }
            Gate::Diagonal { phases, .. } => j.phases = Some(pairs(phases)),
            Gate::Swap { .. } => {}
            Gate::GlobalPhase { angle } => j.angle = Some(*angle),
        }
        j
    }
}

fn need<T: Clone>(v: &Option<T>, field: &str, kind: &str) -> Result<T, IrError> {
    v.clone().ok_or_else(|| IrError::Json(format!("{kind} gate lacks '{field}'")))
}

fn square(entries: &[[f64; 2]], kind: &str) -> Result<Mat, IrError> {
    let d = (entries.len() as f64).sqrt().round() as usize;
    if d * d != entries.len() {
        return Err(IrError::Json(format!("{kind} matrix has {} entries", entries.len())));
    }
    Ok(Mat::from_vec(d, d, unpairs(entries)))
}

impl TryFrom<&GateJson> for Gate {
    type Error = IrError;
    fn try_from(j: &GateJson) -> Result<Gate, IrError> {
        let k = j.kind.as_str();
        let qs = &j.qubits;
        let arity = |n: usize| -> Result<(), IrError> {
            if qs.len() == n {
                Ok(())
            } else {
                Err(IrError::Json(format!("{k} gate needs {n} qubits, got {}", qs.len())))
            }
        };
        Ok(match k {
            "one_qubit" => {
                arity(1)?;
                Gate::one(qs[0], square(&need(&j.matrix, "matrix", k)?, k)?)
            }
            "two_qubit" => {
                arity(2)?;
                Gate::two(qs[0], qs[1], square(&need(&j.matrix, "matrix", k)?, k)?)
            }
            "controlled" => {
                let cs = need(&j.controls, "controls", k)?;
                if cs.len() > qs.len() || cs.iter().zip(qs).any(|(c, &q)| c.qubit != q) {
                    return Err(IrError::Json("controls must lead the qubit list".into()));
                }
                Gate::controlled(
                    cs.iter().map(|c| Control { qubit: c.qubit, closed: c.closed }).collect(),
                    qs[cs.len()..].to_vec(),
                    square(&need(&j.matrix, "matrix", k)?, k)?,
                )
            }
            "multiplexer" => {
                let nc = need(&j.num_controls, "num_controls", k)?;
                if nc > qs.len() {
                    return Err(IrError::Json("num_controls exceeds qubit count".into()));
                }
                let cases = need(&j.cases, "cases", k)?
                    .iter()
                    .map(|c| square(c, k))
                    .collect::<Result<Vec<_>, _>>()?;
                Gate::multiplexer(qs[..nc].to_vec(), qs[nc..].to_vec(), cases)
            }
            "diagonal" => Gate::diagonal(qs.clone(), unpairs(&need(&j.phases, "phases", k)?)),
            "swap" => {
                arity(2)?;
                Gate::Swap { a: qs[0], b: qs[1] }
            }
            "global_phase" => Gate::GlobalPhase { angle: need(&j.angle, "angle", k)? },
            other => return Err(IrError::Json(format!("unknown gate kind '{other}'"))),
        })
    }
}

impl From<&Circuit> for CircuitJson {
    fn from(c: &Circuit) -> Self {
        CircuitJson {
            version: FORMAT_VERSION,
            num_data_qubits: c.num_data_qubits,
            num_ancilla: c.num_ancilla,
            connectivity: match &c.connectivity {
                Connectivity::AllToAll => ConnectivityJson::AllToAll,
                Connectivity::Grid2D { width, height, placement } => ConnectivityJson::Grid2d {
                    width: *width,
                    height: *height,
                    placement: placement.iter().map(|&(x, y)| [x, y]).collect(),
                },
            },
            gates: c.gates.iter().map(GateJson::from).collect(),
        }
    }
}

impl TryFrom<&CircuitJson> for Circuit {
    type Error = IrError;
    fn try_from(j: &CircuitJson) -> Result<Circuit, IrError> {
        if j.version != FORMAT_VERSION {
            return Err(IrError::Json(format!("unsupported version {}", j.version)));
        }
        let c = Circuit {
            num_data_qubits: j.num_data_qubits,
            num_ancilla: j.num_ancilla,
            connectivity: match &j.connectivity {
                ConnectivityJson::AllToAll => Connectivity::AllToAll,
                ConnectivityJson::Grid2d { width, height, placement } => Connectivity::Grid2D {
                    width: *width,
                    height: *height,
                    placement: placement.iter().map(|p| (p[0], p[1])).collect(),
                },
            },
            gates: j.gates.iter().map(Gate::try_from).collect::<Result<_, _>>()?,
        };
        c.validate()?;
        Ok(c)
    }
}

pub fn circuit_to_json(c: &Circuit) -> String {
    serde_json::to_string_pretty(&CircuitJson::from(c)).expect("circuit serializes")
}

pub fn circuit_from_json(s: &str) -> Result<Circuit, IrError> {
    let j: CircuitJson = serde_json::from_str(s).map_err(|e| IrError::Json(e.to_string()))?;
    Circuit::try_from(&j)
}

/// Plain-text export of a lowered circuit: `u2`/`u4` lines carrying the
/// matrix entries, one gate per line.
pub fn basis_to_text(c: &Circuit) -> Result<String, IrError> {
    let mut s = format!("qubits {}\n", c.total_qubits());
    for g in &c.gates {
        let line = match g {
            Gate::OneQubit { qubit, matrix } => format!("u2 q{qubit} {}", fmt_entries(matrix)),
            Gate::TwoQubit { qubits, matrix } => format!("u4 q{} q{} {}", qubits[0], qubits[1], fmt_entries(matrix)),
            Gate::Swap { a, b } => format!("swap q{a} q{b}"),
            Gate::GlobalPhase { angle } => format!("gphase {angle:e}"),
            other => return Err(IrError::NotLowered(other.kind())),
        };
        s.push_str(&line);
        s.push('\n');
    }
    Ok(s)
}

fn fmt_entries(m: &Mat) -> String {
    m.data().iter().map(|z| format!("{:e},{:e}", z.re, z.im)).collect::<Vec<_>>().join(" ")
}
