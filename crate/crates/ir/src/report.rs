use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::circuit::Circuit;
use crate::depth::depth;
use crate::IrError;

/// Cost and accuracy summary of one compiler run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompilationReport {
    /// Layers of one- and two-qubit gates.
    pub depth_basis: usize,
    pub gate_count: usize,
    pub ancilla_count: usize,
    pub apriori_error: f64,
    /// `None` serializes as `"not-checked"`.
    #[serde(serialize_with = "ser_measured", deserialize_with = "de_measured")]
    pub measured_error: Option<f64>,
}

impl CompilationReport {
    /// Report for a basis-lowered circuit with no checked error yet.
    pub fn of(c: &Circuit, apriori_error: f64) -> Result<Self, IrError> {
        Ok(CompilationReport {
            depth_basis: depth(c)?,
            gate_count: c.gate_count(),
            ancilla_count: c.num_ancilla,
            apriori_error,
            measured_error: None,
        })
    }

    /// Whether the measured error, if any, respects the a-priori bound.
    pub fn consistent(&self) -> bool {
        self.measured_error.map_or(true, |e| e <= self.apriori_error + 1e-9)
    }
}

fn ser_measured<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_str("not-checked"),
    }
}

fn de_measured<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Num(x) => Ok(Some(x)),
        Raw::Text(t) if t == "not-checked" => Ok(None),
        Raw::Text(t) => Err(serde::de::Error::custom(format!("unexpected measured_error '{t}'"))),
    }
}
