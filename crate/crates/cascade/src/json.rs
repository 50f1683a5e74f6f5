//! Cascade interchange format.

use qcasc_ir::MatrixJson;
use qcasc_numerics::Mat;
use serde::{Deserialize, Serialize};

use crate::{CascadeBlock, CascadeError, ControlCascade, MnCascade};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CascadeJson {
    pub kind: String,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gates: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<[MatrixJson; 2]>>,
}

/// Either kind of input program.
#[derive(Clone, Debug, PartialEq)]
pub enum CascadeFile {
    Mn(MnCascade),
    Cascade(ControlCascade),
}

impl CascadeFile {
    pub fn to_json(&self) -> String {
        let j = match self {
            CascadeFile::Mn(c) => CascadeJson {
                kind: "mn".into(),
                k: 1,
                gates: Some(c.gates.iter().map(MatrixJson::from).collect()),
                blocks: None,
            },
            CascadeFile::Cascade(c) => CascadeJson {
                kind: "cascade".into(),
                k: c.k().unwrap_or(0),
                gates: None,
                blocks: Some(c.blocks.iter().map(|b| [MatrixJson::from(&b.u0), MatrixJson::from(&b.u1)]).collect()),
            },
        };
        serde_json::to_string_pretty(&j).expect("cascade serializes")
    }

    pub fn from_json(s: &str) -> Result<CascadeFile, CascadeError> {
        let j: CascadeJson = serde_json::from_str(s).map_err(|e| CascadeError::Format(e.to_string()))?;
        let mat = |m: &MatrixJson| Mat::try_from(m).map_err(|e| CascadeError::Format(e.to_string()));
        match j.kind.as_str() {
            "mn" => {
                let gates = j.gates.as_ref().ok_or_else(|| CascadeError::Format("mn cascade lacks 'gates'".into()))?;
                Ok(CascadeFile::Mn(MnCascade::new(gates.iter().map(mat).collect::<Result<_, _>>()?)?))
            }
            "cascade" => {
                let blocks =
                    j.blocks.as_ref().ok_or_else(|| CascadeError::Format("cascade lacks 'blocks'".into()))?;
                let blocks = blocks
                    .iter()
                    .map(|[a, b]| Ok(CascadeBlock { u0: mat(a)?, u1: mat(b)? }))
                    .collect::<Result<Vec<_>, CascadeError>>()?;
                let c = ControlCascade::new(blocks)?;
                if c.k().is_some_and(|k| k != j.k) {
                    return Err(CascadeError::Format(format!("declared k = {} but bodies have k = {:?}", j.k, c.k())));
                }
                Ok(CascadeFile::Cascade(c))
            }
            other => Err(CascadeError::Format(format!("unknown cascade kind '{other}'"))),
        }
    }
}
