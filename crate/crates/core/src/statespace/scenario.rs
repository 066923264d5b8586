//! Scenario files: the JSON form of a [`FamilySpec`].
//!
//! ```json
//! { "dimS": 4, "dimE": 2, "blocks": [[0, 1], [2, 3]],
//!   "blockSpecs": [ {"type": "freeProduct", "rhoE": [[[1,0],[0,0]], [[0,0],[0,0]]]},
//!                   {"type": "fixedCorrelated", "rhoSE": {"pure": [[0.7071,0], …]}} ] }
//! ```
//!
//! Matrices are arrays of rows of `[re, im]` pairs. `{"pure": [...]}` stands for the
//! projector onto the given (unnormalised amplitudes are rejected by validation) state.

use serde::{Deserialize, Serialize};

use super::decomposition::DirectSumDecomposition;
use super::family::{BlockSpec, FamilySpec};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// A matrix as written in a scenario: dense, or the projector onto a pure state.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixInput {
    Pure { pure: Vec<[f64; 2]> },
    Dense(ComplexMatrix),
}

impl MatrixInput {
    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        match self {
            MatrixInput::Dense(m) => Ok(m),
            MatrixInput::Pure { pure } => {
                if pure.is_empty() {
                    return Err(Error::InvalidMatrix("pure state has no amplitudes".into()));
                }
                let psi: Vec<C64> = pure.iter().map(|&[re, im]| C64::new(re, im)).collect();
                ComplexMatrix::new(psi.len(), 1, psi.clone())?;
                Ok(ComplexMatrix::projector(&psi))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase")]
enum RawBlockSpec {
    #[serde(rename_all = "camelCase")]
    FreeProduct { rho_e: MatrixInput },
    #[serde(rename = "fixedCorrelated", rename_all = "camelCase")]
    FixedCorrelated {
        #[serde(rename = "rhoSE")]
        rho_se: MatrixInput,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ScenarioDoc {
    dim_s: usize,
    dim_e: usize,
    blocks: Vec<Vec<usize>>,
    block_specs: Vec<RawBlockSpec>,
}

impl TryFrom<ScenarioDoc> for FamilySpec {
    type Error = Error;

    fn try_from(doc: ScenarioDoc) -> Result<Self> {
        let dec = DirectSumDecomposition::new(doc.dim_s, doc.dim_e, doc.blocks)?;
        let specs = doc
            .block_specs
            .into_iter()
            .enumerate()
            .map(|(alpha, raw)| {
                let ctx = |e: Error| match e {
                    Error::InvalidMatrix(msg) => Error::InvalidMatrix(format!("block {alpha}: {msg}")),
                    other => other,
                };
                Ok(match raw {
                    RawBlockSpec::FreeProduct { rho_e } => BlockSpec::FreeProduct {
                        rho_e: rho_e.into_matrix().map_err(ctx)?,
                    },
                    RawBlockSpec::FixedCorrelated { rho_se } => BlockSpec::FixedCorrelated {
                        rho_se: rho_se.into_matrix().map_err(ctx)?,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FamilySpec::new(dec, specs)
    }
}

impl From<&FamilySpec> for ScenarioDoc {
    fn from(spec: &FamilySpec) -> Self {
        let dec = spec.decomposition();
        ScenarioDoc {
            dim_s: dec.dim_s(),
            dim_e: dec.dim_e(),
            blocks: dec.blocks().to_vec(),
            block_specs: spec
                .block_specs()
                .iter()
                .map(|b| match b {
                    BlockSpec::FreeProduct { rho_e } => RawBlockSpec::FreeProduct {
                        rho_e: MatrixInput::Dense(rho_e.clone()),
                    },
                    BlockSpec::FixedCorrelated { rho_se } => RawBlockSpec::FixedCorrelated {
                        rho_se: MatrixInput::Dense(rho_se.clone()),
                    },
                })
                .collect(),
        }
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ScenarioDoc::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FamilySpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = ScenarioDoc::deserialize(deserializer)?;
        FamilySpec::try_from(doc).map_err(serde::de::Error::custom)
    }
}

impl FamilySpec {
    /// Parses and validates a scenario document. Syntax errors keep serde's line/column
    /// diagnostics; semantic problems come back as the corresponding [`Error`] variant.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ScenarioDoc = serde_json::from_str(text)?;
        FamilySpec::try_from(doc)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialisation cannot fail")
    }
}
