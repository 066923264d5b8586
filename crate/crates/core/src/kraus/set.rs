use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Index tuple of one Kraus operator (all 0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KrausLabel {
    /// `K_{αij}`: free-product block `block`, environment basis state `env` (i) and
    /// eigenvector `eig` (j) of the block's environment state.
    Free { block: usize, env: usize, eig: usize },
    /// `K_{αiLk}`: fixed block `block`, environment basis state `env` (i), eigenvector
    /// `eig` (L) of the block state, and subspace basis vector `sys` (k).
    Fixed {
        block: usize,
        env: usize,
        eig: usize,
        sys: usize,
    },
    /// Operator supplied directly rather than built from a family.
    Custom(usize),
}

impl KrausLabel {
    pub fn block(&self) -> Option<usize> {
        match *self {
            KrausLabel::Free { block, .. } | KrausLabel::Fixed { block, .. } => Some(block),
            KrausLabel::Custom(_) => None,
        }
    }

    fn as_indices(&self) -> Vec<usize> {
        match *self {
            KrausLabel::Free { block, env, eig } => vec![block, env, eig],
            KrausLabel::Fixed { block, env, eig, sys } => vec![block, env, eig, sys],
            KrausLabel::Custom(i) => vec![i],
        }
    }

    fn from_indices(idx: &[usize]) -> Option<Self> {
        match *idx {
            [i] => Some(KrausLabel::Custom(i)),
            [block, env, eig] => Some(KrausLabel::Free { block, env, eig }),
            [block, env, eig, sys] => Some(KrausLabel::Fixed { block, env, eig, sys }),
            _ => None,
        }
    }
}

impl fmt::Display for KrausLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.as_indices().iter().map(usize::to_string).collect();
        write!(f, "K[{}]", idx.join(","))
    }
}

impl Serialize for KrausLabel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_indices().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for KrausLabel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let idx = Vec::<usize>::deserialize(deserializer)?;
        KrausLabel::from_indices(&idx)
            .ok_or_else(|| serde::de::Error::custom(format!("label must have 1, 3 or 4 indices, got {}", idx.len())))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrausOperator {
    pub label: KrausLabel,
    pub matrix: ComplexMatrix,
}

/// An ordered list of `N×N` Kraus operators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", try_from = "RawKrausSet")]
pub struct KrausSet {
    dim_s: usize,
    operators: Vec<KrausOperator>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawKrausSet {
    dim_s: usize,
    operators: Vec<KrausOperator>,
}

impl TryFrom<RawKrausSet> for KrausSet {
    type Error = Error;

    fn try_from(raw: RawKrausSet) -> Result<Self> {
        KrausSet::new(raw.dim_s, raw.operators)
    }
}

impl KrausSet {
    pub fn new(dim_s: usize, operators: Vec<KrausOperator>) -> Result<Self> {
        if let Some(op) = operators
            .iter()
            .find(|op| op.matrix.rows() != dim_s || op.matrix.cols() != dim_s)
        {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operator {} is {}×{}, expected {dim_s}×{dim_s}",
                op.label,
                op.matrix.rows(),
                op.matrix.cols()
            )));
        }
        Ok(Self { dim_s, operators })
    }

    /// Set of bare matrices labelled `Custom(0)`, `Custom(1)`, ….
    pub fn from_matrices(dim_s: usize, matrices: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(
            dim_s,
            matrices
                .into_iter()
                .enumerate()
                .map(|(i, matrix)| KrausOperator {
                    label: KrausLabel::Custom(i),
                    matrix,
                })
                .collect(),
        )
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[KrausOperator] {
        &self.operators
    }

    pub fn get(&self, label: &KrausLabel) -> Option<&ComplexMatrix> {
        self.operators.iter().find(|op| &op.label == label).map(|op| &op.matrix)
    }

    pub fn labels(&self) -> impl Iterator<Item = &KrausLabel> {
        self.operators.iter().map(|op| &op.label)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("Kraus set serialisation cannot fail")
    }
}

/// `Σ K ρ K†`
pub fn apply_kraus(ks: &KrausSet, rho_s: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = ks.dim_s();
    if rho_s.rows() != n || rho_s.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "Kraus set acts on dimension {n}, state is {}×{}",
            rho_s.rows(),
            rho_s.cols()
        )));
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for op in ks.operators() {
        out = &out + &op.matrix.conjugate(rho_s)?;
    }
    Ok(out)
}

/// `‖Σ K†K − I_N‖_F`
pub fn completeness_residual(ks: &KrausSet) -> f64 {
    let n = ks.dim_s();
    let mut gram = ComplexMatrix::zeros(n, n);
    for op in ks.operators() {
        gram = &gram + &op.matrix.adjoint().mul_unchecked(&op.matrix);
    }
    (&gram - &ComplexMatrix::identity(n)).frobenius_norm()
}

/// Drops operators whose Frobenius norm is below `threshold`.
pub fn prune_zero_operators(ks: &KrausSet, threshold: f64) -> KrausSet {
    KrausSet {
        dim_s: ks.dim_s,
        operators: ks
            .operators
            .iter()
            .filter(|op| {
                let norm = op.matrix.frobenius_norm();
                norm.is_nan() || norm >= threshold
            })
            .cloned()
            .collect(),
    }
}
