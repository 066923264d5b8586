use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ONE, ZERO};

/// Partition of the system basis `{0, …, N−1}` into the subspaces `H_1 ⊕ … ⊕ H_{N₀}`,
/// together with the environment dimension `M`.
///
/// Blocks hold global computational-basis indices and need not be contiguous. The order of
/// indices inside a block fixes the block-local basis used by block operators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDecomposition", into = "RawDecomposition")]
pub struct DirectSumDecomposition {
    dim_s: usize,
    dim_e: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawDecomposition {
    dim_s: usize,
    dim_e: usize,
    blocks: Vec<Vec<usize>>,
}

impl TryFrom<RawDecomposition> for DirectSumDecomposition {
    type Error = Error;

    fn try_from(raw: RawDecomposition) -> Result<Self> {
        Self::new(raw.dim_s, raw.dim_e, raw.blocks)
    }
}

impl From<DirectSumDecomposition> for RawDecomposition {
    fn from(d: DirectSumDecomposition) -> Self {
        RawDecomposition {
            dim_s: d.dim_s,
            dim_e: d.dim_e,
            blocks: d.blocks,
        }
    }
}

impl DirectSumDecomposition {
    pub fn new(dim_s: usize, dim_e: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if dim_s == 0 || dim_e == 0 {
            return Err(Error::InvalidDecomposition(format!(
                "dimensions must be positive (dimS = {dim_s}, dimE = {dim_e})"
            )));
        }
        if blocks.is_empty() {
            return Err(Error::InvalidDecomposition("at least one block is required".into()));
        }
        let mut owner: Vec<Option<usize>> = vec![None; dim_s];
        for (alpha, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidDecomposition(format!("block {alpha} is empty")));
            }
            for &idx in block {
                if idx >= dim_s {
                    return Err(Error::InvalidDecomposition(format!(
                        "index {idx} in block {alpha} is outside the system basis 0..{dim_s}"
                    )));
                }
                if let Some(prev) = owner[idx] {
                    return Err(Error::InvalidDecomposition(if prev == alpha {
                        format!("index {idx} is repeated within block {alpha}")
                    } else {
                        format!("index {idx} is repeated: it appears in blocks {prev} and {alpha}")
                    }));
                }
                owner[idx] = Some(alpha);
            }
        }
        let missing: Vec<usize> = (0..dim_s).filter(|&i| owner[i].is_none()).collect();
        if !missing.is_empty() {
            return Err(Error::InvalidDecomposition(format!(
                "blocks do not cover the system basis; missing indices {missing:?}"
            )));
        }
        Ok(Self { dim_s, dim_e, blocks })
    }

    /// Contiguous blocks of the given sizes: `{0..d₁}, {d₁..d₁+d₂}, …`.
    pub fn contiguous(dim_e: usize, sizes: &[usize]) -> Result<Self> {
        let mut start = 0;
        let blocks = sizes
            .iter()
            .map(|&d| {
                let b: Vec<usize> = (start..start + d).collect();
                start += d;
                b
            })
            .collect();
        Self::new(start, dim_e, blocks)
    }

    pub fn dim_s(&self) -> usize {
        self.dim_s
    }

    pub fn dim_e(&self) -> usize {
        self.dim_e
    }

    /// `N·M`
    pub fn joint_dim(&self) -> usize {
        self.dim_s * self.dim_e
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, alpha: usize) -> Result<&[usize]> {
        self.blocks.get(alpha).map(Vec::as_slice).ok_or(Error::InvalidBlock {
            index: alpha,
            count: self.blocks.len(),
        })
    }

    pub fn block_dim(&self, alpha: usize) -> Result<usize> {
        Ok(self.block(alpha)?.len())
    }

    /// Block containing system basis index `s`.
    pub fn block_of(&self, s: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&s))
    }

    /// `Π_α`, the N×N projector onto `H_α`.
    pub fn projector(&self, alpha: usize) -> Result<ComplexMatrix> {
        let block = self.block(alpha)?;
        Ok(ComplexMatrix::from_fn(self.dim_s, self.dim_s, |i, j| {
            if i == j && block.contains(&i) {
                ONE
            } else {
                ZERO
            }
        }))
    }

    /// Lifts a block-local operator into the full space.
    ///
    /// A `d_α×d_α` operator lands on the N-dimensional system space; a `(d_α·M)`-square
    /// operator (block-local index `k·M + e`) lands on the `N·M` joint space.
    pub fn embed_block_operator(&self, alpha: usize, op: &ComplexMatrix) -> Result<ComplexMatrix> {
        let block = self.block(alpha)?;
        let d = block.len();
        let m = self.dim_e;
        if op.rows() == d && op.cols() == d {
            let mut full = vec![ZERO; self.dim_s * self.dim_s];
            for (a, &ga) in block.iter().enumerate() {
                for (b, &gb) in block.iter().enumerate() {
                    full[ga * self.dim_s + gb] = op[(a, b)];
                }
            }
            Ok(ComplexMatrix::from_raw(self.dim_s, self.dim_s, full))
        } else if op.rows() == d * m && op.cols() == d * m {
            let nm = self.joint_dim();
            let mut full = vec![ZERO; nm * nm];
            for r in 0..d * m {
                let gr = self.embed_joint_index(block, r);
                for c in 0..d * m {
                    full[gr * nm + self.embed_joint_index(block, c)] = op[(r, c)];
                }
            }
            Ok(ComplexMatrix::from_raw(nm, nm, full))
        } else {
            Err(Error::DimensionMismatch(format!(
                "block {alpha} has dimension {d}; expected a {d}×{d} or {0}×{0} operator, got {1}×{2}",
                d * m,
                op.rows(),
                op.cols()
            )))
        }
    }

    /// Embeds a block-local joint vector (`d_α·M` entries) into the `N·M` joint space.
    pub fn embed_block_vector(&self, alpha: usize, v: &[crate::linalg::C64]) -> Result<Vec<crate::linalg::C64>> {
        let block = self.block(alpha)?;
        if v.len() != block.len() * self.dim_e {
            return Err(Error::DimensionMismatch(format!(
                "block {alpha} joint vectors have {} entries, got {}",
                block.len() * self.dim_e,
                v.len()
            )));
        }
        let mut full = vec![ZERO; self.joint_dim()];
        for (r, &z) in v.iter().enumerate() {
            full[self.embed_joint_index(block, r)] = z;
        }
        Ok(full)
    }

    /// Restricts a full-space operator to block `alpha` (inverse of the embedding on the
    /// block's support).
    pub fn restrict_to_block(&self, alpha: usize, full: &ComplexMatrix) -> Result<ComplexMatrix> {
        let block = self.block(alpha)?;
        let d = block.len();
        if full.rows() == self.dim_s && full.cols() == self.dim_s {
            Ok(ComplexMatrix::from_fn(d, d, |a, b| full[(block[a], block[b])]))
        } else if full.rows() == self.joint_dim() && full.cols() == self.joint_dim() {
            Ok(ComplexMatrix::from_fn(d * self.dim_e, d * self.dim_e, |r, c| {
                full[(self.embed_joint_index(block, r), self.embed_joint_index(block, c))]
            }))
        } else {
            Err(Error::DimensionMismatch(format!(
                "expected an {0}×{0} or {1}×{1} operator, got {2}×{3}",
                self.dim_s,
                self.joint_dim(),
                full.rows(),
                full.cols()
            )))
        }
    }

    fn embed_joint_index(&self, block: &[usize], local: usize) -> usize {
        block[local / self.dim_e] * self.dim_e + local % self.dim_e
    }
}
