use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::decomposition::DirectSumDecomposition;
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, partial_trace_env, random::random_density_with, random::simplex_with, tensor_product, ComplexMatrix,
    RngSeed,
};

/// Trace tolerance for user-supplied density operators.
pub const DENSITY_TRACE_TOL: f64 = 1e-9;
/// Smallest eigenvalue tolerated before an operator counts as not positive semidefinite.
pub const PSD_FLOOR: f64 = -1e-10;
/// Tolerance on `Σ p_α = 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Checks that `m` is a `dim×dim` Hermitian, positive semidefinite, unit-trace matrix.
pub fn validate_density(m: &ComplexMatrix, dim: usize) -> Result<()> {
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::density(
            None,
            format!("expected a {dim}×{dim} matrix, got {}×{}", m.rows(), m.cols()),
        ));
    }
    if !m.is_hermitian() {
        return Err(Error::density(
            None,
            format!("not Hermitian (‖A − A†‖_F = {:.3e})", m.hermiticity_residual()),
        ));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > DENSITY_TRACE_TOL || tr.im.abs() > DENSITY_TRACE_TOL {
        return Err(Error::density(None, format!("trace is {} (expected 1)", tr.re)));
    }
    let min = hermitian_eig(m)?.eigenvalues.last().copied().unwrap_or(0.0);
    if min < PSD_FLOOR {
        return Err(Error::density(
            None,
            format!("not positive semidefinite (smallest eigenvalue {min:.3e})"),
        ));
    }
    Ok(())
}

/// What a family fixes on one block of the decomposition.
#[derive(Clone, Debug, PartialEq)]
pub enum BlockSpec {
    /// `p_α·ρ_α^S ⊗ ρ_α^E` with `ρ_α^S` free and the `M×M` environment state fixed.
    FreeProduct { rho_e: ComplexMatrix },
    /// `p_α·ρ_α^SE` with the whole block state fixed; stored in the block-local
    /// `(d_α·M)`-dimensional basis.
    FixedCorrelated { rho_se: ComplexMatrix },
}

impl BlockSpec {
    pub fn is_fixed(&self) -> bool {
        matches!(self, BlockSpec::FixedCorrelated { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            BlockSpec::FreeProduct { .. } => "freeProduct",
            BlockSpec::FixedCorrelated { .. } => "fixedCorrelated",
        }
    }
}

/// A family of initial joint states: a decomposition plus one [`BlockSpec`] per block.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    decomposition: DirectSumDecomposition,
    block_specs: Vec<BlockSpec>,
}

impl FamilySpec {
    pub fn new(decomposition: DirectSumDecomposition, block_specs: Vec<BlockSpec>) -> Result<Self> {
        if block_specs.len() != decomposition.num_blocks() {
            return Err(Error::InvalidParams(format!(
                "{} block specs supplied for {} blocks",
                block_specs.len(),
                decomposition.num_blocks()
            )));
        }
        let m = decomposition.dim_e();
        for (alpha, spec) in block_specs.iter().enumerate() {
            let d = decomposition.block_dim(alpha)?;
            let (matrix, dim, what) = match spec {
                BlockSpec::FreeProduct { rho_e } => (rho_e, m, "rhoE"),
                BlockSpec::FixedCorrelated { rho_se } => (rho_se, d * m, "rhoSE"),
            };
            validate_density(matrix, dim).map_err(|e| e.with_context(format!("block {alpha} {what}")))?;
        }
        Ok(Self {
            decomposition,
            block_specs,
        })
    }

    pub fn decomposition(&self) -> &DirectSumDecomposition {
        &self.decomposition
    }

    pub fn block_specs(&self) -> &[BlockSpec] {
        &self.block_specs
    }

    pub fn block_spec(&self, alpha: usize) -> Result<&BlockSpec> {
        self.block_specs.get(alpha).ok_or(Error::InvalidBlock {
            index: alpha,
            count: self.block_specs.len(),
        })
    }

    pub fn dim_s(&self) -> usize {
        self.decomposition.dim_s()
    }

    pub fn dim_e(&self) -> usize {
        self.decomposition.dim_e()
    }

    pub fn num_blocks(&self) -> usize {
        self.block_specs.len()
    }

    /// Number of fixed correlated blocks (`n`); zero means a pure product-per-block family.
    pub fn num_fixed(&self) -> usize {
        self.block_specs.iter().filter(|b| b.is_fixed()).count()
    }

    pub fn fixed_blocks(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_blocks()).filter(|&a| self.block_specs[a].is_fixed())
    }

    pub fn free_blocks(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_blocks()).filter(|&a| !self.block_specs[a].is_fixed())
    }

    /// Copy of the spec with block `alpha` replaced.
    pub fn with_block_spec(&self, alpha: usize, spec: BlockSpec) -> Result<Self> {
        self.block_spec(alpha)?;
        let mut specs = self.block_specs.clone();
        specs[alpha] = spec;
        Self::new(self.decomposition.clone(), specs)
    }
}

/// The variable part of a family: weights `p_α` and the free block states `ρ_α^S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyMember {
    pub weights: Vec<f64>,
    /// Keyed by block index; one `d_α×d_α` state per free-product block.
    pub free_states: BTreeMap<usize, ComplexMatrix>,
}

impl FamilyMember {
    pub fn validate_for(&self, spec: &FamilySpec) -> Result<()> {
        if self.weights.len() != spec.num_blocks() {
            return Err(Error::MemberMismatch(format!(
                "{} weights for {} blocks",
                self.weights.len(),
                spec.num_blocks()
            )));
        }
        if let Some((alpha, p)) = self.weights.iter().enumerate().find(|(_, p)| p.is_nan() || **p < 0.0) {
            return Err(Error::MemberMismatch(format!("weight of block {alpha} is {p}")));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::MemberMismatch(format!("weights sum to {total}, expected 1")));
        }
        for alpha in spec.free_blocks() {
            let rho = self
                .free_states
                .get(&alpha)
                .ok_or_else(|| Error::MemberMismatch(format!("missing free state for block {alpha}")))?;
            validate_density(rho, spec.decomposition().block_dim(alpha)?)
                .map_err(|e| e.with_context(format!("free state of block {alpha}")))?;
        }
        if let Some(extra) = self
            .free_states
            .keys()
            .find(|&&a| a >= spec.num_blocks() || spec.block_specs()[a].is_fixed())
        {
            return Err(Error::MemberMismatch(format!(
                "free state supplied for block {extra}, which is not a free-product block"
            )));
        }
        Ok(())
    }

    /// Member whose joint state is `t·ρ_a + (1−t)·ρ_b`.
    pub fn mix(a: &FamilyMember, b: &FamilyMember, t: f64) -> FamilyMember {
        let weights: Vec<f64> = a
            .weights
            .iter()
            .zip(&b.weights)
            .map(|(pa, pb)| t * pa + (1.0 - t) * pb)
            .collect();
        let free_states = a
            .free_states
            .iter()
            .map(|(&alpha, ra)| {
                let rb = &b.free_states[&alpha];
                let p = weights[alpha];
                let state = if p > 0.0 {
                    let wa = t * a.weights[alpha] / p;
                    let wb = (1.0 - t) * b.weights[alpha] / p;
                    &ra.scale_real(wa) + &rb.scale_real(wb)
                } else {
                    ra.clone()
                };
                (alpha, state)
            })
            .collect();
        FamilyMember { weights, free_states }
    }
}

/// `ρ^SE(0) = Σ_fixed p_α·ρ_α^SE + Σ_free p_α·ρ_α^S ⊗ ρ_α^E`, as an `NM×NM` matrix.
pub fn assemble_initial_state(spec: &FamilySpec, member: &FamilyMember) -> Result<ComplexMatrix> {
    member.validate_for(spec)?;
    let dec = spec.decomposition();
    let nm = dec.joint_dim();
    let mut total = ComplexMatrix::zeros(nm, nm);
    for (alpha, block) in spec.block_specs().iter().enumerate() {
        let p = member.weights[alpha];
        let local = match block {
            BlockSpec::FixedCorrelated { rho_se } => rho_se.clone(),
            BlockSpec::FreeProduct { rho_e } => tensor_product(&member.free_states[&alpha], rho_e),
        };
        total = &total + &dec.embed_block_operator(alpha, &local)?.scale_real(p);
    }
    Ok(total)
}

/// `ρ^S(0) = Σ_fixed p_α·Tr_E ρ_α^SE + Σ_free p_α·ρ_α^S`, computed from the family data
/// without forming the joint state.
pub fn reduced_member_state(spec: &FamilySpec, member: &FamilyMember) -> Result<ComplexMatrix> {
    member.validate_for(spec)?;
    let dec = spec.decomposition();
    let n = dec.dim_s();
    let mut total = ComplexMatrix::zeros(n, n);
    for (alpha, block) in spec.block_specs().iter().enumerate() {
        let p = member.weights[alpha];
        let local = match block {
            BlockSpec::FixedCorrelated { rho_se } => partial_trace_env(rho_se, dec.block_dim(alpha)?, dec.dim_e())?,
            BlockSpec::FreeProduct { .. } => member.free_states[&alpha].clone(),
        };
        total = &total + &dec.embed_block_operator(alpha, &local)?.scale_real(p);
    }
    Ok(total)
}

/// `Tr(Π_α ρ^S)`: for an in-family marginal this recovers `p_α`.
pub fn block_weight_of(dec: &DirectSumDecomposition, alpha: usize, rho_s: &ComplexMatrix) -> Result<f64> {
    let block = dec.block(alpha)?;
    if rho_s.rows() != dec.dim_s() || rho_s.cols() != dec.dim_s() {
        return Err(Error::DimensionMismatch(format!(
            "expected a {0}×{0} system operator, got {1}×{2}",
            dec.dim_s(),
            rho_s.rows(),
            rho_s.cols()
        )));
    }
    Ok(block.iter().map(|&i| rho_s[(i, i)].re).sum())
}

/// Draws weights uniformly from the simplex and each free state from the Ginibre
/// density ensemble on its block.
pub fn sample_family_member(spec: &FamilySpec, seed: RngSeed) -> FamilyMember {
    let mut rng = seed.rng();
    let weights = simplex_with(spec.num_blocks(), &mut rng);
    let free_states = spec
        .free_blocks()
        .map(|alpha| {
            let d = spec.decomposition().blocks()[alpha].len();
            (alpha, random_density_with(d, &mut rng))
        })
        .collect();
    FamilyMember { weights, free_states }
}
