use serde::{Deserialize, Serialize};

use super::equivalence::UnitarySource;
use super::{exact_reduced_dynamics, EPS_FAIL};
use crate::error::{Error, Result};
use crate::kraus::{apply_kraus, build_kraus};
use crate::linalg::{partial_trace_env, random_density, tensor_product, trace_distance, ComplexMatrix, RngSeed, C64};
use crate::statespace::{assemble_initial_state, sample_family_member, BlockSpec, FamilySpec};

/// How an in-family joint state is pushed out of the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Perturbation {
    /// Mixes in `|χ⟩⟨χ| ⊗ |0⟩⟨0|` with `χ` a superposition of the first basis states of
    /// blocks 0 and 1. Needs at least two blocks.
    CrossBlockCoherence,
    /// Mixes a random state on the first fixed block into that block's correlated state.
    FixedBlockDrift,
}

impl std::str::FromStr for Perturbation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "crossBlockCoherence" | "cross-block-coherence" => Ok(Perturbation::CrossBlockCoherence),
            "fixedBlockDrift" | "fixed-block-drift" => Ok(Perturbation::FixedBlockDrift),
            other => Err(Error::InvalidParams(format!(
                "unknown perturbation {other:?} (expected crossBlockCoherence or fixedBlockDrift)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ControlConfig {
    pub perturbation: Perturbation,
    /// Mixing weight `s ∈ [0, 1]` of the perturbation; `0` leaves the state in the family.
    pub size: f64,
    pub seed: RngSeed,
    pub members: usize,
    pub unitaries: UnitarySource,
}

impl ControlConfig {
    pub fn seeded(perturbation: Perturbation, size: f64, master: RngSeed, members: usize, unitaries: usize) -> Self {
        ControlConfig {
            perturbation,
            size,
            seed: master.derive(0),
            members,
            unitaries: UnitarySource::Haar {
                seed: master.derive(1),
                count: unitaries,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ControlReport {
    pub perturbation: Perturbation,
    pub size: f64,
    pub comparisons: usize,
    pub max_trace_distance: f64,
    pub threshold: f64,
    /// Whether the family's Kraus set visibly failed on the perturbed states.
    pub failure_detected: bool,
}

/// Applies the family's Kraus set to states just outside the family and measures the
/// disagreement with exact evolution. A sound harness reports `failure_detected`.
pub fn out_of_family_control(spec: &FamilySpec, cfg: &ControlConfig) -> Result<ControlReport> {
    if !(0.0..=1.0).contains(&cfg.size) {
        return Err(Error::InvalidParams(format!(
            "perturbation size must lie in [0, 1], got {}",
            cfg.size
        )));
    }
    let dec = spec.decomposition();
    let (n, m) = (dec.dim_s(), dec.dim_e());
    let s = cfg.size;

    // the perturbed spec (drift) or the extra joint term (coherence)
    let (joint_spec, extra) = match cfg.perturbation {
        Perturbation::CrossBlockCoherence => {
            if dec.num_blocks() < 2 {
                return Err(Error::InvalidParams(
                    "crossBlockCoherence needs at least two blocks".into(),
                ));
            }
            let mut chi = vec![C64::new(0.0, 0.0); n];
            chi[dec.block(0)?[0]] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            chi[dec.block(1)?[0]] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let env0 = ComplexMatrix::projector(&ComplexMatrix::basis_vector(m, 0));
            (
                spec.clone(),
                Some(tensor_product(&ComplexMatrix::projector(&chi), &env0)),
            )
        }
        Perturbation::FixedBlockDrift => {
            let alpha = spec
                .fixed_blocks()
                .next()
                .ok_or_else(|| Error::InvalidParams("fixedBlockDrift needs a fixed correlated block".into()))?;
            let BlockSpec::FixedCorrelated { rho_se } = spec.block_spec(alpha)? else {
                unreachable!()
            };
            let sigma = random_density(rho_se.rows(), cfg.seed.derive(u64::MAX));
            let drifted = &rho_se.scale_real(1.0 - s) + &sigma.scale_real(s);
            let drifted_spec = spec.with_block_spec(alpha, BlockSpec::FixedCorrelated { rho_se: drifted })?;
            (drifted_spec, None)
        }
    };

    let states: Vec<ComplexMatrix> = (0..cfg.members as u64)
        .map(|k| {
            let member = sample_family_member(spec, cfg.seed.derive(k));
            let joint = assemble_initial_state(&joint_spec, &member)?;
            Ok(match &extra {
                Some(term) => &joint.scale_real(1.0 - s) + &term.scale_real(s),
                None => joint,
            })
        })
        .collect::<Result<_>>()?;

    let mut max_td: f64 = 0.0;
    let mut comparisons = 0;
    for (_, u) in cfg.unitaries.materialize(dec.joint_dim())? {
        let ks = build_kraus(spec, &u)?;
        for joint in &states {
            let marginal = partial_trace_env(joint, n, m)?;
            let predicted = apply_kraus(&ks, &marginal)?;
            let exact = exact_reduced_dynamics(&u, joint, n, m)?;
            max_td = max_td.max(trace_distance(&predicted, &exact.hermitian_part())?);
            comparisons += 1;
        }
    }
    Ok(ControlReport {
        perturbation: cfg.perturbation,
        size: s,
        comparisons,
        max_trace_distance: max_td,
        threshold: EPS_FAIL,
        failure_detected: max_td > EPS_FAIL,
    })
}
