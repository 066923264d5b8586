use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{exact_reduced_dynamics, EPS_VERIFY};
use crate::error::{Error, Result};
use crate::kraus::{apply_kraus, build_kraus, completeness_residual, EPS_COMPLETENESS};
use crate::linalg::{haar_random_unitary, trace_distance, ComplexMatrix, RngSeed};
use crate::statespace::{assemble_initial_state, reduced_member_state, sample_family_member, FamilyMember, FamilySpec};

/// Where the joint unitaries of a run come from.
#[derive(Clone, Debug)]
pub enum UnitarySource {
    /// `count` Haar unitaries; unitary `k` uses `seed.derive(k)`.
    Haar {
        seed: RngSeed,
        count: usize,
    },
    Explicit(Vec<ComplexMatrix>),
}

impl UnitarySource {
    pub fn len(&self) -> usize {
        match self {
            UnitarySource::Haar { count, .. } => *count,
            UnitarySource::Explicit(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn materialize(&self, dim: usize) -> Result<Vec<(Option<RngSeed>, ComplexMatrix)>> {
        match self {
            UnitarySource::Haar { seed, count } => Ok((0..*count as u64)
                .map(|k| {
                    let s = seed.derive(k);
                    (Some(s), haar_random_unitary(dim, s))
                })
                .collect()),
            UnitarySource::Explicit(list) => {
                for u in list {
                    if u.rows() != dim || u.cols() != dim {
                        return Err(Error::DimensionMismatch(format!(
                            "joint unitary must be {dim}×{dim}, got {}×{}",
                            u.rows(),
                            u.cols()
                        )));
                    }
                }
                Ok(list.iter().cloned().map(|u| (None, u)).collect())
            }
        }
    }
}

/// Settings of a family-wide equivalence run.
#[derive(Clone, Debug)]
pub struct EquivalenceConfig {
    pub scenario_id: String,
    /// Member `m` uses `member_seed.derive(m)`.
    pub member_seed: RngSeed,
    pub samples: usize,
    pub unitaries: UnitarySource,
    /// Explicit members evaluated in addition to the sampled ones.
    pub extra_members: Vec<FamilyMember>,
}

impl EquivalenceConfig {
    /// Member and unitary seeds both derived from one master seed.
    pub fn seeded(scenario_id: impl Into<String>, master: RngSeed, samples: usize, unitaries: usize) -> Self {
        EquivalenceConfig {
            scenario_id: scenario_id.into(),
            member_seed: master.derive(0),
            samples,
            unitaries: UnitarySource::Haar {
                seed: master.derive(1),
                count: unitaries,
            },
            extra_members: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Nothing was compared.
    VacuousPass,
}

impl Verdict {
    pub fn passed(self) -> bool {
        !matches!(self, Verdict::Fail)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SampleRecord {
    pub member_index: usize,
    /// `None` for explicitly supplied members.
    pub member_seed: Option<RngSeed>,
    pub unitary_index: usize,
    /// `None` for explicitly supplied unitaries.
    pub unitary_seed: Option<RngSeed>,
    pub trace_distance: f64,
}

/// Outcome of [`family_equivalence_test`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub scenario_id: String,
    pub samples: usize,
    pub unitaries: usize,
    pub kraus_operators: usize,
    pub max_trace_distance: f64,
    pub completeness_residual: f64,
    pub tolerance: f64,
    pub completeness_tolerance: f64,
    pub verdict: Verdict,
    pub per_sample_records: Vec<SampleRecord>,
}

/// For every unitary, builds one Kraus set and compares its prediction with exact joint
/// evolution for every member.
///
/// Passes iff the largest trace distance stays below [`EPS_VERIFY`] and every set is
/// complete to [`EPS_COMPLETENESS`]. Evaluation runs in parallel over unitaries; records
/// are ordered by (unitary, member), so results do not depend on scheduling.
pub fn family_equivalence_test(spec: &FamilySpec, cfg: &EquivalenceConfig) -> Result<VerificationReport> {
    let (n, m) = (spec.dim_s(), spec.dim_e());
    let mut members: Vec<(Option<RngSeed>, FamilyMember)> = (0..cfg.samples as u64)
        .map(|k| {
            let s = cfg.member_seed.derive(k);
            (Some(s), sample_family_member(spec, s))
        })
        .collect();
    members.extend(cfg.extra_members.iter().cloned().map(|mem| (None, mem)));
    let prepared: Vec<(ComplexMatrix, ComplexMatrix)> = members
        .iter()
        .map(|(_, mem)| Ok((assemble_initial_state(spec, mem)?, reduced_member_state(spec, mem)?)))
        .collect::<Result<_>>()?;

    let unitaries = cfg.unitaries.materialize(spec.decomposition().joint_dim())?;
    let per_unitary: Vec<(f64, usize, Vec<SampleRecord>)> = unitaries
        .par_iter()
        .enumerate()
        .map(|(ui, (useed, u))| {
            let ks = build_kraus(spec, u)?;
            let residual = completeness_residual(&ks);
            let records = prepared
                .iter()
                .zip(&members)
                .enumerate()
                .map(|(mi, ((joint, marginal), (mseed, _)))| {
                    let predicted = apply_kraus(&ks, marginal)?;
                    let exact = exact_reduced_dynamics(u, joint, n, m)?;
                    Ok(SampleRecord {
                        member_index: mi,
                        member_seed: *mseed,
                        unitary_index: ui,
                        unitary_seed: *useed,
                        trace_distance: trace_distance(&predicted, &exact.hermitian_part())?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((residual, ks.len(), records))
        })
        .collect::<Result<_>>()?;

    let completeness = per_unitary.iter().map(|(r, _, _)| *r).fold(0.0, f64::max);
    let kraus_operators = per_unitary.first().map_or(0, |(_, len, _)| *len);
    let records: Vec<SampleRecord> = per_unitary.into_iter().flat_map(|(_, _, r)| r).collect();
    let max_td = records.iter().map(|r| r.trace_distance).fold(0.0, f64::max);
    let verdict = if records.is_empty() {
        Verdict::VacuousPass
    } else if max_td < EPS_VERIFY && completeness < EPS_COMPLETENESS {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(VerificationReport {
        scenario_id: cfg.scenario_id.clone(),
        samples: members.len(),
        unitaries: unitaries.len(),
        kraus_operators,
        max_trace_distance: max_td,
        completeness_residual: completeness,
        tolerance: EPS_VERIFY,
        completeness_tolerance: EPS_COMPLETENESS,
        verdict,
        per_sample_records: records,
    })
}

/// Pretty JSON with a fixed key order.
pub fn generate_report(report: &VerificationReport) -> String {
    serde_json::to_string_pretty(report).expect("report serialisation cannot fail")
}

pub fn parse_report(text: &str) -> Result<VerificationReport> {
    Ok(serde_json::from_str(text)?)
}
