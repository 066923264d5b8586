//! Hand-written Kraus formulas for the three worked 4×2, 4×2 and 6×2 examples, evaluated
//! by direct matrix-element extraction from `U` and compared with [`build_kraus`].
//!
//! Kets `|1⟩, |2⟩, …` of the worked examples are indices `0, 1, …` here. Joint index of
//! `|s⟩⊗|e⟩` is `s·M + e`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kraus::{build_kraus, prune_zero_operators, KrausLabel};
use crate::linalg::{frobenius_distance, ComplexMatrix, C64, ONE, ZERO};
use crate::statespace::{make_historical_family, FamilySpec, HistoricalFamily};

/// Residual accepted between a computed operator and its formula.
pub const GOLDEN_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WorkedExample {
    /// 4×2, two free-product blocks with pure environments.
    AppendixA,
    /// 4×2, two Bell-like fixed blocks.
    AppendixB,
    /// 6×2, two fixed blocks (one separable with discord, one entangled) and one free block.
    AppendixC,
}

impl WorkedExample {
    pub const ALL: [WorkedExample; 3] = [
        WorkedExample::AppendixA,
        WorkedExample::AppendixB,
        WorkedExample::AppendixC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WorkedExample::AppendixA => "appendix-a",
            WorkedExample::AppendixB => "appendix-b",
            WorkedExample::AppendixC => "appendix-c",
        }
    }

    pub fn spec(self) -> FamilySpec {
        let family = match self {
            WorkedExample::AppendixA => HistoricalFamily::AppendixA,
            WorkedExample::AppendixB => HistoricalFamily::AppendixB,
            WorkedExample::AppendixC => HistoricalFamily::AppendixC,
        };
        make_historical_family(&family).expect("built-in family is valid")
    }

    fn dims(self) -> (usize, usize) {
        match self {
            WorkedExample::AppendixC => (6, 2),
            _ => (4, 2),
        }
    }
}

impl fmt::Display for WorkedExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Joint ket with the given `(s, e, amplitude)` entries.
fn joint_ket(n: usize, m: usize, entries: &[(usize, usize, f64)]) -> Vec<C64> {
    let mut v = vec![ZERO; n * m];
    for &(s, e, a) in entries {
        v[s * m + e] += re(a);
    }
    v
}

/// `⟨μ_i|U|Ψ⟩`, a ket on S.
fn env_bra_u_joint(u: &ComplexMatrix, m: usize, i: usize, psi: &[C64]) -> Vec<C64> {
    let n = u.rows() / m;
    (0..n)
        .map(|s| psi.iter().enumerate().map(|(r, p)| u[(s * m + i, r)] * p).sum())
        .collect()
}

/// `⟨μ_i|U|μ_j⟩`, an operator on S.
fn env_block(u: &ComplexMatrix, m: usize, i: usize, j: usize) -> ComplexMatrix {
    let n = u.rows() / m;
    ComplexMatrix::from_fn(n, n, |s, t| u[(s * m + i, t * m + j)])
}

fn block_projector(n: usize, block: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |a, b| if a == b && block.contains(&a) { ONE } else { ZERO })
}

/// `c·⟨μ_i|U|Ψ⟩⟨k|`
fn fixed_term(u: &ComplexMatrix, m: usize, c: f64, i: usize, psi: &[C64], k: usize) -> ComplexMatrix {
    let n = u.rows() / m;
    ComplexMatrix::outer(&env_bra_u_joint(u, m, i, psi), &ComplexMatrix::basis_vector(n, k)).scale_real(c)
}

/// The nonzero operators of a worked example written out term by term.
pub fn golden_kraus(example: WorkedExample, u: &ComplexMatrix) -> Result<Vec<(KrausLabel, ComplexMatrix)>> {
    let (n, m) = example.dims();
    if u.rows() != n * m || u.cols() != n * m {
        return Err(Error::DimensionMismatch(format!(
            "{example} needs a {0}×{0} unitary, got {1}×{2}",
            n * m,
            u.rows(),
            u.cols()
        )));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let fixed = |block, env, eig, sys| KrausLabel::Fixed { block, env, eig, sys };
    let mut out = Vec::new();
    match example {
        WorkedExample::AppendixA => {
            // K_{αi1} = ⟨i|U|α⟩ Π_α
            for (alpha, block) in [[0, 1], [2, 3]].iter().enumerate() {
                for i in 0..2 {
                    let k = env_block(u, m, i, alpha).matmul(&block_projector(n, block))?;
                    out.push((
                        KrausLabel::Free {
                            block: alpha,
                            env: i,
                            eig: 0,
                        },
                        k,
                    ));
                }
            }
        }
        WorkedExample::AppendixB => {
            let psi = [
                joint_ket(n, m, &[(0, 0, h), (1, 1, h)]),
                joint_ket(n, m, &[(2, 0, h), (3, 1, h)]),
            ];
            for (alpha, block) in [[0, 1], [2, 3]].iter().enumerate() {
                for i in 0..2 {
                    for (k, &sys) in block.iter().enumerate() {
                        out.push((fixed(alpha, i, 0, k), fixed_term(u, m, 1.0, i, &psi[alpha], sys)));
                    }
                }
            }
        }
        WorkedExample::AppendixC => {
            let r3 = 3f64.sqrt();
            let psi11 = joint_ket(
                n,
                m,
                &[
                    (0, 0, 3.0 / (2.0 * r3)),
                    (0, 1, 1.0 / (2.0 * r3)),
                    (1, 0, 1.0 / (2.0 * r3)),
                    (1, 1, 1.0 / (2.0 * r3)),
                ],
            );
            let psi12 = joint_ket(n, m, &[(0, 0, -0.5), (0, 1, 0.5), (1, 0, 0.5), (1, 1, 0.5)]);
            let psi21 = joint_ket(n, m, &[(2, 0, h), (3, 1, h)]);
            for i in 0..2 {
                for (eig, (c, psi)) in [(r3 / 2.0, &psi11), (0.5, &psi12)].into_iter().enumerate() {
                    for k in 0..2 {
                        out.push((fixed(0, i, eig, k), fixed_term(u, m, c, i, psi, k)));
                    }
                }
            }
            for i in 0..2 {
                for k in 0..2 {
                    out.push((fixed(1, i, 0, k), fixed_term(u, m, 1.0, i, &psi21, 2 + k)));
                }
            }
            for i in 0..2 {
                let k = env_block(u, m, i, 1).matmul(&block_projector(n, &[4, 5]))?;
                out.push((
                    KrausLabel::Free {
                        block: 2,
                        env: i,
                        eig: 0,
                    },
                    k,
                ));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GoldenComparison {
    pub example: WorkedExample,
    pub computed_operators: usize,
    pub expected_operators: usize,
    /// Residual per operator label, after phase alignment.
    pub residuals: Vec<(KrausLabel, f64)>,
    pub max_residual: f64,
    /// Labels present on one side only.
    pub unmatched: Vec<KrausLabel>,
}

impl GoldenComparison {
    pub fn passed(&self) -> bool {
        self.unmatched.is_empty()
            && self.computed_operators == self.expected_operators
            && self.max_residual < GOLDEN_TOLERANCE
    }
}

/// Builds the Kraus set of `example` for `u`, drops zero operators, and compares it with
/// [`golden_kraus`].
///
/// Each eigenvector is defined only up to a phase, which multiplies every operator built
/// from it. Operators are therefore grouped by (block, eigenvector) and each group is
/// aligned with one global phase before residuals are taken.
pub fn compare_with_golden(example: WorkedExample, u: &ComplexMatrix) -> Result<GoldenComparison> {
    let computed = prune_zero_operators(&build_kraus(&example.spec(), u)?, GOLDEN_TOLERANCE);
    let expected = golden_kraus(example, u)?;
    let expected_map: BTreeMap<KrausLabel, &ComplexMatrix> = expected.iter().map(|(l, k)| (*l, k)).collect();

    let group = |l: &KrausLabel| match *l {
        KrausLabel::Free { block, eig, .. } | KrausLabel::Fixed { block, eig, .. } => (block, eig),
        KrausLabel::Custom(i) => (usize::MAX, i),
    };
    let mut overlaps: BTreeMap<(usize, usize), C64> = BTreeMap::new();
    for op in computed.operators() {
        if let Some(g) = expected_map.get(&op.label) {
            let ov: C64 = g
                .as_slice()
                .iter()
                .zip(op.matrix.as_slice())
                .map(|(a, b)| a.conj() * b)
                .sum();
            *overlaps.entry(group(&op.label)).or_insert(ZERO) += ov;
        }
    }

    let mut residuals = Vec::new();
    let mut unmatched = Vec::new();
    for op in computed.operators() {
        match expected_map.get(&op.label) {
            Some(g) => {
                let z = overlaps[&group(&op.label)];
                let phase = if z.norm() > 0.0 { z.conj() / z.norm() } else { ONE };
                residuals.push((op.label, frobenius_distance(&op.matrix.scale(phase), g)?));
            }
            None => unmatched.push(op.label),
        }
    }
    unmatched.extend(expected.iter().map(|(l, _)| *l).filter(|l| computed.get(l).is_none()));
    let max_residual = residuals.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    Ok(GoldenComparison {
        example,
        computed_operators: computed.len(),
        expected_operators: expected.len(),
        residuals,
        max_residual,
        unmatched,
    })
}
