use serde::{Deserialize, Serialize};

use super::{EPS_DEG, EPS_DISCORD};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, partial_trace_env, trace_distance, ComplexMatrix, RngSeed, C64, ZERO};
use crate::statespace::validate_density;

/// Marginal eigenvalues at or below this count as zero.
const NULL_EIGENVALUE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum DiscordClass {
    ZeroDiscord,
    NonzeroDiscord,
    /// A degenerate marginal left the measurement basis undetermined and the chosen basis
    /// did not certify zero discord.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscordVerdict {
    pub classification: DiscordClass,
    /// Trace distance between the state and its dephasing in `basis`.
    pub witness_distance: f64,
    pub basis_used: String,
    /// Columns are the measurement basis on S.
    pub basis: ComplexMatrix,
}

/// Decides whether `ρ^SE` is classical-quantum, `Σ_k q_k |k⟩⟨k| ⊗ σ_k`, for some
/// orthonormal basis `{|k⟩}` of S.
///
/// Such a basis must diagonalise `ρ^S`. With a nondegenerate marginal it is unique up to
/// phases, so dephasing in the marginal eigenbasis decides. Inside a degenerate cluster the
/// basis must also diagonalise every cluster block `⟨k|ρ^SE|k'⟩` (an operator on E); a
/// generic Hermitian combination of their matrix elements pins the basis down whenever it
/// has a simple spectrum. Only if some cluster stays degenerate and dephasing fails is the
/// result inconclusive.
pub fn zero_discord_witness(rho_se: &ComplexMatrix, dim_s: usize, dim_e: usize) -> Result<DiscordVerdict> {
    if dim_s == 0 || dim_e == 0 {
        return Err(Error::DimensionMismatch("dimensions must be positive".into()));
    }
    validate_density(rho_se, dim_s * dim_e).map_err(|e| e.with_context("rhoSE"))?;
    let rho_s = partial_trace_env(rho_se, dim_s, dim_e)?;
    let eig = hermitian_eig(&rho_s)?;
    let mut vectors: Vec<Vec<C64>> = (0..dim_s).map(|k| eig.eigenvector(k)).collect();

    let mut refined = 0;
    let mut unresolved = 0;
    let mut start = 0;
    while start < dim_s {
        let mut end = start + 1;
        while end < dim_s && eig.eigenvalues[end - 1] - eig.eigenvalues[end] <= EPS_DEG {
            end += 1;
        }
        // a null cluster carries no weight: its basis moves the distance by at most its trace
        let null = eig.eigenvalues[start] <= NULL_EIGENVALUE;
        if end - start > 1 && !null {
            let cluster = &vectors[start..end];
            let (rotated, resolved) = refine_cluster(rho_se, cluster, dim_e)?;
            vectors.splice(start..end, rotated);
            refined += 1;
            if !resolved {
                unresolved += 1;
            }
        }
        start = end;
    }

    let basis = ComplexMatrix::from_fn(dim_s, dim_s, |i, k| vectors[k][i]);
    let distance = trace_distance(rho_se, &dephase(rho_se, &vectors, dim_e))?;
    let classification = if distance < EPS_DISCORD {
        DiscordClass::ZeroDiscord
    } else if unresolved == 0 {
        DiscordClass::NonzeroDiscord
    } else {
        DiscordClass::Inconclusive
    };
    let basis_used = match (refined, unresolved) {
        (0, _) => "eigenbasis of rhoS".to_string(),
        (r, 0) => format!("eigenbasis of rhoS, refined in {r} degenerate cluster(s)"),
        (r, u) => format!("eigenbasis of rhoS, refined in {r} degenerate cluster(s), {u} left undetermined"),
    };
    Ok(DiscordVerdict {
        classification,
        witness_distance: distance,
        basis_used,
        basis,
    })
}

/// `Σ_k (|k⟩⟨k| ⊗ I) ρ (|k⟩⟨k| ⊗ I)`
fn dephase(rho: &ComplexMatrix, basis: &[Vec<C64>], m: usize) -> ComplexMatrix {
    let n = basis.len();
    let mut out = ComplexMatrix::zeros(n * m, n * m);
    for v in basis {
        let p = ComplexMatrix::projector(v);
        let pe = ComplexMatrix::from_fn(
            n * m,
            n * m,
            |r, c| if r % m == c % m { p[(r / m, c / m)] } else { ZERO },
        );
        out = &out + &pe.conjugate(rho).expect("square shapes agree");
    }
    out
}

/// Rotates a degenerate cluster to diagonalise a fixed pseudo-random Hermitian combination
/// of the blocks `⟨v_a ⊗ e|ρ|v_b ⊗ e'⟩`. Returns the rotated vectors and whether the
/// combination had a simple spectrum.
fn refine_cluster(rho: &ComplexMatrix, cluster: &[Vec<C64>], m: usize) -> Result<(Vec<Vec<C64>>, bool)> {
    let d = cluster.len();
    let n = cluster[0].len();
    let mut rng = RngSeed(0x05EE_DD15_C0BD).rng();
    let mut h = ComplexMatrix::zeros(d, d);
    for e in 0..m {
        for f in e..m {
            // C[a,b] = ⟨v_a ⊗ e|ρ|v_b ⊗ f⟩
            let c = ComplexMatrix::from_fn(d, d, |a, b| {
                let mut acc = ZERO;
                for s in 0..n {
                    for t in 0..n {
                        acc += cluster[a][s].conj() * rho[(s * m + e, t * m + f)] * cluster[b][t];
                    }
                }
                acc
            });
            let (x, y): (f64, f64) = (rand::Rng::random(&mut rng), rand::Rng::random(&mut rng));
            let sym = (&c + &c.adjoint()).scale_real(x + 0.5);
            let anti = (&c - &c.adjoint()).scale(C64::new(0.0, y + 0.5));
            h = &h + &(&sym + &anti);
        }
    }
    let h = h.hermitian_part();
    let eig = hermitian_eig(&h)?;
    let scale = eig.eigenvalues.iter().fold(0.0_f64, |a, l| a.max(l.abs()));
    let resolved = scale > 0.0
        && eig
            .eigenvalues
            .windows(2)
            .all(|w| w[0] - w[1] > EPS_DEG * scale.max(1.0));
    let rotated = (0..d)
        .map(|l| {
            let w = eig.eigenvector(l);
            (0..n).map(|s| (0..d).map(|a| cluster[a][s] * w[a]).sum()).collect()
        })
        .collect();
    Ok((rotated, resolved))
}
