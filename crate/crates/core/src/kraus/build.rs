use super::set::{KrausLabel, KrausOperator, KrausSet};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, RngSeed, C64, ONE, ZERO};
use crate::statespace::{BlockSpec, DirectSumDecomposition, FamilySpec};

/// Eigenvalues at or below this are treated as zero and produce no Kraus operators.
pub const EIGENVALUE_CUTOFF: f64 = 1e-12;

/// Spectral data of one block, the only state-dependent input of the construction.
///
/// For a free-product block the eigenpairs are those of `ρ_α^E` (vectors of length `M`);
/// for a fixed block they are those of `ρ_α^SE` in the block-local basis (length `d_α·M`).
/// `subspace_basis` is a `d_α×d_α` unitary whose columns are the basis `{ν_αk}` of the
/// subspace used by fixed-block operators; it defaults to the identity.
#[derive(Clone, Debug)]
pub struct BlockSpectrum {
    pub block: usize,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<C64>>,
    pub subspace_basis: ComplexMatrix,
}

impl BlockSpectrum {
    /// Rotates the eigenvectors of every cluster of eigenvalues closer than `tol` by a
    /// Haar-random unitary. The spectral projectors, and hence the channel, are unchanged.
    pub fn rotate_degenerate(&self, tol: f64, seed: RngSeed) -> BlockSpectrum {
        let mut rng = seed.rng();
        let mut vectors = self.eigenvectors.clone();
        let mut start = 0;
        while start < self.eigenvalues.len() {
            let mut end = start + 1;
            while end < self.eigenvalues.len() && (self.eigenvalues[end - 1] - self.eigenvalues[end]).abs() <= tol {
                end += 1;
            }
            let size = end - start;
            if size > 1 {
                let w = crate::linalg::random::haar_with(size, &mut rng);
                let dim = vectors[start].len();
                for l in 0..size {
                    vectors[start + l] = (0..dim)
                        .map(|r| (0..size).map(|m| self.eigenvectors[start + m][r] * w[(m, l)]).sum())
                        .collect();
                }
            }
            start = end;
        }
        BlockSpectrum {
            eigenvectors: vectors,
            ..self.clone()
        }
    }

    /// Replaces the subspace basis with `u·(current basis)`; `u` must be a `d_α×d_α` unitary.
    pub fn with_subspace_rotation(&self, u: &ComplexMatrix) -> Result<BlockSpectrum> {
        u.require_unitary()?;
        Ok(BlockSpectrum {
            subspace_basis: u.matmul(&self.subspace_basis)?,
            ..self.clone()
        })
    }

    /// Whether the spectrum contains a cluster of nonzero eigenvalues closer than `tol`.
    pub fn has_degeneracy(&self, tol: f64) -> bool {
        self.eigenvalues.windows(2).any(|w| (w[0] - w[1]).abs() <= tol)
    }
}

/// Eigendecomposes every block's fixed operator, discarding eigenvalues ≤ [`EIGENVALUE_CUTOFF`].
pub fn block_spectra(spec: &FamilySpec) -> Result<Vec<BlockSpectrum>> {
    spec.block_specs()
        .iter()
        .enumerate()
        .map(|(alpha, block)| {
            let fixed_op = match block {
                BlockSpec::FreeProduct { rho_e } => rho_e,
                BlockSpec::FixedCorrelated { rho_se } => rho_se,
            };
            let eig = hermitian_eig(fixed_op)?;
            let keep: Vec<usize> = (0..eig.dim())
                .filter(|&k| eig.eigenvalues[k] > EIGENVALUE_CUTOFF)
                .collect();
            Ok(BlockSpectrum {
                block: alpha,
                eigenvalues: keep.iter().map(|&k| eig.eigenvalues[k]).collect(),
                eigenvectors: keep.iter().map(|&k| eig.eigenvector(k)).collect(),
                subspace_basis: ComplexMatrix::identity(spec.decomposition().block_dim(alpha)?),
            })
        })
        .collect()
}

/// Kraus operators describing the reduced dynamics of every member of `spec` under the
/// joint unitary `u`.
///
/// Fixed blocks come first (ascending block, then `i`, `L`, `k`), followed by the free
/// blocks (ascending block, then `i`, `j`). Operators from zero eigenvalues are omitted.
pub fn build_kraus(spec: &FamilySpec, u: &ComplexMatrix) -> Result<KrausSet> {
    build_kraus_with_spectra(spec, u, &block_spectra(spec)?)
}

/// [`build_kraus`] with caller-supplied spectral data (e.g. a rotated degenerate eigenbasis).
pub fn build_kraus_with_spectra(spec: &FamilySpec, u: &ComplexMatrix, spectra: &[BlockSpectrum]) -> Result<KrausSet> {
    let dec = spec.decomposition();
    check_unitary(dec, u)?;
    if spectra.len() != spec.num_blocks() {
        return Err(Error::DimensionMismatch(format!(
            "{} block spectra for {} blocks",
            spectra.len(),
            spec.num_blocks()
        )));
    }
    let mut operators = Vec::new();
    for alpha in spec.fixed_blocks() {
        fixed_block_operators(dec, u, &spectra[alpha], alpha, &mut operators)?;
    }
    for alpha in spec.free_blocks() {
        free_block_operators(dec, u, &spectra[alpha], alpha, &mut operators)?;
    }
    KrausSet::new(dec.dim_s(), operators)
}

fn check_unitary(dec: &DirectSumDecomposition, u: &ComplexMatrix) -> Result<()> {
    let nm = dec.joint_dim();
    if u.rows() != nm || u.cols() != nm {
        return Err(Error::DimensionMismatch(format!(
            "joint unitary must be {nm}×{nm}, got {}×{}",
            u.rows(),
            u.cols()
        )));
    }
    u.require_unitary()
}

/// `K_{αiLk} = √η_L · ⟨μ_i|U|Ψ_L⟩ · ⟨ν_k|`
fn fixed_block_operators(
    dec: &DirectSumDecomposition,
    u: &ComplexMatrix,
    spectrum: &BlockSpectrum,
    alpha: usize,
    out: &mut Vec<KrausOperator>,
) -> Result<()> {
    let (n, m) = (dec.dim_s(), dec.dim_e());
    let block = dec.block(alpha)?;
    let d = block.len();
    check_spectrum(spectrum, d * m, d)?;

    // |ν_k⟩ embedded in the N-dimensional system space
    let nu: Vec<Vec<C64>> = (0..d)
        .map(|k| {
            let mut v = vec![ZERO; n];
            for (a, &g) in block.iter().enumerate() {
                v[g] = spectrum.subspace_basis[(a, k)];
            }
            v
        })
        .collect();
    let psi_full: Vec<Vec<C64>> = spectrum
        .eigenvectors
        .iter()
        .map(|v| dec.embed_block_vector(alpha, v))
        .collect::<Result<_>>()?;

    for i in 0..m {
        for (l, (&eta, psi)) in spectrum.eigenvalues.iter().zip(&psi_full).enumerate() {
            let amp = eta.sqrt();
            // ⟨μ_i|U|Ψ⟩: rows s·M + i of U applied to Ψ
            let column: Vec<C64> = (0..n)
                .map(|s| {
                    let row = u.row(s * m + i);
                    row.iter().zip(psi).map(|(a, b)| a * b).sum::<C64>() * amp
                })
                .collect();
            for (k, nu_k) in nu.iter().enumerate() {
                out.push(KrausOperator {
                    label: KrausLabel::Fixed {
                        block: alpha,
                        env: i,
                        eig: l,
                        sys: k,
                    },
                    matrix: ComplexMatrix::outer(&column, nu_k),
                });
            }
        }
    }
    Ok(())
}

/// `K_{αij} = √λ_j · ⟨μ_i|U|φ_j⟩ · Π_α`
fn free_block_operators(
    dec: &DirectSumDecomposition,
    u: &ComplexMatrix,
    spectrum: &BlockSpectrum,
    alpha: usize,
    out: &mut Vec<KrausOperator>,
) -> Result<()> {
    let (n, m) = (dec.dim_s(), dec.dim_e());
    let block = dec.block(alpha)?;
    check_spectrum(spectrum, m, block.len())?;
    for i in 0..m {
        for (j, (&lambda, phi)) in spectrum.eigenvalues.iter().zip(&spectrum.eigenvectors).enumerate() {
            let amp = lambda.sqrt();
            let mut data = vec![ZERO; n * n];
            for s in 0..n {
                let row = u.row(s * m + i);
                for &t in block {
                    let entry: C64 = (0..m).map(|e| row[t * m + e] * phi[e]).sum();
                    data[s * n + t] = entry * amp;
                }
            }
            out.push(KrausOperator {
                label: KrausLabel::Free {
                    block: alpha,
                    env: i,
                    eig: j,
                },
                matrix: ComplexMatrix::new(n, n, data)?,
            });
        }
    }
    Ok(())
}

fn check_spectrum(spectrum: &BlockSpectrum, vec_len: usize, d: usize) -> Result<()> {
    if spectrum.eigenvalues.len() != spectrum.eigenvectors.len()
        || spectrum.eigenvectors.iter().any(|v| v.len() != vec_len)
    {
        return Err(Error::DimensionMismatch(format!(
            "spectrum of block {} must hold vectors of length {vec_len}",
            spectrum.block
        )));
    }
    if spectrum.subspace_basis.rows() != d || spectrum.subspace_basis.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "subspace basis of block {} must be {d}×{d}",
            spectrum.block
        )));
    }
    Ok(())
}

/// Product-per-block construction computed with explicit isometries,
/// `K_{αij} = √λ_j · (I_N ⊗ ⟨μ_i|) · U · (I_N ⊗ |φ_j⟩) · Π_α`,
/// over the full index range `i, j = 0..M` (zero-eigenvalue operators included).
///
/// Only valid for families without fixed blocks; used as an independent route for the
/// product-family special case.
pub fn build_product_family_kraus(
    dec: &DirectSumDecomposition,
    env_states: &[ComplexMatrix],
    u: &ComplexMatrix,
) -> Result<KrausSet> {
    check_unitary(dec, u)?;
    if env_states.len() != dec.num_blocks() {
        return Err(Error::DimensionMismatch(format!(
            "{} environment states for {} blocks",
            env_states.len(),
            dec.num_blocks()
        )));
    }
    let (n, m) = (dec.dim_s(), dec.dim_e());
    let env_bra = |i: usize| ComplexMatrix::from_fn(n, n * m, |s, r| if r == s * m + i { ONE } else { ZERO });
    let env_ket = |phi: &[C64]| ComplexMatrix::from_fn(n * m, n, |r, s| if r / m == s { phi[r % m] } else { ZERO });

    let mut operators = Vec::new();
    for (alpha, rho_e) in env_states.iter().enumerate() {
        let eig = hermitian_eig(rho_e)?;
        if eig.dim() != m {
            return Err(Error::DimensionMismatch(format!(
                "environment state {alpha} is not {m}×{m}"
            )));
        }
        let projector = dec.projector(alpha)?;
        for i in 0..m {
            let left = env_bra(i).matmul(u)?;
            for j in 0..m {
                let lambda = eig.eigenvalues[j].max(0.0);
                let k = left.matmul(&env_ket(&eig.eigenvector(j)))?.matmul(&projector)?;
                operators.push(KrausOperator {
                    label: KrausLabel::Free {
                        block: alpha,
                        env: i,
                        eig: j,
                    },
                    matrix: k.scale_real(lambda.sqrt()),
                });
            }
        }
    }
    KrausSet::new(n, operators)
}
