//! Constructors for the classic initial-state families and for the three worked examples
//! that come with the construction.
//!
//! System kets are 0-based: the first basis state `|1^S⟩` of the worked examples is index
//! 0, `|2^S⟩` is index 1, and so on; the same shift applies to the environment.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use super::decomposition::DirectSumDecomposition;
use super::family::{BlockSpec, FamilySpec};
use crate::error::{Error, Result};
use crate::linalg::{tensor_product, ComplexMatrix, C64, ZERO};

/// Named family constructors, with the operators each one needs.
#[derive(Clone, Debug)]
pub enum HistoricalFamily {
    /// `ρ^S ⊗ ρ^E`: one block spanning the whole system.
    Product { dim_s: usize, rho_e: ComplexMatrix },
    /// `Σ_α p_α |α⟩⟨α| ⊗ ρ_α^E`: one one-dimensional block per system basis state.
    ZeroDiscord { env_states: Vec<ComplexMatrix> },
    /// `(p₁/3)(|0⟩⟨0|⊗ρ₀ + |1⟩⟨1|⊗ρ₁ + |+⟩⟨+|⊗ρ₊) + Σ_{i≥2} p_i |i⟩⟨i| ⊗ ρ_i`.
    ///
    /// Blocks are `{0,1}, {2}, …, {N₀}`; `others[k]` is the environment state of `|k+2⟩`.
    Brodutch {
        rho_0: ComplexMatrix,
        rho_1: ComplexMatrix,
        rho_plus: ComplexMatrix,
        others: Vec<ComplexMatrix>,
    },
    /// 4×2 product-per-block example with environments `|0⟩`, `|1⟩`.
    AppendixA,
    /// 4×2 example with two fixed Bell-like blocks.
    AppendixB,
    /// 6×2 example mixing two fixed blocks with one free block.
    AppendixC,
}

/// Names accepted by [`HistoricalKind::from_str`] and the `demo` command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HistoricalKind {
    Product,
    ZeroDiscord,
    Brodutch,
    AppendixA,
    AppendixB,
    AppendixC,
}

impl HistoricalKind {
    pub const ALL: [HistoricalKind; 6] = [
        HistoricalKind::AppendixA,
        HistoricalKind::AppendixB,
        HistoricalKind::AppendixC,
        HistoricalKind::Brodutch,
        HistoricalKind::Product,
        HistoricalKind::ZeroDiscord,
    ];

    pub fn name(self) -> &'static str {
        match self {
            HistoricalKind::Product => "product",
            HistoricalKind::ZeroDiscord => "zero-discord",
            HistoricalKind::Brodutch => "brodutch",
            HistoricalKind::AppendixA => "appendix-a",
            HistoricalKind::AppendixB => "appendix-b",
            HistoricalKind::AppendixC => "appendix-c",
        }
    }

    /// A concrete instance with built-in parameters.
    pub fn default_family(self) -> HistoricalFamily {
        let ket = |dim, i| ComplexMatrix::projector(&ComplexMatrix::basis_vector(dim, i));
        match self {
            HistoricalKind::Product => HistoricalFamily::Product {
                dim_s: 3,
                rho_e: ComplexMatrix::from_real_diagonal(&[0.7, 0.3]),
            },
            HistoricalKind::ZeroDiscord => HistoricalFamily::ZeroDiscord {
                env_states: vec![
                    ket(2, 0),
                    ket(2, 1),
                    plus_projector(),
                    ComplexMatrix::from_real_diagonal(&[0.5, 0.5]),
                ],
            },
            HistoricalKind::Brodutch => HistoricalFamily::Brodutch {
                rho_0: ket(2, 0),
                rho_1: ket(2, 1),
                rho_plus: plus_projector(),
                others: vec![ket(2, 0), ComplexMatrix::from_real_diagonal(&[0.25, 0.75])],
            },
            HistoricalKind::AppendixA => HistoricalFamily::AppendixA,
            HistoricalKind::AppendixB => HistoricalFamily::AppendixB,
            HistoricalKind::AppendixC => HistoricalFamily::AppendixC,
        }
    }
}

impl fmt::Display for HistoricalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HistoricalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HistoricalKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = HistoricalKind::ALL.iter().map(|k| k.name()).collect();
            Error::InvalidParams(format!("unknown family '{s}' (expected one of {})", names.join(", ")))
        })
    }
}

fn plus_projector() -> ComplexMatrix {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    ComplexMatrix::projector(&[h, h])
}

fn amplitudes(entries: &[(usize, f64)], dim: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    for &(i, a) in entries {
        v[i] = C64::new(a, 0.0);
    }
    v
}

/// `(|0,0⟩ + |1,1⟩)/√2` in a two-dimensional block tensored with a qubit environment
/// (block-local index `k·2 + e`).
pub fn bell_block_vector() -> Vec<C64> {
    amplitudes(&[(0, FRAC_1_SQRT_2), (3, FRAC_1_SQRT_2)], 4)
}

/// `(|0,0⟩⟨0,0| + |+,+⟩⟨+,+|)/2`, the separable block with nonvanishing discord in the
/// 6×2 example (block-local ordering).
pub fn product_plus_block_state() -> ComplexMatrix {
    let zero_zero = ComplexMatrix::projector(&amplitudes(&[(0, 1.0)], 4));
    let plus = plus_projector();
    let plus_plus = tensor_product(&plus, &plus);
    (&zero_zero + &plus_plus).scale_real(0.5)
}

pub fn make_historical_family(kind: &HistoricalFamily) -> Result<FamilySpec> {
    let free = |rho_e: ComplexMatrix| BlockSpec::FreeProduct { rho_e };
    let fixed = |rho_se: ComplexMatrix| BlockSpec::FixedCorrelated { rho_se };
    let ket = |dim, i| ComplexMatrix::projector(&ComplexMatrix::basis_vector(dim, i));
    match kind {
        HistoricalFamily::Product { dim_s, rho_e } => {
            if *dim_s == 0 {
                return Err(Error::InvalidParams("product family needs dim_s ≥ 1".into()));
            }
            let dec = DirectSumDecomposition::contiguous(env_dim(rho_e)?, &[*dim_s])?;
            FamilySpec::new(dec, vec![free(rho_e.clone())])
        }
        HistoricalFamily::ZeroDiscord { env_states } => {
            let m = common_env_dim(env_states.iter())?;
            let dec = DirectSumDecomposition::contiguous(m, &vec![1; env_states.len()])?;
            FamilySpec::new(dec, env_states.iter().cloned().map(free).collect())
        }
        HistoricalFamily::Brodutch {
            rho_0,
            rho_1,
            rho_plus,
            others,
        } => {
            let m = common_env_dim([rho_0, rho_1, rho_plus].into_iter().chain(others))?;
            let block = (&(&tensor_product(&ket(2, 0), rho_0) + &tensor_product(&ket(2, 1), rho_1))
                + &tensor_product(&plus_projector(), rho_plus))
                .scale_real(1.0 / 3.0);
            let mut sizes = vec![2];
            sizes.extend(std::iter::repeat_n(1, others.len()));
            let dec = DirectSumDecomposition::contiguous(m, &sizes)?;
            let mut specs = vec![fixed(block)];
            specs.extend(others.iter().cloned().map(free));
            FamilySpec::new(dec, specs)
        }
        HistoricalFamily::AppendixA => FamilySpec::new(
            DirectSumDecomposition::contiguous(2, &[2, 2])?,
            vec![free(ket(2, 0)), free(ket(2, 1))],
        ),
        HistoricalFamily::AppendixB => {
            let bell = ComplexMatrix::projector(&bell_block_vector());
            FamilySpec::new(
                DirectSumDecomposition::contiguous(2, &[2, 2])?,
                vec![fixed(bell.clone()), fixed(bell)],
            )
        }
        HistoricalFamily::AppendixC => FamilySpec::new(
            DirectSumDecomposition::contiguous(2, &[2, 2, 2])?,
            vec![
                fixed(product_plus_block_state()),
                fixed(ComplexMatrix::projector(&bell_block_vector())),
                free(ket(2, 1)),
            ],
        ),
    }
}

fn env_dim(rho: &ComplexMatrix) -> Result<usize> {
    if !rho.is_square() {
        return Err(Error::InvalidParams(format!(
            "environment state must be square, got {}×{}",
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(rho.rows())
}

fn common_env_dim<'a>(mut states: impl Iterator<Item = &'a ComplexMatrix>) -> Result<usize> {
    let first = states
        .next()
        .ok_or_else(|| Error::InvalidParams("at least one environment state is required".into()))?;
    let m = env_dim(first)?;
    for s in states {
        if env_dim(s)? != m {
            return Err(Error::InvalidParams(format!(
                "environment states disagree on dimension ({m} vs {})",
                s.rows()
            )));
        }
    }
    Ok(m)
}
