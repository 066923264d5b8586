use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64, ZERO};

/// Seed for every random draw in the crate. Equal seeds give bit-identical streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Child seed for sub-stream `stream`, mixed with splitmix64 so neighbouring
    /// streams are decorrelated.
    pub fn derive(self, stream: u64) -> RngSeed {
        let mut z = self
            .0
            .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(stream.wrapping_add(1)));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RngSeed(z ^ (z >> 31))
    }
}

impl From<u64> for RngSeed {
    fn from(v: u64) -> Self {
        RngSeed(v)
    }
}

pub(crate) fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub(crate) fn ginibre_with<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Complex Ginibre matrix: i.i.d. entries with E|z|² = 1.
pub fn ginibre(rows: usize, cols: usize, seed: RngSeed) -> ComplexMatrix {
    ginibre_with(rows, cols, &mut seed.rng())
}

/// Haar-distributed unitary from the QR factorisation of a Ginibre matrix.
///
/// Gram–Schmidt yields `R` with a positive real diagonal, which is exactly the phase
/// fixing that makes `Q` Haar distributed.
pub fn haar_random_unitary(dim: usize, seed: RngSeed) -> ComplexMatrix {
    haar_with(dim, &mut seed.rng())
}

pub(crate) fn haar_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    assert!(dim >= 1, "unitary dimension must be positive");
    let g = ginibre_with(dim, dim, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.col(j);
        // two passes of modified Gram–Schmidt keep orthogonality at rounding level
        for _ in 0..2 {
            for q in &cols {
                let overlap: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= overlap * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for vi in &mut v {
            *vi /= norm;
        }
        cols.push(v);
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Random density operator `G·G†/Tr(G·G†)` with `G` square Ginibre.
pub fn random_density(dim: usize, seed: RngSeed) -> ComplexMatrix {
    random_density_with(dim, &mut seed.rng())
}

pub(crate) fn random_density_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    assert!(dim >= 1, "density dimension must be positive");
    let g = ginibre_with(dim, dim, rng);
    let w = g.mul_unchecked(&g.adjoint()).hermitian_part();
    let tr = w.trace().re;
    w.scale_real(1.0 / tr)
}

/// Random Hermitian matrix `(G + G†)/2` (GUE up to scale).
pub fn random_hermitian(dim: usize, seed: RngSeed) -> ComplexMatrix {
    ginibre(dim, dim, seed).hermitian_part()
}

/// Uniform sample from the probability simplex with `k` vertices (Dirichlet(1,…,1)).
pub(crate) fn simplex_with<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..k)
        .map(|_| {
            let u: f64 = rng.random();
            -(1.0 - u).ln()
        })
        .collect();
    let total: f64 = draws.iter().sum();
    draws.iter().map(|x| x / total).collect()
}

/// Haar-random normalised pure state of dimension `dim`.
pub fn random_pure_state(dim: usize, seed: RngSeed) -> Vec<C64> {
    random_pure_with(dim, &mut seed.rng())
}

pub(crate) fn random_pure_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| complex_normal(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        let mut e = vec![ZERO; dim];
        e[0] = C64::new(1.0, 0.0);
        return e;
    }
    v.into_iter().map(|z| z / norm).collect()
}
