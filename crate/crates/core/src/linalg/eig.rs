use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::error::Result;

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `A = V·diag(λ)·V†` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigenResult {
    /// Sorted in descending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenResult {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.col(k)
    }

    /// `V·diag(λ)·V†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let scaled = ComplexMatrix::from_fn(v.rows(), v.cols(), |i, k| v[(i, k)] * self.eigenvalues[k]);
        scaled.mul_unchecked(&v.adjoint())
    }
}

/// Diagonalises a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Eigenvalues come back in descending order. Within a degenerate cluster the eigenvector
/// basis is whatever the rotations converged to; ties keep the order of the diagonal.
/// Each eigenvector is scaled by a phase so that its first largest-modulus component is
/// real and positive.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigenResult> {
    m.require_hermitian()?;
    let n = m.rows();
    let mut a: Vec<C64> = m.hermitian_part().as_slice().to_vec();
    let mut v: Vec<C64> = ComplexMatrix::identity(n).as_slice().to_vec();

    let scale = m.frobenius_norm();
    let target = f64::EPSILON * scale * 1e-2;
    let mut previous = f64::INFINITY;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target || off >= previous {
            break;
        }
        previous = off;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    // stable sort keeps the diagonal order for exact ties
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]));

    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let mut vecs = vec![ZERO; n * n];
    for (new_k, &old_k) in order.iter().enumerate() {
        let column: Vec<C64> = (0..n).map(|i| v[i * n + old_k]).collect();
        let phase = canonical_phase(&column);
        for i in 0..n {
            vecs[i * n + new_k] = column[i] * phase;
        }
    }
    Ok(HermitianEigenResult {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_raw(n, n, vecs),
    })
}

/// One Jacobi rotation annihilating `a[p][q]`.
///
/// The pair is first made real by a diagonal phase, then zeroed by a real rotation;
/// `J = D·R` acts as `A ← J†AJ`, `V ← VJ`.
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    if mag <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[p * n + q] = ZERO;
        a[q * n + p] = ZERO;
        return;
    }
    let e = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J restricted to (p, q): [[c, s], [-s·ē, c·ē]]
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -e.conj() * s;
    let jqq = e.conj() * c;

    // A ← A·J (columns p, q)
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * jpp + akq * jqp;
        a[k * n + q] = akp * jpq + akq * jqq;
    }
    // A ← J†·A (rows p, q)
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
        a[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = C64::new(a[q * n + q].re, 0.0);

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * jpp + vkq * jqp;
        v[k * n + q] = vkp * jpq + vkq * jqq;
    }
}

fn canonical_phase(column: &[C64]) -> C64 {
    let mut best = 0;
    let mut best_mod = 0.0;
    for (i, z) in column.iter().enumerate() {
        // a relative margin keeps near-ties on the earliest index
        if z.norm() > best_mod * (1.0 + 1e-9) {
            best = i;
            best_mod = z.norm();
        }
    }
    if best_mod == 0.0 {
        ONE
    } else {
        column[best].conj() / best_mod
    }
}

/// `exp(−i·h·t)` for Hermitian `h`, computed from the spectral decomposition of `h`.
pub fn matrix_exp_skew_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    let v = &eig.eigenvectors;
    let phases: Vec<C64> = eig
        .eigenvalues
        .iter()
        .map(|&lambda| C64::from_polar(1.0, -lambda * t))
        .collect();
    let scaled = ComplexMatrix::from_fn(v.rows(), v.cols(), |i, k| v[(i, k)] * phases[k]);
    Ok(scaled.mul_unchecked(&v.adjoint()))
}
