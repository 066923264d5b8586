use super::eig::hermitian_eig;
use super::matrix::ComplexMatrix;
use crate::error::Result;

/// ‖a − b‖_F
pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    Ok(a.checked_sub(b)?.frobenius_norm())
}

/// `(1/2)·Σ|eig(a − b)|`; the difference must be Hermitian.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let diff = a.checked_sub(b)?;
    let eig = hermitian_eig(&diff)?;
    Ok(0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}
