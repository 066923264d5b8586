use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Kronecker product `a ⊗ b`; `a` is the slow (outer) index.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Traces out the environment factor of a `(dim_s·dim_e)`-square matrix laid out as
/// `system ⊗ environment`.
pub fn partial_trace_env(m: &ComplexMatrix, dim_s: usize, dim_e: usize) -> Result<ComplexMatrix> {
    let n = dim_s * dim_e;
    if dim_s == 0 || dim_e == 0 || m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "partial trace over a {dim_s}×{dim_e} split needs a {n}×{n} matrix, got {}×{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(ComplexMatrix::from_fn(dim_s, dim_s, |s, t| {
        (0..dim_e).fold(ZERO, |acc, e| acc + m[(s * dim_e + e, t * dim_e + e)])
    }))
}
