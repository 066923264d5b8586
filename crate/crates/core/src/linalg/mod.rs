//! Dense complex linear algebra: the matrix type, Kronecker products and partial traces,
//! a Jacobi eigensolver for Hermitian matrices, unitary propagators, random sampling and
//! distance measures.

mod eig;
mod matrix;
mod metrics;
pub(crate) mod random;
mod tensor;

pub use eig::{hermitian_eig, matrix_exp_skew_hermitian, HermitianEigenResult};
pub use matrix::{ComplexMatrix, C64, ONE, ZERO};
pub use metrics::{frobenius_distance, trace_distance};
pub use random::{ginibre, haar_random_unitary, random_density, random_hermitian, random_pure_state, RngSeed};
pub use tensor::{partial_trace_env, tensor_product};

/// Hermiticity tolerance, relative to the Frobenius norm.
pub const EPS_HERM: f64 = 1e-9;
/// Unitarity tolerance, relative to the Frobenius norm of the identity.
pub const EPS_UNIT: f64 = 1e-9;
/// Eigendecomposition tolerance (reconstruction and orthonormality), relative.
pub const EPS_EIG: f64 = 1e-10;
/// Absolute floor applied to every relative tolerance.
pub const ABS_FLOOR: f64 = 1e-12;

pub(crate) fn relative_tolerance(eps: f64, scale: f64) -> f64 {
    (eps * scale).max(ABS_FLOOR)
}
