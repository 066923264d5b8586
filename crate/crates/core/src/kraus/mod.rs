//! Kraus operator sets for family-restricted reduced dynamics: construction from a
//! [`FamilySpec`](crate::statespace::FamilySpec) and a joint unitary, application,
//! completeness checks and pruning.

mod build;
mod set;

pub use build::{
    block_spectra, build_kraus, build_kraus_with_spectra, build_product_family_kraus, BlockSpectrum, EIGENVALUE_CUTOFF,
};
pub use set::{apply_kraus, completeness_residual, prune_zero_operators, KrausLabel, KrausOperator, KrausSet};

/// Completeness tolerance `‖Σ K†K − I‖_F` for constructed sets.
pub const EPS_COMPLETENESS: f64 = 1e-10;
