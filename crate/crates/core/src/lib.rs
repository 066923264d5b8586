//! Kraus representations for the reduced dynamics of open quantum systems whose initial
//! system–environment state belongs to a family built on a direct-sum decomposition of
//! the system space.
//!
//! A family fixes, per subspace `H_α`, either an environment state `ρ_α^E` (the block
//! contributes `p_α·ρ_α^S ⊗ ρ_α^E` with free `ρ_α^S`) or a whole correlated block state
//! `ρ_α^SE`. For any joint unitary `U`, [`kraus::build_kraus`] produces one Kraus set that
//! reproduces `Tr_E[U ρ^SE(0) U†]` for every member of the family.
//!
//! The [`verify`] module checks that claim against exact joint evolution and also hosts
//! negative controls and a zero-discord witness.

pub mod cli;
pub mod error;
pub mod golden;
pub mod kraus;
pub mod linalg;
pub mod statespace;
pub mod verify;

pub use error::{Error, Result};
pub use kraus::{apply_kraus, build_kraus, completeness_residual, prune_zero_operators, KrausLabel, KrausSet};
pub use linalg::{ComplexMatrix, RngSeed, C64};
pub use statespace::{BlockSpec, DirectSumDecomposition, FamilyMember, FamilySpec};
