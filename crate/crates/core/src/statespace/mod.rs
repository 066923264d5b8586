//! Direct-sum decompositions of the system space, family specifications and assembly of
//! concrete initial joint states.

mod decomposition;
mod family;
mod historical;
mod scenario;

pub use decomposition::DirectSumDecomposition;
pub use family::{
    assemble_initial_state, block_weight_of, reduced_member_state, sample_family_member, validate_density, BlockSpec,
    FamilyMember, FamilySpec, DENSITY_TRACE_TOL, PSD_FLOOR, WEIGHT_SUM_TOL,
};
pub use historical::{
    bell_block_vector, make_historical_family, product_plus_block_state, HistoricalFamily, HistoricalKind,
};
pub use scenario::MatrixInput;
