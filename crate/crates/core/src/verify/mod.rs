//! Independent checks of the Kraus construction.
//!
//! [`exact_reduced_dynamics`] evolves the joint state directly and is the reference every
//! other check compares against. [`family_equivalence_test`] runs that comparison over
//! sampled members and unitaries, [`out_of_family_control`] confirms the comparison can
//! fail, and [`zero_discord_witness`] classifies joint states by quantum discord.

mod control;
mod discord;
mod equivalence;

pub use control::{out_of_family_control, ControlConfig, ControlReport, Perturbation};
pub use discord::{zero_discord_witness, DiscordClass, DiscordVerdict};
pub use equivalence::{
    family_equivalence_test, generate_report, parse_report, EquivalenceConfig, SampleRecord, UnitarySource, Verdict,
    VerificationReport,
};

use crate::error::{Error, Result};
use crate::linalg::{partial_trace_env, ComplexMatrix};

/// Largest trace distance accepted between prediction and exact evolution.
pub const EPS_VERIFY: f64 = 1e-9;
/// Trace distance a negative control must exceed to count as a detected failure.
pub const EPS_FAIL: f64 = 1e-3;
/// Eigenvalues of the marginal closer than this are treated as degenerate.
pub const EPS_DEG: f64 = 1e-8;
/// Dephasing distance below which a state is classified as zero-discord.
pub const EPS_DISCORD: f64 = 1e-9;

/// `Tr_E[U ρ^SE U†]`
pub fn exact_reduced_dynamics(
    u: &ComplexMatrix,
    rho_se: &ComplexMatrix,
    dim_s: usize,
    dim_e: usize,
) -> Result<ComplexMatrix> {
    let nm = dim_s * dim_e;
    for (what, m) in [("joint unitary", u), ("joint state", rho_se)] {
        if m.rows() != nm || m.cols() != nm {
            return Err(Error::DimensionMismatch(format!(
                "{what} must be {nm}×{nm}, got {}×{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    u.require_unitary()?;
    partial_trace_env(&u.mul_unchecked(rho_se).mul_unchecked(&u.adjoint()), dim_s, dim_e)
}
