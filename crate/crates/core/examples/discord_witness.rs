//! Classifying joint states: the correlated two-level family has discord unless its
//! weight vanishes, while states of the form `Σ p_α |χ_α⟩⟨χ_α| ⊗ ρ_α` never do.

use cpmap::linalg::{haar_random_unitary, random_density, random_pure_state, tensor_product};
use cpmap::statespace::{assemble_initial_state, make_historical_family, FamilyMember, HistoricalFamily};
use cpmap::verify::zero_discord_witness;
use cpmap::{ComplexMatrix, RngSeed};

pub fn run_example() -> cpmap::Result<()> {
    let pure = |seed| ComplexMatrix::projector(&random_pure_state(2, RngSeed(seed)));
    let spec = make_historical_family(&HistoricalFamily::Brodutch {
        rho_0: pure(1),
        rho_1: pure(2),
        rho_plus: pure(3),
        others: vec![random_density(2, RngSeed(4))],
    })?;
    for p1 in [1.0, 0.5, 0.0] {
        let member = FamilyMember {
            weights: vec![p1, 1.0 - p1],
            free_states: [(1, ComplexMatrix::identity(1))].into(),
        };
        let verdict = zero_discord_witness(&assemble_initial_state(&spec, &member)?, 3, 2)?;
        println!(
            "p1 = {p1}: {:?} (distance {:.2e})",
            verdict.classification, verdict.witness_distance
        );
    }

    let chi = haar_random_unitary(3, RngSeed(5));
    let weights = [0.5, 0.3, 0.2];
    let mut rho = ComplexMatrix::zeros(6, 6);
    for (a, p) in weights.iter().enumerate() {
        let term = tensor_product(
            &ComplexMatrix::projector(&chi.col(a)),
            &random_density(2, RngSeed(10 + a as u64)),
        );
        rho = &rho + &term.scale_real(*p);
    }
    let verdict = zero_discord_witness(&rho, 3, 2)?;
    println!(
        "classical-quantum state: {:?} in {}",
        verdict.classification, verdict.basis_used
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> cpmap::Result<()> {
    run_example()
}
