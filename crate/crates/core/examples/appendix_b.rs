//! Two fixed Bell-like blocks: every member is entangled, yet one Kraus set describes the
//! whole family `p|Ψ₁⟩⟨Ψ₁| + (1−p)|Ψ₂⟩⟨Ψ₂|`.

use cpmap::golden::{compare_with_golden, WorkedExample};
use cpmap::kraus::{apply_kraus, build_kraus};
use cpmap::linalg::{haar_random_unitary, trace_distance};
use cpmap::statespace::{assemble_initial_state, reduced_member_state, FamilyMember};
use cpmap::verify::exact_reduced_dynamics;
use cpmap::RngSeed;

pub fn run_example() -> cpmap::Result<()> {
    let spec = WorkedExample::AppendixB.spec();
    let u = haar_random_unitary(8, RngSeed(7));
    let ks = build_kraus(&spec, &u)?;
    let golden = compare_with_golden(WorkedExample::AppendixB, &u)?;
    println!("{} operators, formula residual {:.2e}", ks.len(), golden.max_residual);

    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let member = FamilyMember {
            weights: vec![p, 1.0 - p],
            free_states: Default::default(),
        };
        let predicted = apply_kraus(&ks, &reduced_member_state(&spec, &member)?)?;
        let exact = exact_reduced_dynamics(&u, &assemble_initial_state(&spec, &member)?, 4, 2)?;
        println!("p = {p:<4}: {:.2e}", trace_distance(&predicted, &exact)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> cpmap::Result<()> {
    run_example()
}
