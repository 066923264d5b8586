//! The 4×2 product-per-block family: environments `|0⟩` on levels {0,1} and `|1⟩` on
//! levels {2,3}. One Kraus set serves every weight and every pair of block states.

use cpmap::golden::{compare_with_golden, WorkedExample};
use cpmap::kraus::{apply_kraus, build_kraus, completeness_residual, prune_zero_operators};
use cpmap::linalg::{haar_random_unitary, random_density, trace_distance};
use cpmap::statespace::{assemble_initial_state, reduced_member_state, FamilyMember};
use cpmap::verify::exact_reduced_dynamics;
use cpmap::RngSeed;

pub fn run_example() -> cpmap::Result<()> {
    let spec = WorkedExample::AppendixA.spec();
    let u = haar_random_unitary(8, RngSeed(2024));
    let ks = prune_zero_operators(&build_kraus(&spec, &u)?, 1e-12);
    println!(
        "{} operators: {:?}",
        ks.len(),
        ks.labels().map(ToString::to_string).collect::<Vec<_>>()
    );
    println!("completeness residual {:.2e}", completeness_residual(&ks));

    let golden = compare_with_golden(WorkedExample::AppendixA, &u)?;
    println!("formula check: max residual {:.2e}", golden.max_residual);

    for (k, p) in [0.0, 0.3, 1.0].into_iter().enumerate() {
        let member = FamilyMember {
            weights: vec![1.0 - p, p],
            free_states: [
                (0, random_density(2, RngSeed(k as u64))),
                (1, random_density(2, RngSeed(10 + k as u64))),
            ]
            .into(),
        };
        let predicted = apply_kraus(&ks, &reduced_member_state(&spec, &member)?)?;
        let exact = exact_reduced_dynamics(&u, &assemble_initial_state(&spec, &member)?, 4, 2)?;
        println!(
            "p = {p}: trace distance to exact evolution {:.2e}",
            trace_distance(&predicted, &exact)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> cpmap::Result<()> {
    run_example()
}
