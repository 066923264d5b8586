//! The 6×2 mixed family: a separable block with discord, an entangled block and a free
//! product block. The spectrum of the first block supplies the √3/2 and 1/2 prefactors.

use cpmap::golden::{compare_with_golden, WorkedExample};
use cpmap::kraus::block_spectra;
use cpmap::linalg::haar_random_unitary;
use cpmap::verify::{family_equivalence_test, EquivalenceConfig};
use cpmap::RngSeed;

pub fn run_example() -> cpmap::Result<()> {
    let spec = WorkedExample::AppendixC.spec();
    for s in block_spectra(&spec)? {
        let roots: Vec<String> = s.eigenvalues.iter().map(|l| format!("{:.6}", l.sqrt())).collect();
        println!("block {}: sqrt(eigenvalues) = [{}]", s.block, roots.join(", "));
    }

    let u = haar_random_unitary(12, RngSeed(99));
    let golden = compare_with_golden(WorkedExample::AppendixC, &u)?;
    println!(
        "{} operators, formula residual {:.2e}",
        golden.computed_operators, golden.max_residual
    );

    let report = family_equivalence_test(&spec, &EquivalenceConfig::seeded("appendix-c", RngSeed(1), 25, 5))?;
    println!(
        "{:?}: max trace distance {:.2e}",
        report.verdict, report.max_trace_distance
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> cpmap::Result<()> {
    run_example()
}
