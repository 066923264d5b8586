//! States just outside a family: adding coherence between blocks, or drifting a fixed
//! block state, makes the family's Kraus set disagree with exact evolution.

use cpmap::golden::WorkedExample;
use cpmap::verify::{out_of_family_control, ControlConfig, Perturbation};
use cpmap::RngSeed;

pub fn run_example() -> cpmap::Result<()> {
    let cases = [
        (WorkedExample::AppendixA, Perturbation::CrossBlockCoherence),
        (WorkedExample::AppendixB, Perturbation::FixedBlockDrift),
        (WorkedExample::AppendixC, Perturbation::FixedBlockDrift),
    ];
    for (example, perturbation) in cases {
        for size in [0.0, 0.05, 0.2] {
            let cfg = ControlConfig::seeded(perturbation, size, RngSeed(8), 5, 10);
            let report = out_of_family_control(&example.spec(), &cfg)?;
            println!(
                "{example} {perturbation:?} size {size:<4}: max distance {:.2e}{}",
                report.max_trace_distance,
                if report.failure_detected {
                    "  <- Kraus description fails"
                } else {
                    ""
                }
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> cpmap::Result<()> {
    run_example()
}
