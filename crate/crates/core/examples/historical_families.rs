//! The classic families as special cases: a single block gives the product-state channel,
//! one-dimensional blocks give the zero-discord family, and the correlated two-level block
//! with discord is handled as one fixed block.

use cpmap::statespace::{make_historical_family, HistoricalKind};
use cpmap::verify::{family_equivalence_test, EquivalenceConfig};
use cpmap::RngSeed;

pub fn run_example() -> cpmap::Result<()> {
    for kind in [
        HistoricalKind::Product,
        HistoricalKind::ZeroDiscord,
        HistoricalKind::Brodutch,
    ] {
        let spec = make_historical_family(&kind.default_family())?;
        let report = family_equivalence_test(&spec, &EquivalenceConfig::seeded(kind.name(), RngSeed(3), 20, 4))?;
        println!(
            "{:<13} N={} M={} blocks={} fixed={}  {:?} ({:.1e})",
            kind.name(),
            spec.dim_s(),
            spec.dim_e(),
            spec.num_blocks(),
            spec.num_fixed(),
            report.verdict,
            report.max_trace_distance
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> cpmap::Result<()> {
    run_example()
}
