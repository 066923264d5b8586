#![allow(dead_code)]

use cpmap::linalg::{ginibre, random_density};
use cpmap::statespace::{BlockSpec, DirectSumDecomposition, FamilySpec};
use cpmap::{ComplexMatrix, RngSeed};
use rand::seq::SliceRandom;
use rand::Rng;

/// `G·G†/Tr` with `G` of shape `dim × rank`.
pub fn random_density_of_rank(dim: usize, rank: usize, seed: RngSeed) -> ComplexMatrix {
    let g = ginibre(dim, rank, seed);
    let w = (&g * &g.adjoint()).hermitian_part();
    let tr = w.trace().re;
    w.scale_real(1.0 / tr)
}

/// Random family: `N ≤ max_n`, `M ≤ max_m`, a shuffled partition into random block sizes,
/// each block fixed or free with random (possibly deficient) rank.
pub fn random_spec(seed: RngSeed, max_n: usize, max_m: usize) -> FamilySpec {
    let mut rng = seed.rng();
    let n = rng.random_range(1..=max_n);
    let m = rng.random_range(1..=max_m);
    let mut levels: Vec<usize> = (0..n).collect();
    levels.shuffle(&mut rng);
    let mut blocks = Vec::new();
    let mut rest = &levels[..];
    while !rest.is_empty() {
        let size = rng.random_range(1..=rest.len());
        blocks.push(rest[..size].to_vec());
        rest = &rest[size..];
    }
    let specs = blocks
        .iter()
        .enumerate()
        .map(|(k, block)| {
            let sub = seed.derive(100 + k as u64);
            if rng.random_bool(0.4) {
                let dim = block.len() * m;
                BlockSpec::FixedCorrelated {
                    rho_se: random_density_of_rank(dim, rng.random_range(1..=dim), sub),
                }
            } else if rng.random_bool(0.5) {
                BlockSpec::FreeProduct {
                    rho_e: random_density(m, sub),
                }
            } else {
                BlockSpec::FreeProduct {
                    rho_e: random_density_of_rank(m, rng.random_range(1..=m), sub),
                }
            }
        })
        .collect();
    let dec = DirectSumDecomposition::new(n, m, blocks).expect("partition is valid");
    FamilySpec::new(dec, specs).expect("random family is valid")
}

pub fn scenario_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
}

/// Bundled scenario files that describe families (state files and invalid inputs excluded).
pub fn bundled_scenarios() -> Vec<(String, FamilySpec)> {
    let mut out: Vec<(String, FamilySpec)> = std::fs::read_dir(scenario_path(""))
        .expect("scenarios directory")
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|name| name.ends_with(".json") && !name.starts_with("state-") && !name.starts_with("invalid-"))
        .map(|name| {
            let text = std::fs::read_to_string(scenario_path(&name)).unwrap();
            let spec = FamilySpec::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, spec)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}
