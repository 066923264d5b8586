//! Families defined in JSON: a qutrit system with a fixed correlated pair of levels and a
//! free third level, round-tripped through the scenario format.

use cpmap::kraus::{apply_kraus, build_kraus, completeness_residual};
use cpmap::linalg::haar_random_unitary;
use cpmap::statespace::{reduced_member_state, sample_family_member};
use cpmap::{FamilySpec, KrausSet, RngSeed};

const SCENARIO: &str = r#"{
  "dimS": 3,
  "dimE": 2,
  "blocks": [[0, 2], [1]],
  "blockSpecs": [
    {"type": "fixedCorrelated", "rhoSE": {"pure": [[0.6, 0], [0, 0], [0, 0], [0, 0.8]]}},
    {"type": "freeProduct", "rhoE": [[[0.5, 0], [0, 0.5]], [[0, -0.5], [0.5, 0]]]}
  ]
}"#;

pub fn run_example() -> cpmap::Result<()> {
    let spec = FamilySpec::from_json(SCENARIO)?;
    println!("blocks {:?}, {} fixed", spec.decomposition().blocks(), spec.num_fixed());

    let u = haar_random_unitary(6, RngSeed(12));
    let ks = build_kraus(&spec, &u)?;
    let text = ks.to_json_pretty();
    let back: KrausSet = serde_json::from_str(&text)?;
    println!(
        "{} operators, completeness {:.2e}, JSON round trip {}",
        ks.len(),
        completeness_residual(&ks),
        back == ks
    );

    let member = sample_family_member(&spec, RngSeed(5));
    let out = apply_kraus(&ks, &reduced_member_state(&spec, &member)?)?;
    println!("output trace {:.12}", out.trace().re);

    let bad = SCENARIO.replace("[[0, 2], [1]]", "[[0, 2], [2]]");
    println!("overlapping blocks: {}", FamilySpec::from_json(&bad).unwrap_err());
    Ok(())
}

#[allow(dead_code)]
fn main() -> cpmap::Result<()> {
    run_example()
}
