mod common;

use std::process::Command;

use common::scenario_path;
use cpmap::cli::{run, EXIT_FAILED, EXIT_INPUT, EXIT_OK};
use serde_json::Value;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cpmap(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("cpmap").chain(args.iter().copied()), &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn scenario(name: &str) -> String {
    scenario_path(&format!("{name}.json")).display().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", o.stdout))
}

#[test]
fn validate_accepts_bundled_scenarios() {
    for name in [
        "appendix-a",
        "appendix-b",
        "appendix-c",
        "brodutch",
        "product",
        "zero-discord",
    ] {
        let o = cpmap(&["validate", "--scenario", &scenario(name)]);
        assert_eq!(o.code, EXIT_OK, "{name}: {}", o.stderr);
        assert_eq!(json(&o)["valid"], true);
    }
}

#[test]
fn validate_names_the_problem() {
    let o = cpmap(&["validate", "--scenario", &scenario("invalid-overlap")]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("index 1 is repeated"), "{}", o.stderr);

    let o = cpmap(&["validate", "--scenario", &scenario("invalid-trace")]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("block 1") && o.stderr.contains("0.9"), "{}", o.stderr);
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"dimS\": 2,\n  \"dimE\": 2,\n  \"blocks\": [[0, 1]\n}").unwrap();
    let o = cpmap(&["validate", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("line 5"), "{}", o.stderr);

    let o = cpmap(&["validate", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(o.code, EXIT_INPUT);
}

#[test]
fn kraus_operator_counts() {
    for (name, count) in [("appendix-a", 4), ("appendix-b", 8), ("appendix-c", 14)] {
        let o = cpmap(&["kraus", "--scenario", &scenario(name), "--seed", "5"]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        let v = json(&o);
        assert_eq!(v["operators"], count, "{name}");
        assert_eq!(v["krausSet"]["operators"].as_array().unwrap().len(), count);
        assert!(v["completenessResidual"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn kraus_with_unitary_file() {
    let dir = tempfile::tempdir().unwrap();
    let identity = dir.path().join("identity.json");
    std::fs::write(
        &identity,
        serde_json::to_string(&cpmap::ComplexMatrix::identity(8)).unwrap(),
    )
    .unwrap();
    let out = dir.path().join("kraus.json");
    let o = cpmap(&[
        "kraus",
        "--scenario",
        &scenario("appendix-a"),
        "--unitary",
        identity.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = json(&o);
    // ⟨1|I|0⟩ vanishes, leaving the two block projectors
    assert_eq!(v["operators"], 2);
    assert!(v["completenessResidual"].as_f64().unwrap() < 1e-12);
    let set: cpmap::KrausSet = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(set.len(), 2);

    let scaled = dir.path().join("scaled.json");
    let m = cpmap::ComplexMatrix::identity(8).scale_real(1.1);
    std::fs::write(&scaled, serde_json::to_string(&m).unwrap()).unwrap();
    let o = cpmap(&[
        "kraus",
        "--scenario",
        &scenario("appendix-a"),
        "--unitary",
        scaled.to_str().unwrap(),
    ]);
    assert_eq!(o.code, EXIT_INPUT);
    assert!(o.stderr.contains("not unitary"), "{}", o.stderr);

    let wrong = dir.path().join("wrong.json");
    std::fs::write(
        &wrong,
        serde_json::to_string(&cpmap::ComplexMatrix::identity(4)).unwrap(),
    )
    .unwrap();
    let o = cpmap(&[
        "kraus",
        "--scenario",
        &scenario("appendix-a"),
        "--unitary",
        wrong.to_str().unwrap(),
    ]);
    assert_eq!(o.code, EXIT_INPUT);
}

#[test]
fn verify_passes_on_bundled_scenarios() {
    for name in [
        "appendix-a",
        "appendix-b",
        "appendix-c",
        "brodutch",
        "product",
        "zero-discord",
    ] {
        let o = cpmap(&[
            "verify",
            "--scenario",
            &scenario(name),
            "--samples",
            "10",
            "--unitaries",
            "3",
        ]);
        assert_eq!(o.code, EXIT_OK, "{name}: {}", o.stderr);
        let v = json(&o);
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["perSampleRecords"].as_array().unwrap().len(), 30);
    }
}

#[test]
fn verify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.json"), dir.path().join("b.json")];
    for p in &paths {
        let o = cpmap(&[
            "verify",
            "--scenario",
            &scenario("appendix-c"),
            "--seed",
            "17",
            "--samples",
            "8",
            "--unitaries",
            "4",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.code, EXIT_OK);
        assert_eq!(json(&o)["verdict"], "pass");
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let report = cpmap::verify::parse_report(std::str::from_utf8(&a).unwrap()).unwrap();
    assert_eq!(cpmap::verify::generate_report(&report).as_bytes(), &a[..]);
}

#[test]
fn verify_rejects_empty_runs() {
    for flag in ["--samples", "--unitaries"] {
        let o = cpmap(&["verify", "--scenario", &scenario("appendix-a"), flag, "0"]);
        assert_eq!(o.code, EXIT_INPUT);
    }
}

#[test]
fn perturbation_controls() {
    let o = cpmap(&[
        "verify",
        "--scenario",
        &scenario("appendix-a"),
        "--perturb",
        "crossBlockCoherence",
        "--samples",
        "5",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(json(&o)["failureDetected"], true);

    let o = cpmap(&[
        "verify",
        "--scenario",
        &scenario("appendix-a"),
        "--perturb",
        "crossBlockCoherence",
        "--perturb-size",
        "0",
        "--samples",
        "5",
    ]);
    assert_eq!(o.code, EXIT_FAILED);
    assert!(json(&o)["maxTraceDistance"].as_f64().unwrap() < 1e-9);

    let o = cpmap(&[
        "verify",
        "--scenario",
        &scenario("appendix-b"),
        "--perturb",
        "fixedBlockDrift",
        "--samples",
        "5",
    ]);
    assert_eq!(o.code, EXIT_OK);

    let o = cpmap(&[
        "verify",
        "--scenario",
        &scenario("appendix-a"),
        "--perturb",
        "fixedBlockDrift",
    ]);
    assert_eq!(o.code, EXIT_INPUT);
    let o = cpmap(&["verify", "--scenario", &scenario("appendix-a"), "--perturb", "sideways"]);
    assert_eq!(o.code, EXIT_INPUT);
}

#[test]
fn discord_state_files() {
    let classify = |name: &str| {
        let o = cpmap(&["discord", "--state", &scenario(name)]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        json(&o)["classification"].as_str().unwrap().to_string()
    };
    assert_eq!(classify("state-brodutch"), "nonzeroDiscord");
    assert_eq!(classify("state-product"), "zeroDiscord");
    assert!(["zeroDiscord", "inconclusive"].contains(&classify("state-maximally-mixed").as_str()));

    let o = cpmap(&["discord", "--state", &scenario("appendix-a")]);
    assert_eq!(o.code, EXIT_INPUT);
}

#[test]
fn demos() {
    for (name, count) in [("appendix-a", 4), ("appendix-b", 8), ("appendix-c", 14)] {
        let o = cpmap(&["demo", name, "--samples", "10", "--unitaries", "3"]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
        let v = json(&o);
        assert_eq!(v["krausOperators"], count);
        assert_eq!(v["golden"]["expectedOperators"], count);
        assert!(v["golden"]["maxResidual"].as_f64().unwrap() < 1e-12);
        assert_eq!(v["passed"], true);
    }
    let o = cpmap(&["demo", "product", "--samples", "10", "--unitaries", "3"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(json(&o)["verification"]["verdict"], "pass");

    let o = cpmap(&["demo", "brodutch", "--samples", "5", "--unitaries", "2"]);
    let v = json(&o);
    assert_eq!(v["discord"]["correlatedBlockOnly"]["classification"], "nonzeroDiscord");
    assert_eq!(v["discord"]["correlatedBlockEmpty"]["classification"], "zeroDiscord");

    assert_eq!(cpmap(&["demo", "appendix-z"]).code, EXIT_INPUT);
}

#[test]
fn human_output_and_help() {
    let o = cpmap(&["--human", "demo", "appendix-c", "--samples", "4", "--unitaries", "2"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("14 of 14 operators matched"), "{}", o.stdout);
    let o = cpmap(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    for cmd in ["validate", "kraus", "verify", "discord", "demo"] {
        assert!(o.stdout.contains(cmd));
    }
    assert_eq!(cpmap(&[]).code, EXIT_INPUT);
}

#[test]
fn binary_reads_seed_from_environment() {
    let bin = env!("CARGO_BIN_EXE_cpmap");
    let run_bin = |args: &[&str], seed_env: Option<&str>| {
        let mut cmd = Command::new(bin);
        cmd.args(args).env_remove("CPMAP_SEED");
        if let Some(s) = seed_env {
            cmd.env("CPMAP_SEED", s);
        }
        let out = cmd.output().unwrap();
        (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
    };
    let base = ["kraus", "--scenario", &scenario("appendix-a")];
    let (code, from_env) = run_bin(&base, Some("42"));
    assert_eq!(code, 0);
    let (_, from_flag) = run_bin(&[&base[..], &["--seed", "42"]].concat(), None);
    let (_, default) = run_bin(&base, None);
    assert_eq!(from_env, from_flag);
    assert_ne!(from_env, default);

    let (code, _) = run_bin(&["validate", "--scenario", &scenario("invalid-trace")], None);
    assert_eq!(code, 2);
}
