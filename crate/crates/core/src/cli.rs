//! The `cpmap` command line.
//!
//! Every command returns an exit status: 0 for success or a passed check, 1 for a failed
//! verification, 2 for invalid input. Output is JSON unless `--human` is given.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::golden::{compare_with_golden, GoldenComparison, WorkedExample};
use crate::kraus::{build_kraus, completeness_residual, prune_zero_operators, KrausSet, EIGENVALUE_CUTOFF};
use crate::linalg::{haar_random_unitary, ComplexMatrix, RngSeed};
use crate::statespace::{
    assemble_initial_state, make_historical_family, FamilyMember, FamilySpec, HistoricalKind, MatrixInput,
};
use crate::verify::{
    family_equivalence_test, generate_report, out_of_family_control, zero_discord_witness, ControlConfig,
    DiscordVerdict, EquivalenceConfig, Perturbation, VerificationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cpmap",
    version,
    about = "Kraus maps for families of correlated system-environment states"
)]
pub struct Cli {
    /// Print tables instead of JSON.
    #[arg(long, global = true)]
    pub human: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a scenario file.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Build the Kraus set of a scenario for one joint unitary.
    Kraus(KrausArgs),
    /// Compare Kraus predictions with exact joint evolution over sampled members and unitaries.
    Verify(VerifyArgs),
    /// Classify a joint state as zero or nonzero discord.
    Discord {
        /// JSON file `{"dimS", "dimE", "rhoSE"}`.
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in scenario end to end.
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Master seed; unitary `k` of a run is derived from it deterministically.
    #[arg(long, env = "CPMAP_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct KrausArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Joint unitary as a JSON matrix; without it the first Haar unitary of `--seed` is used
    /// (the same one `verify --seed` uses first).
    #[arg(long)]
    pub unitary: Option<PathBuf>,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Drop operators with Frobenius norm below this.
    #[arg(long, default_value_t = EIGENVALUE_CUTOFF)]
    pub prune: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub samples: u32,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub unitaries: u32,
    /// Run a negative control instead: crossBlockCoherence or fixedBlockDrift.
    #[arg(long)]
    pub perturb: Option<String>,
    /// Mixing weight of the perturbation.
    #[arg(long, default_value_t = 0.1, requires = "perturb")]
    pub perturb_size: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(value_parser = PossibleValuesParser::new(HistoricalKind::ALL.map(HistoricalKind::name)))]
    pub name: String,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub samples: u32,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub unitaries: u32,
    /// Where to write the full verification report.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Contents of a `discord --state` file.
#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StateFile {
    pub dim_s: usize,
    pub dim_e: usize,
    #[serde(rename = "rhoSE")]
    pub rho_se: MatrixInput,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Validate { scenario } => cmd_validate(scenario, cli.human, out),
        Command::Kraus(args) => cmd_kraus(args, cli.human, out),
        Command::Verify(args) => cmd_verify(args, cli.human, out),
        Command::Discord { state, out: path } => cmd_discord(state, path.as_deref(), cli.human, out),
        Command::Demo(args) => cmd_demo(args, cli.human, out),
    }
}

pub fn load_scenario(path: &Path) -> Result<FamilySpec> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    FamilySpec::from_json(&text).map_err(|e| e.with_context(path.display().to_string()))
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn cmd_validate(path: &Path, human: bool, out: &mut dyn Write) -> Result<i32> {
    let spec = load_scenario(path)?;
    let blocks: Vec<_> = spec
        .decomposition()
        .blocks()
        .iter()
        .zip(spec.block_specs())
        .enumerate()
        .map(|(alpha, (indices, bs))| json!({"block": alpha, "kind": bs.kind_name(), "indices": indices}))
        .collect();
    if human {
        writeln!(
            out,
            "valid: N = {}, M = {}, {} block(s)",
            spec.dim_s(),
            spec.dim_e(),
            spec.num_blocks()
        )?;
        for (alpha, (indices, bs)) in spec.decomposition().blocks().iter().zip(spec.block_specs()).enumerate() {
            writeln!(out, "  block {alpha}: {:<16} {indices:?}", bs.kind_name())?;
        }
    } else {
        print_json(
            out,
            &json!({"valid": true, "dimS": spec.dim_s(), "dimE": spec.dim_e(), "blocks": blocks}),
        )?;
    }
    Ok(EXIT_OK)
}

/// The first unitary a seeded `verify` run uses.
pub fn seeded_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    haar_random_unitary(dim, RngSeed(seed).derive(1).derive(0))
}

fn load_unitary(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::from(e).with_context(path.display().to_string()))
}

fn cmd_kraus(args: &KrausArgs, human: bool, out: &mut dyn Write) -> Result<i32> {
    let spec = load_scenario(&args.scenario)?;
    let dim = spec.decomposition().joint_dim();
    let u = match &args.unitary {
        Some(path) => load_unitary(path)?,
        None => seeded_unitary(dim, args.seed.seed),
    };
    let ks = prune_zero_operators(&build_kraus(&spec, &u)?, args.prune);
    let residual = completeness_residual(&ks);
    if let Some(path) = &args.out {
        write_file(path, &ks.to_json_pretty())?;
    }
    if human {
        print_kraus_table(out, &ks, residual)?;
    } else {
        let mut summary = json!({"operators": ks.len(), "completenessResidual": residual});
        if args.out.is_none() {
            summary["krausSet"] = serde_json::to_value(&ks)?;
        }
        print_json(out, &summary)?;
    }
    Ok(EXIT_OK)
}

fn print_kraus_table(out: &mut dyn Write, ks: &KrausSet, residual: f64) -> Result<()> {
    writeln!(
        out,
        "{} Kraus operator(s), completeness residual {residual:.3e}",
        ks.len()
    )?;
    for op in ks.operators() {
        writeln!(
            out,
            "  {:<12} ‖K‖_F = {:.6}",
            op.label.to_string(),
            op.matrix.frobenius_norm()
        )?;
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, human: bool, out: &mut dyn Write) -> Result<i32> {
    let spec = load_scenario(&args.scenario)?;
    let master = RngSeed(args.seed.seed);
    if let Some(kind) = &args.perturb {
        let perturbation: Perturbation = kind.parse()?;
        let cfg = ControlConfig::seeded(
            perturbation,
            args.perturb_size,
            master,
            args.samples as usize,
            args.unitaries as usize,
        );
        let report = out_of_family_control(&spec, &cfg)?;
        let text = serde_json::to_string_pretty(&report)?;
        if let Some(path) = &args.out {
            write_file(path, &text)?;
        }
        if human {
            writeln!(
                out,
                "{:?} (size {}): max trace distance {:.3e} over {} comparisons, failure {}",
                report.perturbation,
                report.size,
                report.max_trace_distance,
                report.comparisons,
                if report.failure_detected {
                    "exhibited"
                } else {
                    "not exhibited"
                }
            )?;
        } else {
            writeln!(out, "{text}")?;
        }
        return Ok(if report.failure_detected { EXIT_OK } else { EXIT_FAILED });
    }
    let id = args
        .scenario
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let report = family_equivalence_test(
        &spec,
        &EquivalenceConfig::seeded(id, master, args.samples as usize, args.unitaries as usize),
    )?;
    let text = generate_report(&report);
    if let Some(path) = &args.out {
        write_file(path, &text)?;
    }
    if human {
        print_report_summary(out, &report)?;
    } else if args.out.is_none() {
        writeln!(out, "{text}")?;
    } else {
        print_json(out, &report_summary(&report))?;
    }
    Ok(if report.verdict.passed() { EXIT_OK } else { EXIT_FAILED })
}

fn report_summary(report: &VerificationReport) -> serde_json::Value {
    json!({
        "scenarioId": report.scenario_id,
        "samples": report.samples,
        "unitaries": report.unitaries,
        "krausOperators": report.kraus_operators,
        "maxTraceDistance": report.max_trace_distance,
        "completenessResidual": report.completeness_residual,
        "verdict": report.verdict,
    })
}

fn print_report_summary(out: &mut dyn Write, r: &VerificationReport) -> Result<()> {
    writeln!(out, "scenario            {}", r.scenario_id)?;
    writeln!(out, "members x unitaries {} x {}", r.samples, r.unitaries)?;
    writeln!(out, "Kraus operators     {}", r.kraus_operators)?;
    writeln!(
        out,
        "max trace distance  {:.3e} (tolerance {:.0e})",
        r.max_trace_distance, r.tolerance
    )?;
    writeln!(
        out,
        "completeness        {:.3e} (tolerance {:.0e})",
        r.completeness_residual, r.completeness_tolerance
    )?;
    writeln!(out, "verdict             {:?}", r.verdict)?;
    Ok(())
}

fn cmd_discord(path: &Path, out_path: Option<&Path>, human: bool, out: &mut dyn Write) -> Result<i32> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let file: StateFile =
        serde_json::from_str(&text).map_err(|e| Error::from(e).with_context(path.display().to_string()))?;
    let rho = file.rho_se.into_matrix()?;
    let verdict = zero_discord_witness(&rho, file.dim_s, file.dim_e)?;
    let text = serde_json::to_string_pretty(&verdict)?;
    if let Some(p) = out_path {
        write_file(p, &text)?;
    }
    if human {
        print_discord(out, &verdict)?;
    } else {
        writeln!(out, "{text}")?;
    }
    Ok(EXIT_OK)
}

fn print_discord(out: &mut dyn Write, v: &DiscordVerdict) -> Result<()> {
    writeln!(
        out,
        "{:?}: dephasing distance {:.3e} in {}",
        v.classification, v.witness_distance, v.basis_used
    )?;
    Ok(())
}

fn cmd_demo(args: &DemoArgs, human: bool, out: &mut dyn Write) -> Result<i32> {
    let kind: HistoricalKind = args.name.parse()?;
    let spec = make_historical_family(&kind.default_family())?;
    let dim = spec.decomposition().joint_dim();
    let u = seeded_unitary(dim, args.seed.seed);
    let ks = prune_zero_operators(&build_kraus(&spec, &u)?, EIGENVALUE_CUTOFF);
    let residual = completeness_residual(&ks);
    let report = family_equivalence_test(
        &spec,
        &EquivalenceConfig::seeded(
            kind.name(),
            RngSeed(args.seed.seed),
            args.samples as usize,
            args.unitaries as usize,
        ),
    )?;
    if let Some(path) = &args.out {
        write_file(path, &generate_report(&report))?;
    }
    let golden: Option<GoldenComparison> = match kind {
        HistoricalKind::AppendixA => Some(compare_with_golden(WorkedExample::AppendixA, &u)?),
        HistoricalKind::AppendixB => Some(compare_with_golden(WorkedExample::AppendixB, &u)?),
        HistoricalKind::AppendixC => Some(compare_with_golden(WorkedExample::AppendixC, &u)?),
        _ => None,
    };
    let discord = match kind {
        HistoricalKind::Brodutch => Some(brodutch_discord_pair(&spec)?),
        _ => None,
    };
    let passed = report.verdict.passed() && golden.as_ref().is_none_or(GoldenComparison::passed);

    if human {
        writeln!(
            out,
            "demo {kind}: N = {}, M = {}, {} block(s)",
            spec.dim_s(),
            spec.dim_e(),
            spec.num_blocks()
        )?;
        print_kraus_table(out, &ks, residual)?;
        print_report_summary(out, &report)?;
        if let Some(g) = &golden {
            writeln!(
                out,
                "worked-example formulas: {} of {} operators matched, max residual {:.3e}",
                g.residuals.len(),
                g.expected_operators,
                g.max_residual
            )?;
        }
        if let Some((with, without)) = &discord {
            write!(out, "member with all weight on the correlated block: ")?;
            print_discord(out, with)?;
            write!(out, "member with no weight on it:                    ")?;
            print_discord(out, without)?;
        }
    } else {
        let mut doc = json!({
            "demo": kind.name(),
            "seed": args.seed.seed,
            "krausOperators": ks.len(),
            "completenessResidual": residual,
            "labels": ks.labels().map(ToString::to_string).collect::<Vec<_>>(),
            "verification": report_summary(&report),
            "passed": passed,
        });
        if let Some(g) = &golden {
            doc["golden"] = json!({
                "expectedOperators": g.expected_operators,
                "computedOperators": g.computed_operators,
                "maxResidual": g.max_residual,
                "unmatched": g.unmatched,
                "passed": g.passed(),
            });
        }
        if let Some((with, without)) = &discord {
            doc["discord"] = json!({
                "correlatedBlockOnly": {"classification": with.classification, "witnessDistance": with.witness_distance},
                "correlatedBlockEmpty": {"classification": without.classification, "witnessDistance": without.witness_distance},
            });
        }
        print_json(out, &doc)?;
    }
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

/// Discord verdicts for the members with all weight on the correlated block (block 0) and
/// with that weight spread evenly over the remaining blocks.
fn brodutch_discord_pair(spec: &FamilySpec) -> Result<(DiscordVerdict, DiscordVerdict)> {
    let nb = spec.num_blocks();
    let free_states: BTreeMap<usize, ComplexMatrix> = spec
        .free_blocks()
        .map(|a| {
            let d = spec.decomposition().block_dim(a)?;
            Ok((a, ComplexMatrix::identity(d).scale_real(1.0 / d as f64)))
        })
        .collect::<Result<_>>()?;
    let verdict = |weights: Vec<f64>| -> Result<DiscordVerdict> {
        let member = FamilyMember {
            weights,
            free_states: free_states.clone(),
        };
        zero_discord_witness(&assemble_initial_state(spec, &member)?, spec.dim_s(), spec.dim_e())
    };
    let mut concentrated = vec![0.0; nb];
    concentrated[0] = 1.0;
    let mut spread = vec![1.0 / (nb - 1) as f64; nb];
    spread[0] = 0.0;
    Ok((verdict(concentrated)?, verdict(spread)?))
}
