//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and exits
//! nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use cpmap::golden::{compare_with_golden, WorkedExample};
use cpmap::kraus::{
    apply_kraus, block_spectra, build_kraus, build_kraus_with_spectra, build_product_family_kraus,
    completeness_residual,
};
use cpmap::linalg::{
    frobenius_distance, haar_random_unitary, random_density, random_pure_state, tensor_product, trace_distance,
};
use cpmap::statespace::{
    assemble_initial_state, make_historical_family, reduced_member_state, BlockSpec, DirectSumDecomposition,
    FamilyMember, HistoricalFamily, HistoricalKind,
};
use cpmap::verify::{
    exact_reduced_dynamics, family_equivalence_test, out_of_family_control, zero_discord_witness, ControlConfig,
    DiscordClass, EquivalenceConfig, Perturbation, Verdict, EPS_DEG, EPS_VERIFY,
};
use cpmap::{ComplexMatrix, FamilySpec, RngSeed};
use rand::Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn lib<T>(r: cpmap::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn equivalence(
    spec: &FamilySpec,
    id: &str,
    seed: u64,
    members: Vec<FamilyMember>,
) -> Result<(f64, f64, Verdict), String> {
    let mut cfg = EquivalenceConfig::seeded(id, RngSeed(seed), 100, 20);
    cfg.extra_members = members;
    let r = lib(family_equivalence_test(spec, &cfg))?;
    if r.per_sample_records.len() != r.samples * 20 {
        return Err(format!(
            "{id}: expected {} records, got {}",
            r.samples * 20,
            r.per_sample_records.len()
        ));
    }
    Ok((r.max_trace_distance, r.completeness_residual, r.verdict))
}

fn c1_product_blocks() -> Outcome {
    let start = Instant::now();
    let spec = WorkedExample::AppendixA.spec();
    let (td, comp, verdict) = equivalence(&spec, "appendix-a", 1, Vec::new())?;
    let elapsed = start.elapsed();
    check(
        verdict == Verdict::Pass && td < EPS_VERIFY && elapsed < Duration::from_secs(10),
        format!("4×2 free-block family, 100×20: max trace distance {td:.2e}, completeness {comp:.2e}, {elapsed:.2?} (< 10 s)"),
    )
}

fn c2_correlated_blocks() -> Outcome {
    let start = Instant::now();
    let b = WorkedExample::AppendixB.spec();
    let sweep = [0.0, 0.25, 0.5, 0.75, 1.0]
        .map(|p| FamilyMember {
            weights: vec![p, 1.0 - p],
            free_states: Default::default(),
        })
        .to_vec();
    let (td_b, _, vb) = equivalence(&b, "appendix-b", 2, sweep)?;
    let (td_c, _, vc) = equivalence(&WorkedExample::AppendixC.spec(), "appendix-c", 3, Vec::new())?;
    let elapsed = start.elapsed();
    check(
        vb == Verdict::Pass && vc == Verdict::Pass && elapsed < Duration::from_secs(30),
        format!("entangled 4×2 (plus p sweep) {td_b:.2e}, mixed 6×2 {td_c:.2e}, {elapsed:.2?} (< 30 s)"),
    )
}

fn c3_completeness() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut sets = 0;
    let mut specs: Vec<FamilySpec> = common::bundled_scenarios().into_iter().map(|(_, s)| s).collect();
    if specs.len() < 6 {
        return Err(format!("only {} bundled scenarios found", specs.len()));
    }
    specs.extend(
        HistoricalKind::ALL
            .iter()
            .map(|k| make_historical_family(&k.default_family()).unwrap()),
    );
    specs.extend((0..50).map(|k| common::random_spec(RngSeed(7000 + k), 6, 3)));
    for (k, spec) in specs.iter().enumerate() {
        let nm = spec.decomposition().joint_dim();
        for u in [
            ComplexMatrix::identity(nm),
            haar_random_unitary(nm, RngSeed(k as u64)),
            haar_random_unitary(nm, RngSeed(999 + k as u64)),
        ] {
            worst = worst.max(completeness_residual(&lib(build_kraus(spec, &u))?));
            sets += 1;
        }
    }
    check(
        worst < 1e-10,
        format!(
            "{sets} Kraus sets over {} families (50 random): max ‖ΣK†K − I‖_F {worst:.2e}",
            specs.len()
        ),
    )
}

fn c4_golden() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (example, count) in WorkedExample::ALL.into_iter().zip([4, 8, 14]) {
        let dim = example.spec().decomposition().joint_dim();
        let cmp = lib(compare_with_golden(example, &haar_random_unitary(dim, RngSeed(20240))))?;
        ok &= cmp.passed() && cmp.expected_operators == count && cmp.computed_operators == count;
        parts.push(format!(
            "{example}: {}/{count} ops, max residual {:.1e}",
            cmp.residuals.len(),
            cmp.max_residual
        ));
    }
    // the two prefactors of the discordant block
    let s = &lib(block_spectra(&WorkedExample::AppendixC.spec()))?[0];
    let roots: Vec<f64> = s.eigenvalues.iter().map(|l| l.sqrt()).collect();
    ok &= roots.len() == 2 && (roots[0] - 3f64.sqrt() / 2.0).abs() < 1e-12 && (roots[1] - 0.5).abs() < 1e-12;
    parts.push(format!(
        "prefactors {:.12} / {:.12}",
        roots[0],
        roots.get(1).copied().unwrap_or(f64::NAN)
    ));
    check(ok, parts.join("; "))
}

fn c5_special_cases() -> Outcome {
    let mut worst: f64 = 0.0;
    // one block spanning the system: ρ^S ⊗ ρ^E
    let rho_e = random_density(3, RngSeed(51));
    let product = lib(make_historical_family(&HistoricalFamily::Product {
        dim_s: 3,
        rho_e: rho_e.clone(),
    }))?;
    // one one-dimensional block per level: Σ p_α |α⟩⟨α| ⊗ ρ_α
    let env_states: Vec<ComplexMatrix> = (0..3).map(|a| random_density(2, RngSeed(60 + a))).collect();
    let classical = lib(make_historical_family(&HistoricalFamily::ZeroDiscord {
        env_states: env_states.clone(),
    }))?;

    for k in 0..10u64 {
        let u = haar_random_unitary(9, RngSeed(500 + k));
        let ks = lib(build_kraus(&product, &u))?;
        let alt = lib(build_product_family_kraus(
            product.decomposition(),
            std::slice::from_ref(&rho_e),
            &u,
        ))?;
        for j in 0..5u64 {
            let rho_s = random_density(3, RngSeed(1000 * k + j));
            let exact = lib(exact_reduced_dynamics(&u, &tensor_product(&rho_s, &rho_e), 3, 3))?;
            worst = worst.max(lib(trace_distance(&lib(apply_kraus(&ks, &rho_s))?, &exact))?);
            worst = worst.max(lib(trace_distance(&lib(apply_kraus(&alt, &rho_s))?, &exact))?);
        }

        let u = haar_random_unitary(6, RngSeed(600 + k));
        let ks = lib(build_kraus(&classical, &u))?;
        let alt = lib(build_product_family_kraus(classical.decomposition(), &env_states, &u))?;
        for j in 0..5u64 {
            let member = cpmap::statespace::sample_family_member(&classical, RngSeed(2000 * k + j));
            let mut joint = ComplexMatrix::zeros(6, 6);
            for (a, p) in member.weights.iter().enumerate() {
                let level = ComplexMatrix::projector(&ComplexMatrix::basis_vector(3, a));
                joint = &joint + &tensor_product(&level, &env_states[a]).scale_real(*p);
            }
            let exact = lib(exact_reduced_dynamics(&u, &joint, 3, 2))?;
            let marginal = lib(reduced_member_state(&classical, &member))?;
            worst = worst.max(lib(trace_distance(&lib(apply_kraus(&ks, &marginal))?, &exact))?);
            worst = worst.max(lib(trace_distance(&lib(apply_kraus(&alt, &marginal))?, &exact))?);
        }
    }
    check(
        worst < 1e-10,
        format!("single-block and one-dimensional-block families, both construction routes: max {worst:.2e}"),
    )
}

fn c6_negative_control() -> Outcome {
    let spec = WorkedExample::AppendixA.spec();
    let on = lib(out_of_family_control(
        &spec,
        &ControlConfig::seeded(Perturbation::CrossBlockCoherence, 0.1, RngSeed(6), 5, 20),
    ))?;
    let off = lib(out_of_family_control(
        &spec,
        &ControlConfig::seeded(Perturbation::CrossBlockCoherence, 0.0, RngSeed(6), 5, 20),
    ))?;
    check(
        on.failure_detected && on.max_trace_distance > 1e-3 && off.max_trace_distance < 1e-9,
        format!(
            "cross-block coherence over 20 unitaries: size 0.1 → {:.2e} (> 1e-3), size 0 → {:.2e} (< 1e-9)",
            on.max_trace_distance, off.max_trace_distance
        ),
    )
}

fn marginal_is_degenerate(rho: &ComplexMatrix, n: usize, m: usize) -> bool {
    let rho_s = cpmap::linalg::partial_trace_env(rho, n, m).unwrap();
    let eig = cpmap::linalg::hermitian_eig(&rho_s).unwrap();
    eig.eigenvalues.windows(2).any(|w| w[0] - w[1] <= EPS_DEG)
}

fn c7_discord() -> Outcome {
    let mut errors = Vec::new();
    let mut inconclusive = 0;
    let pure = |seed: RngSeed| ComplexMatrix::projector(&random_pure_state(2, seed));
    let mut classify = |rho: &ComplexMatrix, n: usize, m: usize, want: DiscordClass, what: String| {
        let v = zero_discord_witness(rho, n, m).unwrap();
        if v.classification == want {
            return;
        }
        if v.classification == DiscordClass::Inconclusive && marginal_is_degenerate(rho, n, m) {
            inconclusive += 1;
        } else {
            errors.push(format!(
                "{what}: {:?} (distance {:.2e})",
                v.classification, v.witness_distance
            ));
        }
    };

    for k in 0..50u64 {
        let seed = RngSeed(70_000 + k);
        let mut rng = seed.rng();
        let extra = rng.random_range(0..=2usize);
        let spec = make_historical_family(&HistoricalFamily::Brodutch {
            rho_0: pure(seed.derive(0)),
            rho_1: pure(seed.derive(1)),
            rho_plus: pure(seed.derive(2)),
            others: (0..extra)
                .map(|i| random_density(2, seed.derive(10 + i as u64)))
                .collect(),
        })
        .unwrap();
        let n = spec.dim_s();
        let free_states = (1..=extra).map(|a| (a, ComplexMatrix::identity(1))).collect();
        // p₁ > 0
        let p1: f64 = if extra == 0 { 1.0 } else { rng.random_range(0.05..=1.0) };
        let mut weights = vec![p1];
        weights.extend((0..extra).map(|_| (1.0 - p1) / extra as f64));
        let member = FamilyMember { weights, free_states };
        classify(
            &assemble_initial_state(&spec, &member).unwrap(),
            n,
            2,
            DiscordClass::NonzeroDiscord,
            format!("p1={p1:.3} #{k}"),
        );

        // p₁ = 0 needs at least one further level
        let spec0 = make_historical_family(&HistoricalFamily::Brodutch {
            rho_0: pure(seed.derive(0)),
            rho_1: pure(seed.derive(1)),
            rho_plus: pure(seed.derive(2)),
            others: (0..extra.max(1))
                .map(|i| random_density(2, seed.derive(10 + i as u64)))
                .collect(),
        })
        .unwrap();
        let rest = extra.max(1);
        let mut weights = vec![0.0];
        let draws: Vec<f64> = (0..rest).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = draws.iter().sum();
        weights.extend(draws.iter().map(|d| d / total));
        let member = FamilyMember {
            weights,
            free_states: (1..=rest).map(|a| (a, ComplexMatrix::identity(1))).collect(),
        };
        classify(
            &assemble_initial_state(&spec0, &member).unwrap(),
            spec0.dim_s(),
            2,
            DiscordClass::ZeroDiscord,
            format!("p1=0 #{k}"),
        );

        // Σ p_α |χ_α⟩⟨χ_α| ⊗ ρ_α with a nondegenerate weight vector
        let n = rng.random_range(2..=4usize);
        let m = rng.random_range(2..=3usize);
        let chi = haar_random_unitary(n, seed.derive(3));
        let weights = loop {
            let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = w.iter().sum();
            let mut w: Vec<f64> = w.iter().map(|x| x / total).collect();
            w.sort_by(|a, b| b.partial_cmp(a).unwrap());
            if w.windows(2).all(|p| p[0] - p[1] >= 1e-3) {
                break w;
            }
        };
        let mut rho = ComplexMatrix::zeros(n * m, n * m);
        for (a, p) in weights.iter().enumerate() {
            let term = tensor_product(
                &ComplexMatrix::projector(&chi.col(a)),
                &random_density(m, seed.derive(20 + a as u64)),
            );
            rho = &rho + &term.scale_real(*p);
        }
        classify(&rho, n, m, DiscordClass::ZeroDiscord, format!("classical-quantum #{k}"));
    }
    check(
        errors.is_empty(),
        format!(
            "150 instances (50 p1>0, 50 p1=0, 50 classical-quantum): {} misclassified, {inconclusive} inconclusive on degenerate marginals{}",
            errors.len(),
            if errors.is_empty() { String::new() } else { format!(" [{}]", errors.join("; ")) }
        ),
    )
}

fn c8_one_set_per_unitary() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for example in WorkedExample::ALL {
        let spec = example.spec();
        let nb = spec.num_blocks();
        let free: Vec<usize> = spec.free_blocks().collect();
        // extreme members: every vertex of the weight simplex, pure free states
        let vertices: Vec<FamilyMember> = (0..nb)
            .map(|a| {
                let mut weights = vec![0.0; nb];
                weights[a] = 1.0;
                let free_states = free
                    .iter()
                    .map(|&f| {
                        let d = spec.decomposition().block_dim(f).unwrap();
                        (f, ComplexMatrix::projector(&random_pure_state(d, RngSeed(a as u64))))
                    })
                    .collect();
                FamilyMember { weights, free_states }
            })
            .collect();
        let mut cfg = EquivalenceConfig::seeded(example.name(), RngSeed(8), 100, 20);
        cfg.extra_members = vertices;
        let r = lib(family_equivalence_test(&spec, &cfg))?;
        ok &= r.verdict == Verdict::Pass && r.max_trace_distance < EPS_VERIFY;
        parts.push(format!(
            "{example}: {} members × {} unitaries, {:.1e}",
            r.samples, r.unitaries, r.max_trace_distance
        ));

        // the set depends on the unitary alone: rebuilding it for another member changes nothing
        let u = haar_random_unitary(spec.decomposition().joint_dim(), RngSeed(81));
        ok &= lib(build_kraus(&spec, &u))? == lib(build_kraus(&spec, &u))?;
    }
    check(
        ok,
        format!(
            "one Kraus set per unitary, built from (spec, U) only: {}",
            parts.join("; ")
        ),
    )
}

fn c9_basis_equivalence() -> Outcome {
    // fixed block with spectrum (¼,¼,¼,⅛,⅛,0) and free block with (0.4,0.4,0.2)
    let v = haar_random_unitary(6, RngSeed(90));
    let fixed = v
        .conjugate(&ComplexMatrix::from_real_diagonal(&[
            0.25, 0.25, 0.25, 0.125, 0.125, 0.0,
        ]))
        .unwrap()
        .hermitian_part();
    let w = haar_random_unitary(3, RngSeed(91));
    let env = w
        .conjugate(&ComplexMatrix::from_real_diagonal(&[0.4, 0.4, 0.2]))
        .unwrap()
        .hermitian_part();
    let dec = lib(DirectSumDecomposition::new(4, 3, vec![vec![0, 3], vec![1, 2]]))?;
    let spec = lib(FamilySpec::new(
        dec,
        vec![
            BlockSpec::FixedCorrelated { rho_se: fixed },
            BlockSpec::FreeProduct { rho_e: env },
        ],
    ))?;
    let spectra = lib(block_spectra(&spec))?;
    if !spectra.iter().all(|s| s.has_degeneracy(1e-10)) {
        return Err("test family lost its degeneracy".into());
    }
    let mut op_change: f64 = f64::INFINITY;
    let mut channel_change: f64 = 0.0;
    for k in 0..5u64 {
        let u = haar_random_unitary(12, RngSeed(900 + k));
        let rotated: Vec<_> = spectra
            .iter()
            .map(|s| {
                let r = s.rotate_degenerate(1e-10, RngSeed(950 + k));
                let d = r.subspace_basis.rows();
                r.with_subspace_rotation(&haar_random_unitary(d, RngSeed(970 + k)))
                    .unwrap()
            })
            .collect();
        let a = lib(build_kraus_with_spectra(&spec, &u, &spectra))?;
        let b = lib(build_kraus_with_spectra(&spec, &u, &rotated))?;
        let largest = a
            .operators()
            .iter()
            .zip(b.operators())
            .map(|(x, y)| frobenius_distance(&x.matrix, &y.matrix).unwrap())
            .fold(0.0, f64::max);
        op_change = op_change.min(largest);
        for j in 0..20u64 {
            let rho = random_density(4, RngSeed(10_000 * k + j));
            let d = lib(trace_distance(
                &lib(apply_kraus(&a, &rho))?,
                &lib(apply_kraus(&b, &rho))?,
            ))?;
            channel_change = channel_change.max(d);
        }
    }
    check(
        op_change > 1e-3 && channel_change < 1e-10,
        format!("5 unitaries × 20 inputs: operator lists differ (min largest change {op_change:.2}), channel outputs agree to {channel_change:.2e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("free-block family equivalence", c1_product_blocks),
        ("correlated-block family equivalence", c2_correlated_blocks),
        ("completeness", c3_completeness),
        ("worked-example formulas", c4_golden),
        ("special-case reductions", c5_special_cases),
        ("negative control", c6_negative_control),
        ("discord witness", c7_discord),
        ("one set serves the family", c8_one_set_per_unitary),
        ("basis equivalence", c9_basis_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {}. {name}: {detail} [{:.2?}]", i + 1, start.elapsed());
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
