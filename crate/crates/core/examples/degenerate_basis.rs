//! Eigenvectors inside a degenerate cluster are arbitrary. Rotating them changes the
//! Kraus operators but not the channel.

use cpmap::kraus::{apply_kraus, block_spectra, build_kraus_with_spectra};
use cpmap::linalg::{frobenius_distance, haar_random_unitary, random_density, trace_distance};
use cpmap::statespace::{BlockSpec, DirectSumDecomposition, FamilySpec};
use cpmap::{ComplexMatrix, RngSeed};

pub fn run_example() -> cpmap::Result<()> {
    // maximally mixed environment on a two-level block, rank-2 degenerate correlated block
    let dec = DirectSumDecomposition::contiguous(2, &[2, 1])?;
    let rho_se = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]);
    let spec = FamilySpec::new(
        dec,
        vec![
            BlockSpec::FixedCorrelated { rho_se },
            BlockSpec::FreeProduct {
                rho_e: ComplexMatrix::identity(2).scale_real(0.5),
            },
        ],
    )?;
    let u = haar_random_unitary(6, RngSeed(1));
    let spectra = block_spectra(&spec)?;
    let rotated: Vec<_> = spectra.iter().map(|s| s.rotate_degenerate(1e-10, RngSeed(2))).collect();
    let a = build_kraus_with_spectra(&spec, &u, &spectra)?;
    let b = build_kraus_with_spectra(&spec, &u, &rotated)?;

    let op_shift = a
        .operators()
        .iter()
        .zip(b.operators())
        .map(|(x, y)| frobenius_distance(&x.matrix, &y.matrix))
        .collect::<cpmap::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let rho = random_density(3, RngSeed(3));
    let channel_shift = trace_distance(&apply_kraus(&a, &rho)?, &apply_kraus(&b, &rho)?)?;
    println!("largest operator change {op_shift:.3}, channel change {channel_shift:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> cpmap::Result<()> {
    run_example()
}
