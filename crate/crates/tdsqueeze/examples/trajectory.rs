//! Phase-space trajectory of a displaced squeezed state in a driven
//! harmonic well: means, spreads, and the uncertainty product over time.
//!
//! Run with: cargo run --example trajectory

use std::sync::Arc;

use tdsqueeze::auxiliary::AuxiliaryBundle;
use tdsqueeze::classical::{ClassicalBasis, InitialData};
use tdsqueeze::observables::{alpha_from_initial, trajectory};
use tdsqueeze::potential::PotentialSpec;
use tdsqueeze::squeeze::{Ordering, SqueezeParam};

fn main() -> tdsqueeze::Result<()> {
    let spec = Arc::new(PotentialSpec::driven(1.3, 0.5));
    let basis = Arc::new(ClassicalBasis::solve(
        &spec,
        InitialData::default(),
        12.0,
        1e-10,
    )?);
    let bundle = Arc::new(AuxiliaryBundle::build(basis, spec, 1e-11)?);

    let (x0, p0) = (1.5, 0.0);
    let z = SqueezeParam::from_polar(0.4, 0.9)?;
    let taus: Vec<f64> = (0..=120).map(|i| 0.1 * i as f64).collect();
    let records = trajectory(&bundle, x0, p0, z, Ordering::AlphaZ, &taus)?;

    println!("alpha = {}", alpha_from_initial(&bundle, x0, p0)?);
    println!(
        "{:>6}  {:>12}  {:>12}  {:>10}  {:>10}  {:>10}",
        "tau", "<x>", "<p>", "dx", "dp", "dx*dp"
    );
    for r in records.iter().step_by(10) {
        println!(
            "{:6.2}  {:12.6}  {:12.6}  {:10.6}  {:10.6}  {:10.6}",
            r.tau, r.mean_x, r.mean_p, r.delta_x, r.delta_p, r.product
        );
    }

    let worst = records
        .iter()
        .map(|r| 0.5 - r.product)
        .fold(f64::MIN, f64::max);
    println!("\nlargest Heisenberg-bound violation: {worst:.3e} (negative means none)");
    Ok(())
}
