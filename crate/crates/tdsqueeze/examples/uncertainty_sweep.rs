//! Seeded random sweep over presets, displacements, squeezes, and times:
//! every sample must respect the Heisenberg bound, and the two operator
//! orderings must agree on the means.
//!
//! Run with: cargo run --example uncertainty_sweep

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdsqueeze::auxiliary::AuxiliaryBundle;
use tdsqueeze::classical::{ClassicalBasis, InitialData};
use tdsqueeze::observables::{
    alpha_from_initial, alpha_from_initial_z_alpha, mean_x, uncertainties,
};
use tdsqueeze::potential::PotentialSpec;
use tdsqueeze::squeeze::{Ordering, SqueezeParam};

fn main() -> tdsqueeze::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let bundles: Vec<(
        &'static str,
        Arc<AuxiliaryBundle>,
    )> = PotentialSpec::all_presets()
        .into_iter()
        .map(|(name, spec)| {
            let spec = Arc::new(spec);
            let basis = Arc::new(ClassicalBasis::solve(
                &spec,
                InitialData::default(),
                6.0,
                1e-10,
            )?);
            Ok((name, Arc::new(AuxiliaryBundle::build(basis, spec, 1e-11)?)))
        })
        .collect::<tdsqueeze::Result<_>>()?;

    let samples = 400;
    let mut min_product = f64::MAX;
    let mut max_ordering_gap = 0.0f64;
    for _ in 0..samples {
        let (name, bundle) = &bundles[rng.gen_range(0..bundles.len())];
        let (x0, p0) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let z = SqueezeParam::from_polar(
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
        )?;
        let tau = rng.gen_range(0.0..6.0);

        let u = uncertainties(bundle, z, tau)?;
        if u.product < min_product {
            min_product = u.product;
            println!(
                "new minimum product {:.12} ({name}, r = {:.3}, tau = {:.3})",
                u.product,
                z.r(),
                tau
            );
        }
        // The same initial phase-space point expressed in either operator
        // ordering must produce the same trajectory of means.
        let a1 = alpha_from_initial(bundle, x0, p0)?;
        let a2 = alpha_from_initial_z_alpha(bundle, x0, p0, z)?;
        let a = mean_x(bundle, a1, z, Ordering::AlphaZ, tau)?;
        let b = mean_x(bundle, a2, z, Ordering::ZAlpha, tau)?;
        max_ordering_gap = max_ordering_gap.max((a - b).abs());
    }

    println!("\n{samples} samples:");
    println!("  minimum dx*dp            = {min_product:.12} (bound 0.5)");
    println!("  largest <x> ordering gap = {max_ordering_gap:.3e}");
    Ok(())
}
