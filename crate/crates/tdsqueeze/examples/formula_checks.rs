//! Internal-consistency identities of the auxiliary functions built from
//! the classical basis, evaluated on every preset potential.
//!
//! Run with: cargo run --example formula_checks

use std::sync::Arc;

use tdsqueeze::auxiliary::AuxiliaryBundle;
use tdsqueeze::classical::{ClassicalBasis, InitialData};
use tdsqueeze::potential::PotentialSpec;

fn main() -> tdsqueeze::Result<()> {
    println!(
        "{:<10}  {:>11}  {:>11}  {:>11}  {:>11}",
        "preset", "identity I", "identity II", "identity III", "identity IV"
    );
    for (name, spec) in PotentialSpec::all_presets() {
        let spec = Arc::new(spec);
        let basis = Arc::new(ClassicalBasis::solve(
            &spec,
            InitialData::default(),
            8.0,
            1e-10,
        )?);
        let bundle = AuxiliaryBundle::build(basis, spec, 1e-12)?;
        let mut worst = [0.0f64; 4];
        for i in 1..=20 {
            let tau = 0.4 * i as f64;
            worst[0] = worst[0].max(bundle.check_formula_i(tau)?);
            worst[1] = worst[1].max(bundle.check_formula_ii(tau)?);
            worst[2] = worst[2].max(bundle.check_formula_iii(tau)?);
            worst[3] = worst[3].max(bundle.check_formula_iv(tau, 1e-12)?);
        }
        println!(
            "{name:<10}  {:11.3e}  {:11.3e}  {:11.3e}  {:11.3e}",
            worst[0], worst[1], worst[2], worst[3]
        );
    }
    println!("\nall residuals should sit at quadrature/ODE tolerance, far below 1e-8");
    Ok(())
}
