//! Beyond the presets: a piecewise-linear drive with a nonzero integration
//! constant, solved numerically, with the built-in consistency checks and a
//! short trajectory.
//!
//! Run with: cargo run --example custom_potential

use std::sync::Arc;

use num_complex::Complex64;
use tdsqueeze::auxiliary::AuxiliaryBundle;
use tdsqueeze::classical::{ClassicalBasis, InitialData};
use tdsqueeze::observables::trajectory;
use tdsqueeze::potential::{CoefficientFunction, PotentialSpec};
use tdsqueeze::squeeze::{Ordering, SqueezeParam};

fn main() -> tdsqueeze::Result<()> {
    // A well whose stiffness ramps up and a force that ramps down to zero
    // at tau = 2, plus a complex integration constant for the linear term.
    // Keep the coefficients continuous: the adaptive quadrature used by the
    // consistency checks converges poorly across jumps.
    let spec = Arc::new(PotentialSpec::custom(
        CoefficientFunction::Piecewise {
            breakpoints: vec![0.0, 2.0, 6.5],
            pieces: vec![vec![0.3], vec![0.3, 0.125]],
        },
        CoefficientFunction::Piecewise {
            breakpoints: vec![0.0, 2.0, 6.5],
            pieces: vec![vec![0.5, -0.25], vec![0.0]],
        },
        CoefficientFunction::Constant(0.0),
        Complex64::new(0.25, -0.1),
    )?);
    let basis = Arc::new(ClassicalBasis::solve_numeric(
        &spec,
        InitialData::default(),
        6.0,
        1e-10,
    )?);
    println!("worst Wronskian drift: {:.3e}", basis.wronskian_drift(1000)?);

    let bundle = Arc::new(AuxiliaryBundle::build(basis, spec, 1e-11)?);
    for &tau in &[0.5, 1.5, 3.0, 5.5] {
        println!(
            "tau = {tau:3.1}: identity residuals I..IV = {:.2e} {:.2e} {:.2e} {:.2e}",
            bundle.check_formula_i(tau)?,
            bundle.check_formula_ii(tau)?,
            bundle.check_formula_iii(tau)?,
            bundle.check_formula_iv(tau, 1e-12)?
        );
    }

    let z = SqueezeParam::from_polar(0.3, 0.0)?;
    let taus: Vec<f64> = (0..=60).map(|i| 0.1 * i as f64).collect();
    let records = trajectory(&bundle, 0.8, 0.0, z, Ordering::AlphaZ, &taus)?;
    println!("\n{:>5}  {:>10}  {:>10}  {:>10}", "tau", "<x>", "<p>", "dx*dp");
    for r in records.iter().step_by(10) {
        println!(
            "{:5.1}  {:10.5}  {:10.5}  {:10.6}",
            r.tau, r.mean_x, r.mean_p, r.product
        );
    }
    Ok(())
}
