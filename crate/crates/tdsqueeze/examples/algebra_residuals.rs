//! Discretized operator algebra: commutators of the space-time generators
//! evaluated on a smooth test field, reported as relative residuals.
//!
//! Run with: cargo run --example algebra_residuals

use std::sync::Arc;

use num_complex::Complex64;
use tdsqueeze::algebra::{
    commutator_residual, gaussian_field, casimir_identity_residual, opsum_residual, GeneratorKind,
    OpSum,
};
use tdsqueeze::auxiliary::AuxiliaryBundle;
use tdsqueeze::classical::{ClassicalBasis, InitialData};
use tdsqueeze::grid::linspace;
use tdsqueeze::potential::PotentialSpec;

fn main() -> tdsqueeze::Result<()> {
    let spec = Arc::new(PotentialSpec::driven(1.3, 0.5));
    let basis = Arc::new(ClassicalBasis::solve(
        &spec,
        InitialData::default(),
        1.0,
        1e-10,
    )?);
    let bundle = Arc::new(AuxiliaryBundle::build(basis, spec, 1e-12)?);

    // Fine x spacing drives the stencil error; only a few tau rows are
    // needed because each operator application consumes one margin layer.
    let taus: Vec<f64> = (0..9).map(|i| 0.492 + 0.002 * i as f64).collect();
    let field = gaussian_field(linspace(-9.0, 9.0, 8001), taus, 0.4, 1.7, 1.1, 0.6);

    let one = Complex64::new(1.0, 0.0);
    use GeneratorKind::*;
    let table: Vec<(&str, GeneratorKind, GeneratorKind, Vec<(Complex64, GeneratorKind)>)> = vec![
        ("[J-, J+] = I", JMinus, JPlus, vec![(one, Identity)]),
        ("[M3, J-] = -J-", M3, JMinus, vec![(-one, JMinus)]),
        ("[M3, J+] = +J+", M3, JPlus, vec![(one, JPlus)]),
        ("[M+, M-] = -M3", MPlus, MMinus, vec![(-one, M3)]),
        ("[M3, M+] = 2M+", M3, MPlus, vec![(2.0 * one, MPlus)]),
        ("[M3, M-] = -2M-", M3, MMinus, vec![(-2.0 * one, MMinus)]),
        ("[M-, J+] = -J-", MMinus, JPlus, vec![(-one, JMinus)]),
        ("[M+, J-] = +J+", MPlus, JMinus, vec![(one, JPlus)]),
    ];
    for (label, a, b, expected) in &table {
        let r = commutator_residual(*a, *b, expected, &field, &bundle)?;
        println!("{label:<18} residual {r:10.3e}");
    }

    let kk = OpSum::k_plus().commutator(&OpSum::k_minus());
    let r = opsum_residual(&kk, &OpSum::k3().scale(-one), &field, &bundle)?;
    println!("{:<18} residual {r:10.3e}", "[K+, K-] = -K3");

    let r = casimir_identity_residual(&field, &bundle)?;
    println!("{:<18} residual {r:10.3e}", "M3 = J+J- + ...");
    Ok(())
}
