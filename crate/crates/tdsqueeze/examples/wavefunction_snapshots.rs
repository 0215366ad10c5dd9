//! Number-operator states on a spatial grid: snapshots of |psi_m|^2 for a
//! repulsive (inverted) oscillator, written as CSV to stdout.
//!
//! Run with: cargo run --example wavefunction_snapshots

use std::sync::Arc;

use tdsqueeze::auxiliary::AuxiliaryBundle;
use tdsqueeze::classical::{ClassicalBasis, InitialData};
use tdsqueeze::grid::linspace;
use tdsqueeze::potential::PotentialSpec;
use tdsqueeze::states::NumberState;

fn main() -> tdsqueeze::Result<()> {
    let spec = Arc::new(PotentialSpec::repulsive(1.0));
    let basis = Arc::new(ClassicalBasis::solve(
        &spec,
        InitialData::default(),
        3.0,
        1e-10,
    )?);
    let bundle = Arc::new(AuxiliaryBundle::build(basis, spec, 1e-11)?);

    // The wave packet spreads exponentially on the inverted potential, so
    // scale the window with phi3 = 2 |xi|^2.
    let tau = 1.5;
    let half = 6.0 * bundle.phi3(tau)?.sqrt();
    let xs = linspace(-half, half, 401);

    let mut columns = Vec::new();
    for m in 0..4usize {
        let grid = NumberState::new(m, bundle.clone())?.grid(&xs, tau)?;
        println!(
            "# m = {m}: norm = {:.12}, <x> = {:+.6e}, dx = {:.6e}",
            grid.norm_sqr().sqrt(),
            grid.mean_x(),
            grid.delta_x()
        );
        columns.push(grid.values);
    }

    println!("x,abs2_m0,abs2_m1,abs2_m2,abs2_m3");
    for (i, &x) in xs.iter().enumerate().step_by(8) {
        print!("{x:.6e}");
        for col in &columns {
            print!(",{:.6e}", col[i].norm_sqr());
        }
        println!();
    }
    Ok(())
}
