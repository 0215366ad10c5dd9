//! Number-basis expansion of a displaced squeezed state for both operator
//! orderings, with the BCH coordinates that make the expansion possible.
//!
//! Run with: cargo run --example squeezed_expansion

use num_complex::Complex64;
use tdsqueeze::squeeze::{bch, expand_adaptive, Ordering, SqueezeParam};

fn main() -> tdsqueeze::Result<()> {
    let alpha = Complex64::new(1.2, -0.5);
    let z = SqueezeParam::from_polar(0.7, 1.1)?;

    let c = bch(z);
    println!("z = {} (r = {:.4}, theta = {:.4})", z.z, z.r(), z.theta());
    println!(
        "BCH coordinates: gamma+ = {}, gamma3 = {:.6}, gamma- = {}\n",
        c.gamma_plus, c.gamma_3, c.gamma_minus
    );

    for ordering in [Ordering::AlphaZ, Ordering::ZAlpha] {
        let e = expand_adaptive(ordering, alpha, z, 1e-10)?;
        let norm_sqr: f64 = e.coefficients.iter().map(|c| c.norm_sqr()).sum();
        println!(
            "{ordering:?}: N = {}, tail bound = {:.3e}, norm = {:.12}",
            e.truncation,
            e.tail_bound,
            norm_sqr.sqrt()
        );
        println!("{:>4}  {:>13}  {:>13}  {:>11}", "m", "Re c_m", "Im c_m", "|c_m|^2");
        for (m, cm) in e.coefficients.iter().take(12).enumerate() {
            println!(
                "{m:4}  {:13.6e}  {:13.6e}  {:11.6e}",
                cm.re,
                cm.im,
                cm.norm_sqr()
            );
        }
        println!();
    }
    Ok(())
}
