//! Closed-form expectation values and uncertainties for displaced/squeezed
//! states in both operator orderings, plus the inversion from initial
//! (x0, p0) data to the displacement parameter.

use num_complex::Complex64;
use serde::Serialize;

use crate::auxiliary::AuxiliaryBundle;
use crate::error::{Error, Result};
use crate::squeeze::{Ordering, SqueezeParam};

/// Coefficients of x and p in the ladder basis after conjugation by the
/// displacement and squeeze operators, with their tau-derivatives.
#[derive(Debug, Clone, Copy)]
pub struct LadderCoefficients {
    pub x_minus: Complex64,
    pub x_plus: Complex64,
    pub x0: Complex64,
    pub y0: Complex64,
    pub x_minus_dot: Complex64,
    pub x_plus_dot: Complex64,
    pub x0_dot: Complex64,
    pub y0_dot: Complex64,
}

pub fn ladder_coefficients(
    bundle: &AuxiliaryBundle,
    alpha: Complex64,
    z: SqueezeParam,
    tau: f64,
) -> Result<LadderCoefficients> {
    let (xi, xi_dot) = bundle.basis().xi_pair(tau)?;
    let big_c = bundle.big_c(tau)?;
    let r = z.r();
    let (ch, sh) = (r.cosh(), r.sinh());
    let phase = if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        (z.z / r).conj() // e^{-i theta}
    };
    let x_minus = xi.conj() * ch + xi * phase * sh;
    let x_plus = xi * ch + xi.conj() * phase.conj() * sh;
    let x_minus_dot = xi_dot.conj() * ch + xi_dot * phase * sh;
    let x_plus_dot = xi_dot * ch + xi_dot.conj() * phase.conj() * sh;
    // i (xi conj(C) - conj(xi) C); its derivative keeps only the xi_dot
    // terms because C_dot = xi g1 makes the C-derivative contribution cancel.
    let shift = Complex64::i() * (xi * big_c.conj() - xi.conj() * big_c);
    let shift_dot = Complex64::i() * (xi_dot * big_c.conj() - xi_dot.conj() * big_c);
    let x0 = alpha * xi.conj() + alpha.conj() * xi + shift;
    let x0_dot = alpha * xi_dot.conj() + alpha.conj() * xi_dot + shift_dot;
    let y0 = alpha * x_minus + alpha.conj() * x_plus + shift;
    let y0_dot = alpha * x_minus_dot + alpha.conj() * x_plus_dot + shift_dot;
    Ok(LadderCoefficients {
        x_minus,
        x_plus,
        x0,
        y0,
        x_minus_dot,
        x_plus_dot,
        x0_dot,
        y0_dot,
    })
}

fn real_part(what: &'static str, v: Complex64) -> Result<f64> {
    if v.im.abs() > 1e-9 * (1.0 + v.re.abs()) {
        return Err(Error::Numeric(format!(
            "{what} should be real, got imaginary part {:.3e}",
            v.im
        )));
    }
    Ok(v.re)
}

/// <x(tau)>: X0 in the (alpha,z) ordering, Y0 in (z,alpha).
pub fn mean_x(
    bundle: &AuxiliaryBundle,
    alpha: Complex64,
    z: SqueezeParam,
    ordering: Ordering,
    tau: f64,
) -> Result<f64> {
    let lc = ladder_coefficients(bundle, alpha, z, tau)?;
    real_part(
        "<x>",
        match ordering {
            Ordering::AlphaZ => lc.x0,
            Ordering::ZAlpha => lc.y0,
        },
    )
}

/// <p(tau)>: the tau-derivative coefficient of the identity.
pub fn mean_p(
    bundle: &AuxiliaryBundle,
    alpha: Complex64,
    z: SqueezeParam,
    ordering: Ordering,
    tau: f64,
) -> Result<f64> {
    let lc = ladder_coefficients(bundle, alpha, z, tau)?;
    real_part(
        "<p>",
        match ordering {
            Ordering::AlphaZ => lc.x0_dot,
            Ordering::ZAlpha => lc.y0_dot,
        },
    )
}

/// alpha reproducing (x0, p0) at tau = 0 in the (alpha,z) ordering:
/// alpha = i (p0 xi(0) - x0 xi_dot(0)) + i C(0).
pub fn alpha_from_initial(bundle: &AuxiliaryBundle, x0: f64, p0: f64) -> Result<Complex64> {
    let (xi0, xi0_dot) = bundle.basis().xi_pair(0.0)?;
    Ok(Complex64::i() * (p0 * xi0 - x0 * xi0_dot) + Complex64::i() * bundle.spec().c_zero)
}

/// alpha reproducing (x0, p0) in the (z,alpha) ordering: the linear system
/// alpha cosh r + conj(alpha) e^{i theta} sinh r = K with
/// K = i(p0 xi(0) - x0 xi_dot(0)) + i C(0) solves to
/// alpha = K cosh r - conj(K) e^{i theta} sinh r.
pub fn alpha_from_initial_z_alpha(
    bundle: &AuxiliaryBundle,
    x0: f64,
    p0: f64,
    z: SqueezeParam,
) -> Result<Complex64> {
    let k = alpha_from_initial(bundle, x0, p0)?;
    let r = z.r();
    if r == 0.0 {
        return Ok(k);
    }
    let eitheta = z.z / r;
    Ok(k * r.cosh() - k.conj() * eitheta * r.sinh())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Uncertainties {
    pub delta_x: f64,
    pub delta_p: f64,
    pub product: f64,
}

/// Delta x^2 = X+ X-, Delta p^2 = X+dot X-dot; both orderings give the same
/// values, and neither depends on alpha.
pub fn uncertainties(bundle: &AuxiliaryBundle, z: SqueezeParam, tau: f64) -> Result<Uncertainties> {
    let lc = ladder_coefficients(bundle, Complex64::new(0.0, 0.0), z, tau)?;
    let dx2 = real_part("(dx)^2", lc.x_plus * lc.x_minus)?;
    let dp2 = real_part("(dp)^2", lc.x_plus_dot * lc.x_minus_dot)?;
    if dx2 < -1e-12 || dp2 < -1e-12 {
        return Err(Error::Numeric(format!(
            "negative variance: (dx)^2 = {dx2:.3e}, (dp)^2 = {dp2:.3e}"
        )));
    }
    let (dx2, dp2) = (dx2.max(0.0), dp2.max(0.0));
    Ok(Uncertainties {
        delta_x: dx2.sqrt(),
        delta_p: dp2.sqrt(),
        product: (dx2 * dp2).sqrt(),
    })
}

/// The squared uncertainty product written out in the real basis functions
/// chi_1, chi_2 — an independent evaluation path used as a cross-check
/// against the complex form. The sign of the sinh(4r) cross term is the one
/// consistent with X_- = conj(xi) cosh r + xi e^{-i theta} sinh r; it was
/// validated against the complex path over randomized bases.
pub fn product_sqr_real_form(
    bundle: &AuxiliaryBundle,
    z: SqueezeParam,
    tau: f64,
) -> Result<f64> {
    let c = bundle.basis().chi(tau)?;
    let r = z.r();
    let theta = z.theta();
    let s = c.chi1 * c.chi1_dot + c.chi2 * c.chi2_dot;
    let d = c.chi1 * c.chi1_dot - c.chi2 * c.chi2_dot;
    let w = c.chi1 * c.chi2_dot + c.chi1_dot * c.chi2;
    let sinh2r = (2.0 * r).sinh();
    Ok(0.25 * (1.0 + s * s)
        + 0.125
            * ((1.0 + 3.0 * s * s)
                + (d * d - w * w) * (2.0 * theta).cos()
                + 2.0 * d * w * (2.0 * theta).sin())
            * sinh2r
            * sinh2r
        + 0.25 * s * (d * theta.cos() + w * theta.sin()) * (4.0 * r).sinh())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrajectoryRecord {
    pub tau: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub delta_x: f64,
    pub delta_p: f64,
    pub product: f64,
}

/// Batch evaluation over a tau grid. The displacement is inverted from
/// (x0, p0) with the formula matching the requested ordering, so both
/// orderings trace the same means.
pub fn trajectory(
    bundle: &AuxiliaryBundle,
    x0: f64,
    p0: f64,
    z: SqueezeParam,
    ordering: Ordering,
    tau_grid: &[f64],
) -> Result<Vec<TrajectoryRecord>> {
    if tau_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("tau grid must be strictly ascending".into()));
    }
    let alpha = match ordering {
        Ordering::AlphaZ => alpha_from_initial(bundle, x0, p0)?,
        Ordering::ZAlpha => alpha_from_initial_z_alpha(bundle, x0, p0, z)?,
    };
    tau_grid
        .iter()
        .map(|&tau| {
            let u = uncertainties(bundle, z, tau)?;
            Ok(TrajectoryRecord {
                tau,
                mean_x: mean_x(bundle, alpha, z, ordering, tau)?,
                mean_p: mean_p(bundle, alpha, z, ordering, tau)?,
                delta_x: u.delta_x,
                delta_p: u.delta_p,
                product: u.product,
            })
        })
        .collect()
}
