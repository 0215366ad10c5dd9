//! Number-operator eigenfunctions Psi_m(x, tau): the R-factor, the separable
//! coordinates (zeta, eta), Hermite polynomials, and pointwise/grid
//! evaluation with continuous phase tracking in tau.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::auxiliary::AuxiliaryBundle;
use crate::error::{Error, Result};
use crate::grid::FieldGrid;

/// Largest supported Hermite order.
pub const MAX_HERMITE: usize = 512;

/// Physicists' Hermite polynomial H_m(u) by the three-term recurrence.
pub fn hermite(m: usize, u: f64) -> Result<f64> {
    if m > MAX_HERMITE {
        return Err(Error::Capacity {
            what: "hermite order",
            got: m,
            max: MAX_HERMITE,
        });
    }
    let mut hm1 = 1.0; // H_0
    if m == 0 {
        return Ok(hm1);
    }
    let mut h = 2.0 * u; // H_1
    for k in 1..m {
        let next = 2.0 * u * h - 2.0 * k as f64 * hm1;
        hm1 = h;
        h = next;
    }
    Ok(h)
}

/// ln(m!), exact for small m and stable for the full supported range.
pub fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|k| (k as f64).ln()).sum()
}

/// R-separable coordinates zeta = x/sqrt(phi3) - B3, eta = tau.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparableCoords {
    pub zeta: f64,
    pub eta: f64,
}

pub fn separable_coords(bundle: &AuxiliaryBundle, x: f64, tau: f64) -> Result<SeparableCoords> {
    Ok(SeparableCoords {
        zeta: x / bundle.phi3(tau)?.sqrt() - bundle.big_b3(tau)?,
        eta: tau,
    })
}

/// The real space-time phase R(x, tau). The x-linear bracket closes with
/// B3 phi3_dot(0)/2, which vanishes for the standard initial data; it is
/// the combination that keeps the phase consistent with the zeta-quadratic
/// term under the product rule.
pub fn r_factor(bundle: &AuxiliaryBundle, x: f64, tau: f64) -> Result<f64> {
    let phi3 = bundle.phi3(tau)?;
    let quad = 0.25 * x * x / phi3 * (bundle.phi3_dot(tau)? - bundle.phi3_dot_zero());
    let bracket = bundle.e3(tau)? / phi3.sqrt() - bundle.theta2()
        + 0.5 * bundle.big_b3(tau)? * bundle.phi3_dot_zero();
    Ok(quad + x / phi3.sqrt() * bracket)
}

/// One wavefunction slice: complex values over an ascending x grid at a
/// single tau.
#[derive(Debug, Clone, Serialize)]
pub struct WavefunctionGrid {
    pub x: Vec<f64>,
    pub tau: f64,
    pub values: Vec<Complex64>,
}

impl WavefunctionGrid {
    pub fn new(x: Vec<f64>, tau: f64, values: Vec<Complex64>) -> Result<Self> {
        if x.len() != values.len() {
            return Err(Error::Config("grid and value lengths differ".into()));
        }
        if x.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("x grid must be strictly ascending".into()));
        }
        Ok(WavefunctionGrid { x, tau, values })
    }

    fn trapezoid(&self, f: impl Fn(usize) -> f64) -> f64 {
        let mut s = 0.0;
        for i in 1..self.x.len() {
            s += 0.5 * (self.x[i] - self.x[i - 1]) * (f(i) + f(i - 1));
        }
        s
    }

    /// Trapezoid integral of |psi|^2.
    pub fn norm_sqr(&self) -> f64 {
        self.trapezoid(|i| self.values[i].norm_sqr())
    }

    /// First moment of x under |psi|^2 / norm.
    pub fn mean_x(&self) -> f64 {
        self.trapezoid(|i| self.x[i] * self.values[i].norm_sqr()) / self.norm_sqr()
    }

    /// sqrt of the central second moment.
    pub fn delta_x(&self) -> f64 {
        let mean = self.mean_x();
        let second =
            self.trapezoid(|i| (self.x[i] - mean).powi(2) * self.values[i].norm_sqr())
                / self.norm_sqr();
        second.sqrt()
    }

    /// CSV body with header: x, re, im, abs2.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,re,im,abs2\n");
        for (x, v) in self.x.iter().zip(&self.values) {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e}\n",
                x,
                v.re,
                v.im,
                v.norm_sqr()
            ));
        }
        out
    }
}

/// Eigenstate of M3 with eigenvalue m + 1/2.
#[derive(Clone)]
pub struct NumberState {
    m: usize,
    bundle: Arc<AuxiliaryBundle>,
}

impl std::fmt::Debug for NumberState {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt.debug_struct("NumberState").field("m", &self.m).finish()
    }
}

/// x-independent pieces of Psi_m at fixed tau.
struct TauContext {
    sqrt_phi3: f64,
    b3_tau: f64,
    big_b3: f64,
    prefactor: Complex64,
}

impl NumberState {
    pub fn new(m: usize, bundle: Arc<AuxiliaryBundle>) -> Result<Self> {
        if m > MAX_HERMITE {
            return Err(Error::Capacity {
                what: "number-state index",
                got: m,
                max: MAX_HERMITE,
            });
        }
        Ok(NumberState { m, bundle })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bundle(&self) -> &Arc<AuxiliaryBundle> {
        &self.bundle
    }

    fn tau_context(&self, tau: f64) -> Result<TauContext> {
        let b = &self.bundle;
        let phi3 = b.phi3(tau)?;
        let phi3_zero = b.phi3_zero();
        let b3_zero = b.b3_zero();
        let m = self.m as f64;
        // amplitude: (pi phi3_o)^{-1/4} e^{-b^2/2} (m! 2^m)^{-1/2} (phi3_o/phi3)^{1/4}
        let amp = (std::f64::consts::PI * phi3_zero).powf(-0.25)
            * (-0.5 * b3_zero * b3_zero).exp()
            * (-0.5 * (ln_factorial(self.m) + m * std::f64::consts::LN_2)).exp()
            * (phi3_zero / phi3).powf(0.25);
        // phase: -(m + 1/2) * accumulated arg(xi), minus the Lambda3 + G0 phases
        let phase = -(m + 0.5) * b.beta_rel(tau)? - b.lambda3(tau)? - b.g0_accum(tau)?;
        Ok(TauContext {
            sqrt_phi3: phi3.sqrt(),
            b3_tau: b.b3(tau)?,
            big_b3: b.big_b3(tau)?,
            prefactor: amp * Complex64::new(0.0, phase).exp(),
        })
    }

    fn eval_at(&self, ctx: &TauContext, x: f64, tau: f64) -> Result<Complex64> {
        let b = self.bundle.b3_zero();
        let zeta = x / ctx.sqrt_phi3 - ctx.big_b3;
        let u = x / ctx.sqrt_phi3 - ctx.b3_tau; // = zeta - b3(0)
        let h = hermite(self.m, u)?;
        let exponent = Complex64::new(-0.5, 0.5 * self.bundle.theta1()) * zeta * zeta
            + Complex64::new(b, self.bundle.theta2()) * zeta
            + Complex64::new(0.0, r_factor(&self.bundle, x, tau)?);
        Ok(ctx.prefactor * h * exponent.exp())
    }

    pub fn psi(&self, x: f64, tau: f64) -> Result<Complex64> {
        let ctx = self.tau_context(tau)?;
        self.eval_at(&ctx, x, tau)
    }

    pub fn grid(&self, x_grid: &[f64], tau: f64) -> Result<WavefunctionGrid> {
        let ctx = self.tau_context(tau)?;
        let values = x_grid
            .iter()
            .map(|&x| self.eval_at(&ctx, x, tau))
            .collect::<Result<Vec<_>>>()?;
        WavefunctionGrid::new(x_grid.to_vec(), tau, values)
    }

    /// Space-time sampling for the operator machinery.
    pub fn field(&self, x_grid: Vec<f64>, tau_grid: Vec<f64>) -> Result<FieldGrid> {
        let mut rows = Vec::with_capacity(tau_grid.len());
        for &tau in &tau_grid {
            let ctx = self.tau_context(tau)?;
            for &x in &x_grid {
                rows.push(self.eval_at(&ctx, x, tau)?);
            }
        }
        let mut field = FieldGrid::from_fn(x_grid, tau_grid, |_, _| Complex64::new(0.0, 0.0));
        for (i, v) in rows.into_iter().enumerate() {
            let nx = field.nx();
            field.set(i % nx, i / nx, v);
        }
        Ok(field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{ClassicalBasis, InitialData};
    use crate::potential::PotentialSpec;
    use crate::quad;

    fn bundle_for(spec: PotentialSpec, tau_max: f64) -> Arc<AuxiliaryBundle> {
        let spec = Arc::new(spec);
        let basis = Arc::new(
            ClassicalBasis::solve(&spec, InitialData::default(), tau_max, 1e-10).unwrap(),
        );
        Arc::new(AuxiliaryBundle::build(basis, spec, 1e-12).unwrap())
    }

    #[test]
    fn hermite_small_orders() {
        assert_eq!(hermite(0, 3.2).unwrap(), 1.0);
        assert!((hermite(1, 0.7).unwrap() - 1.4).abs() < 1e-15);
        assert!((hermite(3, 1.0).unwrap() + 4.0).abs() < 1e-12);
        assert!(hermite(513, 0.0).is_err());
    }

    #[test]
    fn r_factor_vanishes_at_origin_time() {
        let b = bundle_for(PotentialSpec::driven(1.3, 0.5), 4.0);
        for &x in &[-2.0, 0.0, 1.5] {
            assert!(r_factor(&b, x, 0.0).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn harmonic_r_factor_is_zero() {
        // phi3 constant and E3 = 0 for g1 = 0
        let b = bundle_for(PotentialSpec::harmonic(1.0), 4.0);
        for &(x, t) in &[(0.3, 1.0), (-1.0, 2.5), (2.0, 4.0)] {
            assert!(r_factor(&b, x, t).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn psi0_origin_value() {
        let b = bundle_for(PotentialSpec::harmonic(1.0), 1.0);
        let s = NumberState::new(0, b).unwrap();
        let v = s.psi(0.0, 0.0).unwrap();
        assert!((v.re - std::f64::consts::PI.powf(-0.25)).abs() < 1e-12);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn psi1_node_at_b3() {
        let mut spec = PotentialSpec::linear(0.7);
        spec.c_zero = Complex64::new(0.2, 0.1);
        let b = bundle_for(spec, 3.0);
        let tau = 2.0;
        let x_node = b.phi3(tau).unwrap().sqrt() * b.b3(tau).unwrap();
        let s = NumberState::new(1, b).unwrap();
        assert!(s.psi(x_node, tau).unwrap().norm() < 1e-12);
    }

    #[test]
    fn free_psi0_normalized_at_tau_two() {
        let b = bundle_for(PotentialSpec::free(), 3.0);
        let s = NumberState::new(0, b).unwrap();
        let n = quad::integrate(|x| s.psi(x, 2.0).unwrap().norm_sqr(), -30.0, 30.0, 1e-10)
            .unwrap();
        assert!((n - 1.0).abs() < 1e-8, "norm {n}");
    }

    #[test]
    fn grid_moments_and_symmetry() {
        let b = bundle_for(PotentialSpec::harmonic(1.0), 1.0);
        let s = NumberState::new(0, b).unwrap();
        let xs = crate::grid::linspace(-8.0, 8.0, 801);
        let g = s.grid(&xs, 0.5).unwrap();
        assert!((g.norm_sqr() - 1.0).abs() < 1e-6);
        assert!(g.mean_x().abs() < 1e-12);
        assert!((g.delta_x() - f64::sqrt(0.5)).abs() < 1e-5);
        for i in 0..g.x.len() {
            let j = g.x.len() - 1 - i;
            assert!((g.values[i].norm() - g.values[j].norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_continuity_in_tau() {
        let b = bundle_for(PotentialSpec::driven(1.3, 0.5), 6.0);
        let s = NumberState::new(2, b).unwrap();
        let x = 0.7;
        let mut prev = s.psi(x, 0.0).unwrap();
        for k in 1..=600 {
            let tau = 6.0 * k as f64 / 600.0;
            let v = s.psi(x, tau).unwrap();
            assert!((v - prev).norm() < 0.1, "jump at tau = {tau}");
            prev = v;
        }
    }
}
