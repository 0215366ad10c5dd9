//! Classical basis (chi1, chi2) for chi'' + 2 g2(tau) chi = 0 with unit
//! Wronskian chi1 chi2' - chi1' chi2 = 1, and the complex combination
//! xi = (chi1 + i chi2) / sqrt(2), so that W(xi, conj(xi)) = -i.
//!
//! Presets with constant g2 use closed forms; everything else goes through
//! the adaptive integrator with dense output.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ode::{self, DenseOutput, State};
use crate::potential::{CoefficientFunction, PotentialSpec, Preset};

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// a*d - b*c with a compensated (fused multiply-add) correction step, so the
/// result keeps full relative accuracy even when the two products nearly
/// cancel — which is exactly the situation for the Wronskian of
/// exponentially growing solutions.
fn det2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let w = b * c;
    let e = (-b).mul_add(c, w);
    let f = a.mul_add(d, -w);
    f + e
}

/// Initial data (chi1, chi1', chi2, chi2') at tau = 0. Must have unit
/// Wronskian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialData {
    pub chi1: f64,
    pub chi1_dot: f64,
    pub chi2: f64,
    pub chi2_dot: f64,
}

impl InitialData {
    /// The one-parameter family (s, 0, 0, 1/s).
    pub fn standard(s: f64) -> Self {
        InitialData {
            chi1: s,
            chi1_dot: 0.0,
            chi2: 0.0,
            chi2_dot: 1.0 / s,
        }
    }

    pub fn wronskian(&self) -> f64 {
        det2(self.chi1, self.chi1_dot, self.chi2, self.chi2_dot)
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.chi1, self.chi1_dot, self.chi2, self.chi2_dot];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("classical initial data not finite".into()));
        }
        let w = self.wronskian();
        if (w - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "classical initial data must have unit Wronskian, got {w:.3e}"
            )));
        }
        Ok(())
    }
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::standard(1.0)
    }
}

/// Values of the basis and its derivatives at one tau.
#[derive(Debug, Clone, Copy)]
pub struct ChiState {
    pub chi1: f64,
    pub chi1_dot: f64,
    pub chi2: f64,
    pub chi2_dot: f64,
}

impl ChiState {
    pub fn wronskian(&self) -> f64 {
        det2(self.chi1, self.chi1_dot, self.chi2, self.chi2_dot)
    }

    pub fn xi(&self) -> Complex64 {
        Complex64::new(self.chi1, self.chi2) * SQRT_HALF
    }

    pub fn xi_dot(&self) -> Complex64 {
        Complex64::new(self.chi1_dot, self.chi2_dot) * SQRT_HALF
    }
}

/// Fundamental solutions (u1, u2) with u1(0) = 1, u1'(0) = 0, u2(0) = 0,
/// u2'(0) = 1; general initial data is a constant linear combination.
enum Solver {
    /// g2 = 0: u1 = 1, u2 = tau
    Free,
    /// g2 = omega^2 / 2: u1 = cos, u2 = sin/omega
    Trig { omega: f64 },
    /// g2 = -omega^2 / 2: u1 = cosh, u2 = sinh/omega
    Hyper { omega: f64 },
    Numeric(DenseOutput),
}

pub struct ClassicalBasis {
    init: InitialData,
    solver: Solver,
    tau_max: f64,
    /// the quadratic coefficient the basis was solved against; kept so the
    /// basis can report its own second derivative independently of whatever
    /// potential a downstream consumer pairs it with
    g2_solve: CoefficientFunction,
}

impl std::fmt::Debug for ClassicalBasis {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt.debug_struct("ClassicalBasis")
            .field("init", &self.init)
            .field("tau_max", &self.tau_max)
            .finish()
    }
}

impl ClassicalBasis {
    /// Solve on [0, tau_max], using a closed form when the preset has
    /// constant g2 and the adaptive integrator otherwise.
    pub fn solve(
        spec: &PotentialSpec,
        init: InitialData,
        tau_max: f64,
        ode_tol: f64,
    ) -> Result<Self> {
        init.validate()?;
        if !(tau_max > 0.0 && tau_max.is_finite()) {
            return Err(Error::Config("tau_max must be positive and finite".into()));
        }
        let solver = match spec.preset {
            Preset::Free | Preset::Linear { .. } => Solver::Free,
            Preset::Harmonic { omega } | Preset::Driven { omega, .. } => {
                if !(omega > 0.0) {
                    return Err(Error::Config("omega must be positive".into()));
                }
                Solver::Trig { omega }
            }
            Preset::Repulsive { omega } => {
                if !(omega > 0.0) {
                    return Err(Error::Config("omega must be positive".into()));
                }
                Solver::Hyper { omega }
            }
            Preset::Custom => Solver::Numeric(Self::integrate(spec, init, tau_max, ode_tol)?),
        };
        Ok(ClassicalBasis {
            init,
            solver,
            tau_max,
            g2_solve: spec.g2.clone(),
        })
    }

    /// Solve by the adaptive integrator regardless of preset; used to
    /// cross-check the closed forms.
    pub fn solve_numeric(
        spec: &PotentialSpec,
        init: InitialData,
        tau_max: f64,
        ode_tol: f64,
    ) -> Result<Self> {
        init.validate()?;
        if !(tau_max > 0.0 && tau_max.is_finite()) {
            return Err(Error::Config("tau_max must be positive and finite".into()));
        }
        Ok(ClassicalBasis {
            init,
            solver: Solver::Numeric(Self::integrate(spec, init, tau_max, ode_tol)?),
            tau_max,
            g2_solve: spec.g2.clone(),
        })
    }

    fn integrate(
        spec: &PotentialSpec,
        init: InitialData,
        tau_max: f64,
        ode_tol: f64,
    ) -> Result<DenseOutput> {
        // Probe g2 over the full span up front so domain errors surface as
        // configuration errors rather than poisoning the right-hand side.
        for k in 0..=64 {
            spec.g2_at(tau_max * k as f64 / 64.0)?;
        }
        let g2 = spec.g2.clone();
        let f = move |t: f64, y: &State| -> State {
            let g = g2.eval(t).unwrap_or(f64::NAN);
            [y[1], -2.0 * g * y[0], y[3], -2.0 * g * y[2]]
        };
        let y0 = [init.chi1, init.chi1_dot, init.chi2, init.chi2_dot];
        // The requested tolerance is an accuracy target for the solution
        // over the whole span. Growing solutions amplify early local errors
        // by the remaining growth factor, so the per-step controller runs
        // several orders tighter than the target.
        ode::integrate(f, y0, tau_max, (ode_tol * 1e-4).max(1e-14), 0.05)
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    pub fn initial_data(&self) -> InitialData {
        self.init
    }

    fn check_tau(&self, tau: f64) -> Result<()> {
        if !(tau >= 0.0 && tau <= self.tau_max * (1.0 + 1e-12)) {
            return Err(Error::Domain {
                what: "tau",
                value: tau,
                lo: 0.0,
                hi: self.tau_max,
            });
        }
        Ok(())
    }

    pub fn chi(&self, tau: f64) -> Result<ChiState> {
        self.check_tau(tau)?;
        let i = self.init;
        // Fundamental pair and its derivatives.
        let (u1, u1d, u2, u2d) = match &self.solver {
            Solver::Free => (1.0, 0.0, tau, 1.0),
            Solver::Trig { omega } => {
                let (s, c) = (omega * tau).sin_cos();
                (c, -omega * s, s / omega, c)
            }
            Solver::Hyper { omega } => {
                let (s, c) = ((omega * tau).sinh(), (omega * tau).cosh());
                (c, omega * s, s / omega, c)
            }
            Solver::Numeric(d) => {
                let (a, ad) = d.eval(0, tau.min(d.t_end()));
                let (b, bd) = d.eval(2, tau.min(d.t_end()));
                // The integrator propagated `init` directly.
                return Ok(ChiState {
                    chi1: a,
                    chi1_dot: ad,
                    chi2: b,
                    chi2_dot: bd,
                });
            }
        };
        Ok(ChiState {
            chi1: i.chi1 * u1 + i.chi1_dot * u2,
            chi1_dot: i.chi1 * u1d + i.chi1_dot * u2d,
            chi2: i.chi2 * u1 + i.chi2_dot * u2,
            chi2_dot: i.chi2 * u1d + i.chi2_dot * u2d,
        })
    }

    pub fn xi(&self, tau: f64) -> Result<Complex64> {
        Ok(self.chi(tau)?.xi())
    }

    pub fn xi_dot(&self, tau: f64) -> Result<Complex64> {
        Ok(self.chi(tau)?.xi_dot())
    }

    pub fn xi_pair(&self, tau: f64) -> Result<(Complex64, Complex64)> {
        let c = self.chi(tau)?;
        Ok((c.xi(), c.xi_dot()))
    }

    pub fn wronskian(&self, tau: f64) -> Result<f64> {
        Ok(self.chi(tau)?.wronskian())
    }

    /// Second derivative of xi from the dynamics the basis was solved
    /// against: xi_ddot = -2 g2 xi.
    pub fn xi_ddot(&self, tau: f64) -> Result<Complex64> {
        Ok(-2.0 * self.g2_solve.eval(tau)? * self.xi(tau)?)
    }

    /// max |W(tau) - 1| over `nsamples` evenly spaced points of [0, tau_max],
    /// scaled by the magnitude of the products forming the determinant.
    /// The scaling matters for exponentially growing bases: at tau = 10 the
    /// hyperbolic products reach ~1e8, so the raw difference cannot be
    /// resolved below ~1e-8 in f64 no matter how accurate the solution is;
    /// the conditioned residual still detects genuine integration drift.
    pub fn wronskian_drift(&self, nsamples: usize) -> Result<f64> {
        assert!(nsamples >= 2);
        let mut worst = 0.0f64;
        for k in 0..nsamples {
            let tau = self.tau_max * k as f64 / (nsamples - 1) as f64;
            let c = self.chi(tau)?;
            let scale = (c.chi1 * c.chi2_dot).abs() + (c.chi1_dot * c.chi2).abs();
            worst = worst.max((c.wronskian() - 1.0).abs() / scale.max(1.0));
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{CoefficientFunction, PotentialSpec};

    #[test]
    fn initial_data_validation() {
        assert!(InitialData::standard(2.0).validate().is_ok());
        let bad = InitialData {
            chi1: 1.0,
            chi1_dot: 0.0,
            chi2: 0.0,
            chi2_dot: 2.0,
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn harmonic_closed_form() {
        let b = ClassicalBasis::solve(
            &PotentialSpec::harmonic(2.0),
            InitialData::standard(1.0 / f64::sqrt(2.0)),
            10.0,
            1e-10,
        )
        .unwrap();
        let c = b.chi(1.3).unwrap();
        let s = 1.0 / f64::sqrt(2.0);
        assert!((c.chi1 - s * (2.0f64 * 1.3).cos()).abs() < 1e-14);
        assert!((c.chi2 - (2.0f64 * 1.3).sin() / (2.0 * s)).abs() < 1e-13);
        assert!((c.wronskian() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn numeric_matches_closed_form() {
        for (_, spec) in PotentialSpec::all_presets() {
            let closed =
                ClassicalBasis::solve(&spec, InitialData::default(), 10.0, 1e-10).unwrap();
            let numeric =
                ClassicalBasis::solve_numeric(&spec, InitialData::default(), 10.0, 1e-10).unwrap();
            for k in 0..=100 {
                let tau = 10.0 * k as f64 / 100.0;
                let (a, ad) = (closed.chi(tau).unwrap(), numeric.chi(tau).unwrap());
                let scale = 1.0 + a.chi1.abs().max(a.chi2.abs());
                assert!((a.chi1 - ad.chi1).abs() < 1e-8 * scale, "{:?} chi1 at {tau}", spec.preset);
                assert!((a.chi2 - ad.chi2).abs() < 1e-8 * scale, "{:?} chi2 at {tau}", spec.preset);
                assert!((a.chi1_dot - ad.chi1_dot).abs() < 1e-8 * scale);
                assert!((a.chi2_dot - ad.chi2_dot).abs() < 1e-8 * scale);
            }
        }
    }

    #[test]
    fn custom_potential_wronskian_drift() {
        // g2(tau) = (1 + tau/4) / 2 as a piecewise linear table
        let g2 = CoefficientFunction::Piecewise {
            breakpoints: vec![0.0, 12.0],
            pieces: vec![vec![0.5, 0.125 / 2.0 * 2.0 * 0.5]],
        };
        let spec = PotentialSpec::custom(
            g2,
            CoefficientFunction::zero(),
            CoefficientFunction::zero(),
            Complex64::new(0.0, 0.0),
        )
        .unwrap();
        let b = ClassicalBasis::solve(&spec, InitialData::default(), 10.0, 1e-10).unwrap();
        assert!(b.wronskian_drift(1000).unwrap() < 1e-9);
    }

    #[test]
    fn xi_wronskian_is_minus_i() {
        let b = ClassicalBasis::solve(&PotentialSpec::free(), InitialData::default(), 5.0, 1e-10)
            .unwrap();
        let (xi, xid) = b.xi_pair(2.5).unwrap();
        let w = xi * xid.conj() - xid * xi.conj();
        assert!((w - Complex64::new(0.0, -1.0)).norm() < 1e-14);
    }
}
