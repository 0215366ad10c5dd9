//! Time-dependent quadratic potential V(x, tau) = g2(tau) x^2 + g1(tau) x + g0(tau)
//! in units hbar = m = 1, so the Schroedinger operator is
//! S1 = d_xx + 2i d_tau - 2V and p = -i d_x.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::FieldGrid;

/// Named potential families with closed-form classical bases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum Preset {
    Free,
    Harmonic { omega: f64 },
    Repulsive { omega: f64 },
    Linear { force: f64 },
    Driven { omega: f64, force: f64 },
    Custom,
}

/// One coefficient function of tau: a constant, or a piecewise polynomial
/// over ascending breakpoints. Evaluation at a breakpoint takes the
/// right-hand piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoefficientFunction {
    Constant(f64),
    Piecewise {
        /// Ascending breakpoints; piece k covers [breakpoints[k], breakpoints[k+1]).
        breakpoints: Vec<f64>,
        /// Polynomial coefficients per piece, low order first, in the local
        /// variable (tau - left breakpoint).
        pieces: Vec<Vec<f64>>,
    },
}

impl CoefficientFunction {
    pub fn zero() -> Self {
        CoefficientFunction::Constant(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CoefficientFunction::Constant(v) => {
                if !v.is_finite() {
                    return Err(Error::Config("coefficient constant not finite".into()));
                }
            }
            CoefficientFunction::Piecewise {
                breakpoints,
                pieces,
            } => {
                if breakpoints.len() != pieces.len() + 1 {
                    return Err(Error::Config(format!(
                        "piecewise table needs {} breakpoints for {} pieces",
                        pieces.len() + 1,
                        pieces.len()
                    )));
                }
                if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Config(
                        "piecewise breakpoints must be strictly ascending".into(),
                    ));
                }
                if pieces.iter().flatten().any(|c| !c.is_finite()) {
                    return Err(Error::Config("piecewise coefficient not finite".into()));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, tau: f64) -> Result<f64> {
        match self {
            CoefficientFunction::Constant(v) => Ok(*v),
            CoefficientFunction::Piecewise {
                breakpoints,
                pieces,
            } => {
                let lo = breakpoints[0];
                let hi = *breakpoints.last().unwrap();
                if tau < lo || tau > hi {
                    return Err(Error::Domain {
                        what: "tau",
                        value: tau,
                        lo,
                        hi,
                    });
                }
                // Right-hand piece at interior breakpoints; the final
                // breakpoint belongs to the last piece.
                let k = match breakpoints[1..].iter().position(|&b| tau < b) {
                    Some(k) => k,
                    None => pieces.len() - 1,
                };
                let u = tau - breakpoints[k];
                Ok(pieces[k].iter().rev().fold(0.0, |acc, &c| acc * u + c))
            }
        }
    }
}

/// The potential's coefficient functions plus the free complex integration
/// constant entering C(tau) = c(tau) + c_zero.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub g2: CoefficientFunction,
    pub g1: CoefficientFunction,
    pub g0: CoefficientFunction,
    pub c_zero: Complex64,
    pub preset: Preset,
}

impl PotentialSpec {
    pub fn free() -> Self {
        PotentialSpec {
            g2: CoefficientFunction::zero(),
            g1: CoefficientFunction::zero(),
            g0: CoefficientFunction::zero(),
            c_zero: Complex64::new(0.0, 0.0),
            preset: Preset::Free,
        }
    }

    pub fn harmonic(omega: f64) -> Self {
        PotentialSpec {
            g2: CoefficientFunction::Constant(0.5 * omega * omega),
            preset: Preset::Harmonic { omega },
            ..Self::free()
        }
    }

    pub fn repulsive(omega: f64) -> Self {
        PotentialSpec {
            g2: CoefficientFunction::Constant(-0.5 * omega * omega),
            preset: Preset::Repulsive { omega },
            ..Self::free()
        }
    }

    pub fn linear(force: f64) -> Self {
        PotentialSpec {
            g1: CoefficientFunction::Constant(force),
            preset: Preset::Linear { force },
            ..Self::free()
        }
    }

    pub fn driven(omega: f64, force: f64) -> Self {
        PotentialSpec {
            g2: CoefficientFunction::Constant(0.5 * omega * omega),
            g1: CoefficientFunction::Constant(force),
            preset: Preset::Driven { omega, force },
            ..Self::free()
        }
    }

    pub fn custom(
        g2: CoefficientFunction,
        g1: CoefficientFunction,
        g0: CoefficientFunction,
        c_zero: Complex64,
    ) -> Result<Self> {
        g2.validate()?;
        g1.validate()?;
        g0.validate()?;
        Ok(PotentialSpec {
            g2,
            g1,
            g0,
            c_zero,
            preset: Preset::Custom,
        })
    }

    /// The five named presets, in a fixed order used by the verify suite.
    pub fn all_presets() -> Vec<(&'static str, PotentialSpec)> {
        vec![
            ("free", PotentialSpec::free()),
            ("harmonic", PotentialSpec::harmonic(1.0)),
            ("repulsive", PotentialSpec::repulsive(1.0)),
            ("linear", PotentialSpec::linear(0.7)),
            ("driven", PotentialSpec::driven(1.3, 0.5)),
        ]
    }

    pub fn g2_at(&self, tau: f64) -> Result<f64> {
        self.g2.eval(tau)
    }
    pub fn g1_at(&self, tau: f64) -> Result<f64> {
        self.g1.eval(tau)
    }
    pub fn g0_at(&self, tau: f64) -> Result<f64> {
        self.g0.eval(tau)
    }
}

/// V(x, tau).
pub fn evaluate_potential(spec: &PotentialSpec, x: f64, tau: f64) -> Result<f64> {
    Ok(spec.g2.eval(tau)? * x * x + spec.g1.eval(tau)? * x + spec.g0.eval(tau)?)
}

/// Relative residual norm of (d_xx + 2i d_tau - 2V) applied to a sampled field,
/// by second-order central differences over interior grid points, scaled by
/// the field's norm on the same points.
pub fn schroedinger_residual(field: &FieldGrid, spec: &PotentialSpec) -> Result<f64> {
    if field.nx() < 5 || field.ntau() < 5 {
        return Err(Error::Config(
            "schroedinger residual needs at least 5 grid points per axis".into(),
        ));
    }
    let res = apply_s1(field, spec)?;
    let rn = res.interior_norm();
    let fn_ = field.norm_with_margin(res.margin());
    if fn_ == 0.0 {
        return Err(Error::Config("field vanishes on the interior".into()));
    }
    Ok(rn / fn_)
}

/// S1 applied to a field via central differences. The result's invalid
/// boundary margin grows by one layer.
pub fn apply_s1(field: &FieldGrid, spec: &PotentialSpec) -> Result<FieldGrid> {
    let i2 = Complex64::new(0.0, 2.0);
    let mut out = field.clone_shape();
    for it in 0..field.ntau() {
        let tau = field.tau()[it];
        let g2 = spec.g2.eval(tau)?;
        let g1 = spec.g1.eval(tau)?;
        let g0 = spec.g0.eval(tau)?;
        for ix in 0..field.nx() {
            let x = field.x()[ix];
            let v = g2 * x * x + g1 * x + g0;
            let val = field.dxx(ix, it) + i2 * field.dtau(ix, it) - 2.0 * v * field.get(ix, it);
            out.set(ix, it, val);
        }
    }
    out.set_margin(field.margin() + 1);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_values_are_exact() {
        assert_eq!(
            evaluate_potential(&PotentialSpec::free(), 3.0, 5.0).unwrap(),
            0.0
        );
        assert_eq!(
            evaluate_potential(&PotentialSpec::harmonic(1.0), 2.0, 0.0).unwrap(),
            2.0
        );
        let d = PotentialSpec::driven(2.0, 0.5);
        assert_eq!(evaluate_potential(&d, 1.0, 0.3).unwrap(), 2.0 + 0.5);
    }

    #[test]
    fn piecewise_right_hand_tie_break() {
        let g2 = CoefficientFunction::Piecewise {
            breakpoints: vec![0.0, 1.0, 2.0],
            pieces: vec![vec![0.0, 1.0], vec![1.0]],
        };
        let spec =
            PotentialSpec::custom(g2, CoefficientFunction::zero(), CoefficientFunction::zero(), Complex64::new(0.0, 0.0))
                .unwrap();
        // first piece is tau itself, second is the constant 1
        assert_eq!(evaluate_potential(&spec, 1.0, 0.5).unwrap(), 0.5);
        assert_eq!(evaluate_potential(&spec, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(evaluate_potential(&spec, 1.0, 2.0).unwrap(), 1.0);
        assert!(evaluate_potential(&spec, 1.0, 2.5).is_err());
    }

    #[test]
    fn piecewise_validation() {
        let bad = CoefficientFunction::Piecewise {
            breakpoints: vec![0.0, 0.0],
            pieces: vec![vec![1.0]],
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn constant_field_has_zero_residual() {
        let field = FieldGrid::from_fn(
            crate::grid::linspace(-1.0, 1.0, 9),
            crate::grid::linspace(0.0, 0.1, 9),
            |_, _| Complex64::new(1.0, 0.0),
        );
        let r = schroedinger_residual(&field, &PotentialSpec::free()).unwrap();
        assert!(r < 1e-14, "residual {r}");
    }

    #[test]
    fn coarse_grid_rejected() {
        let field = FieldGrid::from_fn(
            crate::grid::linspace(-1.0, 1.0, 4),
            crate::grid::linspace(0.0, 0.1, 9),
            |_, _| Complex64::new(1.0, 0.0),
        );
        assert!(schroedinger_residual(&field, &PotentialSpec::free()).is_err());
    }
}
