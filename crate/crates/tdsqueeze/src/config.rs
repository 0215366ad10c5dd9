//! Run configuration: a single serde-backed struct shared by the CLI and the
//! examples, plus the trajectory / wavefunction / expansion run drivers with
//! deterministic CSV and JSON serialization.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::auxiliary::AuxiliaryBundle;
use crate::classical::{ClassicalBasis, InitialData};
use crate::error::{Error, Result};
use crate::grid::linspace;
use crate::observables;
use crate::potential::{CoefficientFunction, PotentialSpec};
use crate::squeeze::{self, Ordering, SqueezeParam};
use crate::states::NumberState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    // potential selection
    pub preset: String,
    pub omega: f64,
    pub force: f64,
    pub c_zero_re: f64,
    pub c_zero_im: f64,
    /// coefficient tables for preset = "custom"
    pub g2: Option<CoefficientFunction>,
    pub g1: Option<CoefficientFunction>,
    pub g0: Option<CoefficientFunction>,
    /// classical initial-data scale s in (s, 0, 0, 1/s); None picks the
    /// preset's natural scale (1/sqrt(omega) for the oscillators, else 1)
    pub basis_scale: Option<f64>,

    // state selection
    pub x0: f64,
    pub p0: f64,
    /// direct displacement parameter; overrides the (x0, p0) inversion
    pub alpha: Option<Complex64>,
    pub z_r: f64,
    pub z_theta: f64,
    pub ordering: Ordering,

    // domain and grids
    pub tau_max: f64,
    pub tau_steps: usize,
    /// grid half-width in units of delta-x around the mean
    pub grid_span: f64,
    pub grid_points: usize,

    // tolerances
    pub ode_tol: f64,
    pub quad_tol: f64,
    pub series_tol: f64,

    pub format: OutputFormat,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            preset: "harmonic".into(),
            omega: 1.0,
            force: 0.0,
            c_zero_re: 0.0,
            c_zero_im: 0.0,
            g2: None,
            g1: None,
            g0: None,
            basis_scale: None,
            x0: 0.0,
            p0: 0.0,
            alpha: None,
            z_r: 0.0,
            z_theta: 0.0,
            ordering: Ordering::AlphaZ,
            tau_max: 2.0 * std::f64::consts::PI,
            tau_steps: 100,
            grid_span: 8.0,
            grid_points: 1025,
            ode_tol: 1e-10,
            quad_tol: 1e-11,
            series_tol: 1e-8,
            format: OutputFormat::Csv,
            seed: 7,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tau_steps < 1 {
            return Err(Error::Config("tau_steps must be >= 1".into()));
        }
        if !(self.tau_max > 0.0) {
            return Err(Error::Config("tau_max must be positive".into()));
        }
        if self.grid_span < 4.0 {
            return Err(Error::Config(
                "grid_span must be >= 4 (grid covers at least 4 delta-x)".into(),
            ));
        }
        if self.grid_points < 9 {
            return Err(Error::Config("grid_points must be >= 9".into()));
        }
        for (name, tol) in [
            ("ode_tol", self.ode_tol),
            ("quad_tol", self.quad_tol),
            ("series_tol", self.series_tol),
        ] {
            if !(tol > 0.0) {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if self.z_r < 0.0 {
            return Err(Error::Config("z_r must be >= 0".into()));
        }
        Ok(())
    }

    pub fn potential_spec(&self) -> Result<PotentialSpec> {
        let c_zero = Complex64::new(self.c_zero_re, self.c_zero_im);
        let mut spec = match self.preset.as_str() {
            "free" => PotentialSpec::free(),
            "harmonic" => PotentialSpec::harmonic(self.omega),
            "repulsive" => PotentialSpec::repulsive(self.omega),
            "linear" => PotentialSpec::linear(self.force),
            "driven" => PotentialSpec::driven(self.omega, self.force),
            "custom" => PotentialSpec::custom(
                self.g2.clone().unwrap_or_else(CoefficientFunction::zero),
                self.g1.clone().unwrap_or_else(CoefficientFunction::zero),
                self.g0.clone().unwrap_or_else(CoefficientFunction::zero),
                c_zero,
            )?,
            other => {
                return Err(Error::Config(format!(
                    "unknown preset '{other}' (free, harmonic, repulsive, linear, driven, custom)"
                )))
            }
        };
        spec.c_zero = c_zero;
        Ok(spec)
    }

    pub fn initial_data(&self) -> InitialData {
        let s = self.basis_scale.unwrap_or(match self.preset.as_str() {
            "harmonic" | "driven" if self.omega > 0.0 => 1.0 / self.omega.sqrt(),
            _ => 1.0,
        });
        InitialData::standard(s)
    }

    pub fn squeeze(&self) -> Result<SqueezeParam> {
        SqueezeParam::from_polar(self.z_r, self.z_theta)
    }

    /// Solve the basis and build the auxiliary bundle on [0, tau_max]
    /// (or a caller-supplied longer span).
    pub fn bundle(&self, tau_span: Option<f64>) -> Result<Arc<AuxiliaryBundle>> {
        let spec = Arc::new(self.potential_spec()?);
        let span = tau_span.unwrap_or(self.tau_max).max(self.tau_max);
        let basis = Arc::new(ClassicalBasis::solve(
            &spec,
            self.initial_data(),
            span,
            self.ode_tol,
        )?);
        AuxiliaryBundle::build(basis, spec, self.quad_tol).map(Arc::new)
    }

    pub fn alpha(&self, bundle: &AuxiliaryBundle) -> Result<Complex64> {
        if let Some(a) = self.alpha {
            return Ok(a);
        }
        match self.ordering {
            Ordering::AlphaZ => observables::alpha_from_initial(bundle, self.x0, self.p0),
            Ordering::ZAlpha => {
                observables::alpha_from_initial_z_alpha(bundle, self.x0, self.p0, self.squeeze()?)
            }
        }
    }

    pub fn tau_grid(&self) -> Vec<f64> {
        if self.tau_steps == 1 {
            return vec![0.0];
        }
        linspace(0.0, self.tau_max, self.tau_steps)
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Trajectory run: one record per tau, serialized per the configured format.
pub fn run_trajectory(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let bundle = cfg.bundle(None)?;
    let z = cfg.squeeze()?;
    let grid = cfg.tau_grid();
    let records = if let Some(alpha) = cfg.alpha {
        // direct alpha: evaluate means without the (x0, p0) inversion
        grid.iter()
            .map(|&tau| {
                let u = observables::uncertainties(&bundle, z, tau)?;
                Ok(observables::TrajectoryRecord {
                    tau,
                    mean_x: observables::mean_x(&bundle, alpha, z, cfg.ordering, tau)?,
                    mean_p: observables::mean_p(&bundle, alpha, z, cfg.ordering, tau)?,
                    delta_x: u.delta_x,
                    delta_p: u.delta_p,
                    product: u.product,
                })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        observables::trajectory(&bundle, cfg.x0, cfg.p0, z, cfg.ordering, &grid)?
    };
    match cfg.format {
        OutputFormat::Csv => {
            let mut out = String::from("tau,mean_x,mean_p,delta_x,delta_p,product\n");
            for r in &records {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt(r.tau),
                    fmt(r.mean_x),
                    fmt(r.mean_p),
                    fmt(r.delta_x),
                    fmt(r.delta_p),
                    fmt(r.product)
                ));
            }
            Ok(out)
        }
        OutputFormat::Json => Ok(serde_json::to_string_pretty(&serde_json::json!({
            "preset": cfg.preset,
            "ordering": cfg.ordering,
            "z": { "r": cfg.z_r, "theta": cfg.z_theta },
            "records": records,
        }))? + "\n"),
    }
}

#[derive(Debug, Clone, Copy)]
pub enum WavefunctionSelect {
    /// number state Psi_m
    Number(usize),
    /// displaced/squeezed state from the configured (alpha, z)
    Squeezed,
}

/// Wavefunction slice at one tau on a grid auto-centered at the mean with
/// half-width grid_span * delta_x.
pub fn run_wavefunction(cfg: &RunConfig, select: WavefunctionSelect, tau: f64) -> Result<String> {
    cfg.validate()?;
    let bundle = cfg.bundle(Some(tau.max(cfg.tau_max)))?;
    let z = cfg.squeeze()?;
    let grid = match select {
        WavefunctionSelect::Number(m) => {
            let phi3 = bundle.phi3(tau)?;
            let center = phi3.sqrt() * bundle.b3(tau)?;
            let width = (phi3 / 2.0).sqrt() * (2.0 * m as f64 + 1.0).sqrt();
            let xs = linspace(
                center - cfg.grid_span * width,
                center + cfg.grid_span * width,
                cfg.grid_points,
            );
            NumberState::new(m, bundle.clone())?.grid(&xs, tau)?
        }
        WavefunctionSelect::Squeezed => {
            let alpha = cfg.alpha(&bundle)?;
            let u = observables::uncertainties(&bundle, z, tau)?;
            let center = observables::mean_x(&bundle, alpha, z, cfg.ordering, tau)?;
            let xs = linspace(
                center - cfg.grid_span * u.delta_x,
                center + cfg.grid_span * u.delta_x,
                cfg.grid_points,
            );
            let expansion = match cfg.ordering {
                Ordering::AlphaZ => {
                    squeeze::expand_adaptive(Ordering::AlphaZ, alpha, z, cfg.series_tol)?
                }
                Ordering::ZAlpha => {
                    squeeze::expand_adaptive(Ordering::ZAlpha, alpha, z, cfg.series_tol)?
                }
            };
            squeeze::assemble_wavefunction(&expansion, &xs, tau, &bundle)?
        }
    };
    match cfg.format {
        OutputFormat::Csv => Ok(grid.to_csv()),
        OutputFormat::Json => Ok(serde_json::to_string_pretty(&grid)? + "\n"),
    }
}

/// Number-basis expansion of the configured state.
pub fn run_expand(cfg: &RunConfig) -> Result<String> {
    cfg.validate()?;
    let bundle = cfg.bundle(None)?;
    let alpha = cfg.alpha(&bundle)?;
    let expansion = squeeze::expand_adaptive(cfg.ordering, alpha, cfg.squeeze()?, cfg.series_tol)?;
    match cfg.format {
        OutputFormat::Csv => {
            let mut out = String::from("m,re,im,abs2\n");
            for (m, c) in expansion.coefficients.iter().enumerate() {
                out.push_str(&format!(
                    "{m},{},{},{}\n",
                    fmt(c.re),
                    fmt(c.im),
                    fmt(c.norm_sqr())
                ));
            }
            Ok(out)
        }
        OutputFormat::Json => Ok(serde_json::to_string_pretty(&expansion)? + "\n"),
    }
}
