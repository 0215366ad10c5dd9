//! Self-checking: every identity the library relies on, evaluated as a
//! numeric residual with an explicit tolerance, collected into a report.
//!
//! The suites are deterministic: random sweeps draw from a ChaCha stream
//! seeded by the caller, and the seed is embedded in the report.

use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    self, apply_generator, commutator_residual, gaussian_field, casimir_identity_residual,
    m3_eigenvalue_residual, opsum_residual, GeneratorKind, OpSum,
};
use crate::auxiliary::AuxiliaryBundle;
use crate::classical::{ClassicalBasis, InitialData};
use crate::error::{Error, Result};
use crate::grid::linspace;
use crate::observables::{
    alpha_from_initial, alpha_from_initial_z_alpha, mean_p, mean_x, product_sqr_real_form,
    uncertainties,
};
use crate::potential::{schroedinger_residual, CoefficientFunction, PotentialSpec};
use crate::squeeze::{self, Ordering, SqueezeParam};
use crate::states::NumberState;

const ODE_TOL: f64 = 1e-10;
const QUAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Wronskian,
    Formulas,
    Uncertainty,
    Algebra,
    States,
    Expansion,
    Ehrenfest,
    NegativeControl,
}

impl Suite {
    pub fn names() -> &'static [&'static str] {
        &[
            "all",
            "wronskian",
            "formulas",
            "uncertainty",
            "algebra",
            "states",
            "expansion",
            "ehrenfest",
            "negative-control",
        ]
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Wronskian => "wronskian",
            Suite::Formulas => "formulas",
            Suite::Uncertainty => "uncertainty",
            Suite::Algebra => "algebra",
            Suite::States => "states",
            Suite::Expansion => "expansion",
            Suite::Ehrenfest => "ehrenfest",
            Suite::NegativeControl => "negative-control",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "wronskian" => Suite::Wronskian,
            "formulas" => Suite::Formulas,
            "uncertainty" => Suite::Uncertainty,
            "algebra" => Suite::Algebra,
            "states" => Suite::States,
            "expansion" => Suite::Expansion,
            "ehrenfest" => Suite::Ehrenfest,
            "negative-control" => Suite::NegativeControl,
            other => {
                return Err(Error::Config(format!(
                    "unknown suite '{other}' (expected one of {})",
                    Suite::names().join(", ")
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl VerifyReport {
    fn new(suite: Suite, seed: u64) -> Self {
        VerifyReport {
            suite: suite.as_str().into(),
            seed,
            checks: Vec::new(),
            pass: true,
        }
    }

    fn push(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        let pass = residual.is_finite() && residual <= tolerance;
        self.pass &= pass;
        self.checks.push(CheckResult {
            name: name.into(),
            residual,
            tolerance,
            pass,
        });
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("suite: {}  seed: {}\n", self.suite, self.seed);
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(4)
            .max(4);
        for c in &self.checks {
            out.push_str(&format!(
                "{}  {:width$}  residual {:>12.4e}  tol {:>9.1e}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.residual,
                c.tolerance,
            ));
        }
        let npass = self.checks.iter().filter(|c| c.pass).count();
        out.push_str(&format!(
            "overall: {} ({npass}/{} checks)\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.checks.len()
        ));
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

fn bundle_for(spec: PotentialSpec, init: InitialData, tau_max: f64) -> Result<Arc<AuxiliaryBundle>> {
    let spec = Arc::new(spec);
    let basis = Arc::new(ClassicalBasis::solve(&spec, init, tau_max, ODE_TOL)?);
    AuxiliaryBundle::build(basis, spec, QUAD_TOL).map(Arc::new)
}

pub fn run_verify(suite: Suite, seed: u64) -> Result<VerifyReport> {
    let mut rep = VerifyReport::new(suite, seed);
    let all = suite == Suite::All;
    if all || suite == Suite::Wronskian {
        run_wronskian(&mut rep)?;
    }
    if all || suite == Suite::Formulas {
        run_formulas(&mut rep, seed)?;
    }
    if all || suite == Suite::Uncertainty {
        run_uncertainty(&mut rep, seed)?;
    }
    if all || suite == Suite::Algebra {
        run_algebra(&mut rep)?;
    }
    if all || suite == Suite::States {
        run_states(&mut rep)?;
    }
    if all || suite == Suite::Expansion {
        run_expansion(&mut rep, seed)?;
    }
    if all || suite == Suite::Ehrenfest {
        run_ehrenfest(&mut rep)?;
    }
    if suite == Suite::NegativeControl {
        run_negative_control(&mut rep)?;
    }
    Ok(rep)
}

/// Wronskian conservation of the integrated basis on [0, 10].
fn run_wronskian(rep: &mut VerifyReport) -> Result<()> {
    for (name, spec) in PotentialSpec::all_presets() {
        let basis = ClassicalBasis::solve_numeric(&spec, InitialData::default(), 10.0, ODE_TOL)?;
        let drift = basis.wronskian_drift(1000)?;
        rep.push(format!("wronskian/{name}"), drift, 1e-9);
    }
    Ok(())
}

/// The four auxiliary-function identities at random tau per preset.
fn run_formulas(rep: &mut VerifyReport, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x666f726d);
    for (name, spec) in PotentialSpec::all_presets() {
        let bundle = bundle_for(spec, InitialData::default(), 10.0)?;
        let mut worst = [0.0f64; 4];
        for _ in 0..100 {
            let tau = rng.gen_range(0.01..10.0);
            worst[0] = worst[0].max(bundle.check_formula_i(tau)?);
            worst[1] = worst[1].max(bundle.check_formula_ii(tau)?);
            worst[2] = worst[2].max(bundle.check_formula_iii(tau)?);
            worst[3] = worst[3].max(bundle.check_formula_iv(tau, 1e-11)?);
        }
        for (k, w) in worst.iter().enumerate() {
            rep.push(format!("formula_{}/{name}", ["i", "ii", "iii", "iv"][k]), *w, 1e-8);
        }
    }
    Ok(())
}

/// Uncertainty products: closed-form special cases, the seeded Heisenberg
/// sweep, ordering equivalence, and the real-variable product form.
fn run_uncertainty(rep: &mut VerifyReport, seed: u64) -> Result<()> {
    let z0 = SqueezeParam::new(Complex64::new(0.0, 0.0));

    // coherent state of the unit harmonic oscillator: constant product 1/2
    let harmonic = bundle_for(
        PotentialSpec::harmonic(1.0),
        InitialData::default(),
        2.0 * std::f64::consts::PI + 0.1,
    )?;
    let mut worst = 0.0f64;
    for tau in linspace(0.0, 2.0 * std::f64::consts::PI, 200) {
        let u = uncertainties(&harmonic, z0, tau)?;
        worst = worst.max((u.product - 0.5).abs());
    }
    rep.push("coherent_product/harmonic", worst, 1e-9);

    // free-particle spreading: product^2 = (1 + tau^2)/4
    let free = bundle_for(PotentialSpec::free(), InitialData::default(), 5.0)?;
    let mut worst = 0.0f64;
    for tau in linspace(0.0, 5.0, 200) {
        let u = uncertainties(&free, z0, tau)?;
        worst = worst.max((u.product * u.product - 0.25 * (1.0 + tau * tau)).abs());
    }
    rep.push("spreading_product/free", worst, 1e-9);

    // squeezed harmonic state at tau = 0, r = 1/2, theta = 0
    let z = SqueezeParam::from_polar(0.5, 0.0)?;
    let u = uncertainties(&harmonic, z, 0.0)?;
    let e = std::f64::consts::E;
    rep.push(
        "squeezed_dx2/harmonic",
        (u.delta_x * u.delta_x - 0.5 * e).abs(),
        1e-9,
    );
    rep.push(
        "squeezed_dp2/harmonic",
        (u.delta_p * u.delta_p - 0.5 / e).abs(),
        1e-9,
    );
    rep.push("squeezed_product/harmonic", (u.product - 0.5).abs(), 1e-9);

    // seeded sweep: Heisenberg bound and ordering equivalence of the means
    let mut bundles = Vec::new();
    for (name, spec) in PotentialSpec::all_presets() {
        bundles.push((name, bundle_for(spec, InitialData::default(), 6.0)?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x73776565);
    let mut violation = 0.0f64;
    let mut ordering_gap = 0.0f64;
    for _ in 0..1000 {
        let (_, bundle) = &bundles[rng.gen_range(0..bundles.len())];
        let z = SqueezeParam::from_polar(
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..2.0 * std::f64::consts::PI),
        )?;
        let (x0, p0) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let tau = rng.gen_range(0.0..6.0);
        let u = uncertainties(bundle, z, tau)?;
        violation = violation.max(0.5 - u.product);

        let a1 = alpha_from_initial(bundle, x0, p0)?;
        let a2 = alpha_from_initial_z_alpha(bundle, x0, p0, z)?;
        let dx = (mean_x(bundle, a1, z, Ordering::AlphaZ, tau)?
            - mean_x(bundle, a2, z, Ordering::ZAlpha, tau)?)
        .abs();
        let dp = (mean_p(bundle, a1, z, Ordering::AlphaZ, tau)?
            - mean_p(bundle, a2, z, Ordering::ZAlpha, tau)?)
        .abs();
        ordering_gap = ordering_gap.max(dx.max(dp));
    }
    rep.push("heisenberg_sweep", violation.max(0.0), 1e-9);
    rep.push("ordering_equivalence", ordering_gap, 1e-10);

    // complex ladder-coefficient product versus the real chi-variable form
    let driven = bundle_for(PotentialSpec::driven(1.3, 0.5), InitialData::default(), 6.0)?;
    let z = SqueezeParam::from_polar(0.8, 2.1)?;
    let mut worst = 0.0f64;
    for tau in linspace(0.0, 6.0, 50) {
        let u = uncertainties(&driven, z, tau)?;
        let real_form = product_sqr_real_form(&driven, z, tau)?;
        worst = worst.max((u.product * u.product - real_form).abs());
    }
    rep.push("product_real_form/driven", worst, 1e-10);
    Ok(())
}

/// Operator-algebra relations on discretized space-time fields.
fn run_algebra(rep: &mut VerifyReport) -> Result<()> {
    let one = Complex64::new(1.0, 0.0);
    let driven = bundle_for(PotentialSpec::driven(1.3, 0.5), InitialData::default(), 1.0)?;
    let field_on = |nx: usize, dt: f64| {
        let taus: Vec<f64> = (0..9).map(|i| 0.492 + dt * i as f64).collect();
        gaussian_field(linspace(-9.0, 9.0, nx), taus, 0.4, 1.7, 1.1, 0.6)
    };
    let f = field_on(16001, 0.002);

    let minus = |k: GeneratorKind| vec![(-one, k)];
    let plus = |k: GeneratorKind| vec![(one, k)];
    let checks: Vec<(&str, GeneratorKind, GeneratorKind, Vec<(Complex64, GeneratorKind)>, f64)> = vec![
        (
            "comm_jm_jp",
            GeneratorKind::JMinus,
            GeneratorKind::JPlus,
            plus(GeneratorKind::Identity),
            1e-5,
        ),
        (
            "comm_m3_jm",
            GeneratorKind::M3,
            GeneratorKind::JMinus,
            minus(GeneratorKind::JMinus),
            1e-4,
        ),
        (
            "comm_m3_jp",
            GeneratorKind::M3,
            GeneratorKind::JPlus,
            plus(GeneratorKind::JPlus),
            1e-4,
        ),
        (
            "comm_mp_mm",
            GeneratorKind::MPlus,
            GeneratorKind::MMinus,
            minus(GeneratorKind::M3),
            1e-4,
        ),
        (
            "comm_m3_mp",
            GeneratorKind::M3,
            GeneratorKind::MPlus,
            vec![(2.0 * one, GeneratorKind::MPlus)],
            1e-4,
        ),
        (
            "comm_m3_mm",
            GeneratorKind::M3,
            GeneratorKind::MMinus,
            vec![(-2.0 * one, GeneratorKind::MMinus)],
            1e-4,
        ),
        (
            "comm_mm_jp",
            GeneratorKind::MMinus,
            GeneratorKind::JPlus,
            minus(GeneratorKind::JMinus),
            1e-4,
        ),
        (
            "comm_mp_jm",
            GeneratorKind::MPlus,
            GeneratorKind::JMinus,
            plus(GeneratorKind::JPlus),
            1e-4,
        ),
    ];
    for (name, a, b, expected, tol) in &checks {
        let r = commutator_residual(*a, *b, expected, &f, &driven)?;
        rep.push(format!("algebra/{name}"), r, *tol);
    }

    // squeeze subalgebra out of composed ladder applications
    let kk = OpSum::k_plus().commutator(&OpSum::k_minus());
    let neg_k3 = OpSum::k3().scale(-one);
    rep.push(
        "algebra/comm_kp_km",
        opsum_residual(&kk, &neg_k3, &f, &driven)?,
        1e-4,
    );
    let km_jm = OpSum::k_minus().commutator(&OpSum::single(GeneratorKind::JMinus));
    rep.push(
        "algebra/comm_km_jm",
        opsum_residual(&km_jm, &OpSum(<Vec<_>>::new()), &f, &driven)?,
        1e-6,
    );

    rep.push(
        "algebra/casimir_identity",
        casimir_identity_residual(&f, &driven)?,
        1e-4,
    );
    let taus: Vec<f64> = (0..9).map(|i| 0.492 + 0.002 * i as f64).collect();
    let g = gaussian_field(linspace(-9.0, 9.0, 16001), taus, -0.8, 1.3, -0.6, 0.3)
        .scale(Complex64::new(0.4, 0.9));
    rep.push(
        "algebra/hermitian_pairing",
        algebra::hermiticity_defect(&f, &g, &driven)?,
        1e-5,
    );

    // 2nd-order convergence of the discretization error
    let probe = OpSum::single(GeneratorKind::M3)
        .commutator(&OpSum::single(GeneratorKind::JMinus));
    let target = OpSum::scaled(-one, vec![GeneratorKind::JMinus]);
    let fine = opsum_residual(&probe, &target, &f, &driven)?;
    let coarse = opsum_residual(&probe, &target, &field_on(4001, 0.008), &driven)?;
    let order = (coarse / fine).log2() / 2.0;
    rep.push("algebra/convergence_order", (order - 2.0).abs(), 0.8);

    // ladder relations and the extremal condition on number states
    let harmonic = bundle_for(PotentialSpec::harmonic(1.0), InitialData::default(), 1.0)?;
    let xs = linspace(-7.0, 7.0, 8001);
    let taus: Vec<f64> = (0..9).map(|i| 0.492 + 0.002 * i as f64).collect();
    let states: Vec<_> = (0..=6)
        .map(|m| NumberState::new(m, harmonic.clone())?.field(xs.clone(), taus.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut raise_worst = 0.0f64;
    let mut lower_worst = 0.0f64;
    for m in 0..5 {
        let raised = apply_generator(GeneratorKind::JPlus, &states[m], &harmonic)?;
        let target = (m as f64 + 1.0).sqrt();
        let diff = raised.axpy(one, &states[m + 1], -target * one);
        raise_worst =
            raise_worst.max(diff.norm_with_margin(1) / states[m].norm_with_margin(1));
        let lowered = apply_generator(GeneratorKind::JMinus, &states[m + 1], &harmonic)?;
        let diff = lowered.axpy(one, &states[m], -target * one);
        lower_worst =
            lower_worst.max(diff.norm_with_margin(1) / states[m + 1].norm_with_margin(1));
    }
    rep.push("algebra/ladder_raise", raise_worst, 1e-4);
    rep.push("algebra/ladder_lower", lower_worst, 1e-4);
    let jm0 = apply_generator(GeneratorKind::JMinus, &states[0], &harmonic)?;
    rep.push(
        "algebra/extremal_state",
        jm0.norm_with_margin(1) / states[0].norm_with_margin(1),
        1e-5,
    );

    // M3 eigenvalues on a preset with nontrivial coefficient functions
    let xs = linspace(-6.0, 6.0, 4801);
    let taus: Vec<f64> = (0..7).map(|i| 0.497 + 0.001 * i as f64).collect();
    let mut worst = 0.0f64;
    for m in 0..=3 {
        let psi = NumberState::new(m, driven.clone())?.field(xs.clone(), taus.clone())?;
        worst = worst.max(m3_eigenvalue_residual(m, &psi, &driven)?);
    }
    rep.push("algebra/m3_eigenvalue", worst, 1e-4);
    Ok(())
}

/// Schroedinger residual of Psi_m in a window around the packet center,
/// sized so the tracked second-order stencil error stays below the target.
/// Returns (residual, half-width actually used).
fn number_state_residual(
    bundle: &Arc<AuxiliaryBundle>,
    m: usize,
    tau_c: f64,
    nx: usize,
    dt: f64,
    x_half: Option<f64>,
) -> Result<(f64, f64)> {
    let phi3 = bundle.phi3(tau_c)?;
    let sp = phi3.sqrt();
    let center = sp * bundle.b3(tau_c)?;
    let kappa = (bundle.phi3_dot(tau_c)? - bundle.phi3_dot_zero()).abs() / (2.0 * phi3);
    let k_lin = ((2.0 * m as f64 + 1.0).sqrt()
        + bundle.theta2().abs()
        + 0.5 * (bundle.big_b3(tau_c)? * bundle.phi3_dot_zero()).abs())
        / sp
        + bundle.e3(tau_c)?.abs() / phi3
        + 0.1;
    let err = |x: f64| {
        let dx = 2.0 * x / (nx - 1) as f64;
        dx * dx / 12.0 * (kappa * x + k_lin).powi(4)
    };
    let half = x_half.unwrap_or_else(|| {
        let full = ((2.0 * m as f64 + 1.0).sqrt() + 4.5) * sp;
        if err(full) <= 2e-7 {
            full
        } else {
            let (mut lo, mut hi) = (0.0, full);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if err(mid) <= 2e-7 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        }
    });
    let start = (tau_c - 2.0 * dt).max(0.0);
    let taus: Vec<f64> = (0..5).map(|i| start + dt * i as f64).collect();
    let xs = linspace(center - half, center + half, nx);
    let field = NumberState::new(m, bundle.clone())?.field(xs, taus)?;
    Ok((schroedinger_residual(&field, bundle.spec())?, half))
}

/// Number-state quality on every preset: Gram matrix and PDE residual.
fn run_states(rep: &mut VerifyReport) -> Result<()> {
    const MMAX: usize = 6;
    for (name, spec) in PotentialSpec::all_presets() {
        let bundle = bundle_for(spec, InitialData::default(), 5.01)?;
        let mut gram_worst = 0.0f64;
        let mut residual_worst = 0.0f64;
        for &tau in &[0.0, 1.0, 5.0] {
            let phi3 = bundle.phi3(tau)?;
            let sp = phi3.sqrt();
            let center = sp * bundle.b3(tau)?;
            let half = ((2.0 * MMAX as f64 + 1.0).sqrt() + 5.5) * sp;
            let xs = linspace(center - half, center + half, 6001);
            let dx = xs[1] - xs[0];
            let grids: Vec<_> = (0..=MMAX)
                .map(|m| NumberState::new(m, bundle.clone())?.grid(&xs, tau))
                .collect::<Result<Vec<_>>>()?;
            for ma in 0..=MMAX {
                for mb in ma..=MMAX {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (i, (va, vb)) in grids[ma]
                        .values
                        .iter()
                        .zip(grids[mb].values.iter())
                        .enumerate()
                    {
                        let w = if i == 0 || i == xs.len() - 1 { 0.5 } else { 1.0 };
                        acc += w * va.conj() * vb;
                    }
                    let g = acc * dx;
                    let target = if ma == mb { 1.0 } else { 0.0 };
                    gram_worst = gram_worst.max((g - target).norm());
                }
            }
            for m in 0..=MMAX {
                let (r, _) = number_state_residual(&bundle, m, tau, 24001, 8e-6, None)?;
                residual_worst = residual_worst.max(r);
            }
        }
        rep.push(format!("states_gram/{name}"), gram_worst, 1e-6);
        rep.push(format!("states_residual/{name}"), residual_worst, 1e-6);

        let (fine, half) = number_state_residual(&bundle, 2, 1.0, 24001, 8e-6, None)?;
        let (coarse, _) = number_state_residual(&bundle, 2, 1.0, 12001, 1.6e-5, Some(half))?;
        // dx and dt both halve between the two runs, so a second-order
        // stencil shrinks the residual by 4x.
        let order = (coarse / fine).log2();
        rep.push(format!("states_order/{name}"), (order - 2.0).abs(), 0.8);
    }
    Ok(())
}

/// Number-basis expansions: unit norm at modest truncation, and grid
/// moments of the synthesized wavefunction against the closed forms.
fn run_expansion(rep: &mut VerifyReport, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x65787061);
    let mut norm_worst = 0.0f64;
    let mut max_truncation = 0usize;
    let mut samples = Vec::new();
    for k in 0..6 {
        let alpha = Complex64::from_polar(
            rng.gen_range(0.0..2.0),
            rng.gen_range(0.0..2.0 * std::f64::consts::PI),
        );
        let z = SqueezeParam::from_polar(
            rng.gen_range(0.0..1.0),
            rng.gen_range(0.0..2.0 * std::f64::consts::PI),
        )?;
        let ordering = if k % 2 == 0 {
            Ordering::AlphaZ
        } else {
            Ordering::ZAlpha
        };
        let e = squeeze::expand_adaptive(ordering, alpha, z, 1e-7)?;
        let norm: f64 = e.coefficients.iter().map(|c| c.norm_sqr()).sum();
        norm_worst = norm_worst.max((norm - 1.0).abs());
        max_truncation = max_truncation.max(e.truncation);
        samples.push(e);
    }
    rep.push("expansion_norm", norm_worst, 1e-6);
    rep.push("expansion_truncation", max_truncation as f64, 300.0);

    let mut mean_worst = 0.0f64;
    let mut width_worst = 0.0f64;
    let presets = [
        PotentialSpec::free(),
        PotentialSpec::harmonic(1.0),
        PotentialSpec::driven(1.3, 0.5),
    ];
    for (e, spec) in samples.iter().zip(presets.iter().cloned()) {
        let bundle = bundle_for(spec, InitialData::default(), 1.2)?;
        let tau = 0.8;
        let z = SqueezeParam::new(e.z);
        let u = uncertainties(&bundle, z, tau)?;
        let mean = mean_x(&bundle, e.alpha, z, e.ordering, tau)?;
        let xs = linspace(mean - 9.0 * u.delta_x, mean + 9.0 * u.delta_x, 3001);
        let grid = squeeze::assemble_wavefunction(e, &xs, tau, &bundle)?;
        mean_worst = mean_worst.max((grid.mean_x() - mean).abs());
        width_worst = width_worst.max((grid.delta_x() - u.delta_x).abs());
    }
    rep.push("expansion_mean_x", mean_worst, 1e-5);
    rep.push("expansion_delta_x", width_worst, 1e-4);
    Ok(())
}

/// Finite-difference consistency of the trajectory means with the classical
/// equations of motion.
fn run_ehrenfest(rep: &mut VerifyReport) -> Result<()> {
    let z0 = SqueezeParam::from_polar(0.3, 1.0)?;
    let dt = 5e-4;
    for (name, spec) in PotentialSpec::all_presets() {
        let bundle = bundle_for(spec, InitialData::default(), 2.0 + 2.0 * dt)?;
        let alpha = alpha_from_initial(&bundle, 1.2, -0.4)?;
        let n = 4001;
        let mut xm = Vec::with_capacity(n);
        let mut pm = Vec::with_capacity(n);
        for i in 0..n {
            let tau = dt * i as f64;
            xm.push(mean_x(&bundle, alpha, z0, Ordering::AlphaZ, tau)?);
            pm.push(mean_p(&bundle, alpha, z0, Ordering::AlphaZ, tau)?);
        }
        let mut worst = 0.0f64;
        for i in (8..n - 8).step_by(8) {
            let tau = dt * i as f64;
            let dxdt = (xm[i + 1] - xm[i - 1]) / (2.0 * dt);
            let dpdt = (pm[i + 1] - pm[i - 1]) / (2.0 * dt);
            let g2 = bundle.spec().g2_at(tau)?;
            let g1 = bundle.spec().g1_at(tau)?;
            worst = worst
                .max((dxdt - pm[i]).abs())
                .max((dpdt + 2.0 * g2 * xm[i] + g1).abs());
        }
        rep.push(format!("ehrenfest/{name}"), worst, 1e-6);
    }
    Ok(())
}

/// Deliberately corrupted fixture: the classical basis solves the unit
/// harmonic oscillator, but the potential handed to the identity checks has
/// the opposite-sign quadratic coefficient. The curvature identity must
/// fail loudly.
fn run_negative_control(rep: &mut VerifyReport) -> Result<()> {
    let corrupted = PotentialSpec::custom(
        CoefficientFunction::Constant(-0.5),
        CoefficientFunction::zero(),
        CoefficientFunction::zero(),
        Complex64::new(0.0, 0.0),
    )?;
    let basis = Arc::new(ClassicalBasis::solve(
        &PotentialSpec::harmonic(1.0),
        InitialData::default(),
        3.0,
        ODE_TOL,
    )?);
    let bundle = AuxiliaryBundle::build(basis, Arc::new(corrupted), QUAD_TOL)?;
    for &tau in &[0.5, 1.0, 2.5] {
        rep.push(
            format!("negative_control/formula_ii@{tau}"),
            bundle.check_formula_ii(tau)?,
            1e-8,
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_parsing_round_trips() {
        for name in Suite::names() {
            let s: Suite = name.parse().unwrap();
            assert_eq!(s.as_str(), *name);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn wronskian_suite_passes() {
        let rep = run_verify(Suite::Wronskian, 1).unwrap();
        assert!(rep.pass, "{}", rep.render_text());
        assert_eq!(rep.checks.len(), 5);
    }

    #[test]
    fn negative_control_fails() {
        let rep = run_verify(Suite::NegativeControl, 1).unwrap();
        assert!(!rep.pass);
        assert!(rep.checks.iter().all(|c| c.residual > 1e-2));
    }

    #[test]
    fn report_serializes() {
        let rep = run_verify(Suite::Wronskian, 9).unwrap();
        let text = rep.to_json().unwrap();
        assert!(text.contains("\"suite\""));
        assert!(rep.render_text().contains("overall"));
    }
}
