//! Independent oracles for the analytic machinery: every closed form that
//! the library trusts is rebuilt here from a different principle (dense
//! matrix exponentials, quadrature, explicit polynomial coefficients) and
//! compared against the production path.

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use tdsqueeze::auxiliary::AuxiliaryBundle;
use tdsqueeze::classical::{ClassicalBasis, InitialData};
use tdsqueeze::observables::{alpha_from_initial, mean_p, mean_x, uncertainties};
use tdsqueeze::potential::{CoefficientFunction, PotentialSpec};
use tdsqueeze::squeeze::{bch, expand_alpha_z, expand_z_alpha, Ordering, SqueezeParam};
use tdsqueeze::states::{hermite, ln_factorial, NumberState};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense n x n complex matrix in row-major order.
struct Dense {
    n: usize,
    a: Vec<Complex64>,
}

impl Dense {
    fn zeros(n: usize) -> Self {
        Dense {
            n,
            a: vec![ZERO; n * n],
        }
    }

    fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i * self.n + j] = v;
    }

    fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.n];
        for i in 0..self.n {
            let mut s = ZERO;
            for j in 0..self.n {
                s += self.a[i * self.n + j] * v[j];
            }
            out[i] = s;
        }
        out
    }

    fn inf_norm(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.a[i * self.n + j].norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// exp(A) v by splitting into unit-norm substeps, each summed as a plain
/// Taylor series on the vector. Independent of any BCH factorization.
fn expm_apply(a: &Dense, v: &[Complex64]) -> Vec<Complex64> {
    let steps = a.inf_norm().ceil().max(1.0) as usize;
    let scale = Complex64::new(1.0 / steps as f64, 0.0);
    let mut out = v.to_vec();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut acc = out.clone();
        for k in 1..60 {
            term = a.matvec(&term);
            let f = scale / k as f64;
            let mut largest = 0.0f64;
            for (t, s) in term.iter_mut().zip(acc.iter_mut()) {
                *t *= f;
                *s += *t;
                largest = largest.max(t.norm());
            }
            if largest < 1e-18 {
                break;
            }
        }
        out = acc;
    }
    out
}

/// Ladder matrices on the truncated number basis: raise[k+1][k] = sqrt(k+1),
/// lower[k-1][k] = sqrt(k).
fn ladder_matrices(n: usize) -> (Dense, Dense) {
    let mut raise = Dense::zeros(n);
    let mut lower = Dense::zeros(n);
    for k in 0..n - 1 {
        let s = Complex64::new(((k + 1) as f64).sqrt(), 0.0);
        raise.set(k + 1, k, s);
        lower.set(k, k + 1, s);
    }
    (raise, lower)
}

/// Displacement generator alpha J+ - conj(alpha) J-.
fn displacement_generator(n: usize, alpha: Complex64) -> Dense {
    let (raise, lower) = ladder_matrices(n);
    let mut g = Dense::zeros(n);
    for i in 0..n * n {
        g.a[i] = alpha * raise.a[i] - alpha.conj() * lower.a[i];
    }
    g
}

/// Squeeze generator (z/2) J+^2 - (conj(z)/2) J-^2.
fn squeeze_generator(n: usize, z: Complex64) -> Dense {
    let mut g = Dense::zeros(n);
    for k in 0..n.saturating_sub(2) {
        let s = (((k + 1) * (k + 2)) as f64).sqrt();
        g.set(k + 2, k, 0.5 * z * s);
        g.set(k, k + 2, -0.5 * z.conj() * s);
    }
    g
}

fn oracle_coefficients(ordering: Ordering, alpha: Complex64, z: Complex64, n: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; n];
    v[0] = ONE;
    let d = displacement_generator(n, alpha);
    let s = squeeze_generator(n, z);
    match ordering {
        Ordering::AlphaZ => expm_apply(&d, &expm_apply(&s, &v)),
        Ordering::ZAlpha => expm_apply(&s, &expm_apply(&d, &v)),
    }
}

#[test]
fn expansion_matches_matrix_exponential_oracle() {
    let cases = [
        (Complex64::new(1.1, -0.6), 0.55, 0.9),
        (Complex64::new(-0.4, 1.3), 0.8, -2.1),
        (Complex64::new(0.0, 0.0), 0.7, 0.3),
        (Complex64::new(1.8, 0.2), 0.0, 0.0),
    ];
    for (alpha, r, theta) in cases {
        let z = SqueezeParam::from_polar(r, theta).unwrap();
        for ordering in [Ordering::AlphaZ, Ordering::ZAlpha] {
            let n = 220;
            let got = match ordering {
                Ordering::AlphaZ => expand_alpha_z(alpha, z, n).unwrap(),
                Ordering::ZAlpha => expand_z_alpha(alpha, z, n).unwrap(),
            };
            let want = oracle_coefficients(ordering, alpha, z.z, n + 40);
            let mut worst = 0.0f64;
            for (k, c) in got.coefficients.iter().enumerate() {
                worst = worst.max((c - want[k]).norm());
            }
            assert!(
                worst < 1e-9,
                "oracle mismatch {worst:.3e} for alpha={alpha}, r={r}, theta={theta}, {ordering:?}"
            );
        }
    }
}

#[test]
fn hermite_polynomials_match_quadrature_orthogonality() {
    // The physicists' Hermite polynomials satisfy
    // integral H_m H_n exp(-u^2) du = sqrt(pi) 2^m m! delta_mn; check the
    // recurrence-built values against adaptive quadrature.
    for m in 0..=6usize {
        for n in m..=6usize {
            // Trapezoid on a uniform grid is spectrally accurate for smooth
            // integrands with Gaussian decay, so this is both simple and an
            // oracle independent of the recurrence.
            let n_pts = 4001usize;
            let (a, b) = (-10.0f64, 10.0f64);
            let h = (b - a) / (n_pts - 1) as f64;
            let mut val = 0.0f64;
            for i in 0..n_pts {
                let u = a + h * i as f64;
                let w = if i == 0 || i == n_pts - 1 { 0.5 } else { 1.0 };
                val += w * hermite(m, u).unwrap() * hermite(n, u).unwrap() * (-u * u).exp();
            }
            val *= h;
            let target = if m == n {
                std::f64::consts::PI.sqrt() * (m as f64 * std::f64::consts::LN_2 + ln_factorial(m)).exp()
            } else {
                0.0
            };
            let scale = std::f64::consts::PI.sqrt()
                * ((m + n) as f64 * 0.5 * std::f64::consts::LN_2
                    + 0.5 * (ln_factorial(m) + ln_factorial(n)))
                .exp();
            assert!(
                ((val - target) / scale).abs() < 1e-10,
                "H_{m} H_{n} overlap {val} vs {target}"
            );
        }
    }
}

fn custom_bundle() -> Arc<AuxiliaryBundle> {
    // A potential outside the preset family, with a nonzero integration
    // constant, so the generic code paths get exercised.
    let spec = Arc::new(
        PotentialSpec::custom(
            CoefficientFunction::Constant(0.45),
            CoefficientFunction::Constant(0.3),
            CoefficientFunction::Constant(0.1),
            Complex64::new(0.2, -0.15),
        )
        .unwrap(),
    );
    let basis = Arc::new(
        ClassicalBasis::solve_numeric(&spec, InitialData::default(), 6.0, 1e-10).unwrap(),
    );
    Arc::new(AuxiliaryBundle::build(basis, spec, 1e-12).unwrap())
}

#[test]
fn custom_potential_states_stay_orthonormal() {
    let b = custom_bundle();
    for &tau in &[0.0, 2.0, 5.0] {
        let phi3 = b.phi3(tau).unwrap();
        let center = phi3.sqrt() * b.b3(tau).unwrap();
        let half = 8.0 * phi3.sqrt();
        let n_pts = 4001usize;
        let xs: Vec<f64> = (0..n_pts)
            .map(|i| center - half + 2.0 * half * i as f64 / (n_pts - 1) as f64)
            .collect();
        let dx = xs[1] - xs[0];
        let grids: Vec<_> = (0..=3)
            .map(|m| NumberState::new(m, b.clone()).unwrap().grid(&xs, tau).unwrap())
            .collect();
        for ma in 0..=3usize {
            for mb in ma..=3usize {
                let mut acc = ZERO;
                for (va, vb) in grids[ma].values.iter().zip(grids[mb].values.iter()) {
                    acc += va.conj() * vb;
                }
                let overlap = acc * dx;
                let target = if ma == mb { 1.0 } else { 0.0 };
                assert!(
                    (overlap - target).norm() < 1e-7,
                    "<{ma}|{mb}> = {overlap} at tau = {tau}"
                );
            }
        }
    }
}

#[test]
fn custom_potential_formulas_hold() {
    let b = custom_bundle();
    for &tau in &[0.3, 1.7, 4.9] {
        assert!(b.check_formula_i(tau).unwrap() < 1e-8);
        assert!(b.check_formula_ii(tau).unwrap() < 1e-8);
        assert!(b.check_formula_iii(tau).unwrap() < 1e-8);
        assert!(b.check_formula_iv(tau, 1e-12).unwrap() < 1e-8);
    }
}

#[test]
fn initial_data_inversion_recovers_phase_space_point() {
    let b = custom_bundle();
    let (x0, p0) = (0.85, -1.4);
    let alpha = alpha_from_initial(&b, x0, p0).unwrap();
    let z0 = SqueezeParam::new(ZERO);
    let mx = mean_x(&b, alpha, z0, Ordering::AlphaZ, 0.0).unwrap();
    let mp = mean_p(&b, alpha, z0, Ordering::AlphaZ, 0.0).unwrap();
    assert!((mx - x0).abs() < 1e-10, "mean x {mx} vs {x0}");
    assert!((mp - p0).abs() < 1e-10, "mean p {mp} vs {p0}");
    // Uncertainty product still bounded on the custom potential.
    let u = uncertainties(&b, SqueezeParam::from_polar(0.6, 1.0).unwrap(), 3.3).unwrap();
    assert!(u.product >= 0.5 - 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bch_coordinates_satisfy_hyperbolic_identities(
        r in 1e-6f64..1.4,
        theta in -std::f64::consts::PI..std::f64::consts::PI,
    ) {
        let z = SqueezeParam::from_polar(r, theta).unwrap();
        let c = bch(z);
        // gamma- = -conj(gamma+) and cosh^2 (1 - |gamma+|^2) = 1.
        prop_assert!((c.gamma_minus + c.gamma_plus.conj()).norm() < 1e-12);
        let check = (-2.0 * c.gamma_3).exp() * (1.0 - c.gamma_plus.norm_sqr());
        prop_assert!((check - 1.0).abs() < 1e-10);
        prop_assert!(c.gamma_plus.norm() < 1.0);
    }

    #[test]
    fn polar_round_trip(
        r in 0.0f64..1.4,
        theta in -3.0f64..3.0,
    ) {
        let z = SqueezeParam::from_polar(r, theta).unwrap();
        prop_assert!((z.r() - r).abs() < 1e-12);
        if r > 1e-9 {
            let dt = (z.theta() - theta).abs();
            prop_assert!(dt < 1e-9 || (dt - 2.0 * std::f64::consts::PI).abs() < 1e-9);
        }
    }

    #[test]
    fn expansion_norm_never_exceeds_unity(
        ar in -1.5f64..1.5,
        ai in -1.5f64..1.5,
        r in 0.0f64..0.9,
        theta in -3.0f64..3.0,
    ) {
        let alpha = Complex64::new(ar, ai);
        let z = SqueezeParam::from_polar(r, theta).unwrap();
        let e = expand_alpha_z(alpha, z, 280).unwrap();
        let norm_sqr: f64 = e.coefficients.iter().map(|c| c.norm_sqr()).sum();
        prop_assert!(norm_sqr <= 1.0 + 1e-9);
        prop_assert!(norm_sqr >= 1.0 - 1e-6 - e.tail_bound);
    }
}
