//! Displacement and squeeze parameters, BCH canonical coordinates of the
//! squeeze operator, and truncated number-basis expansions of the two
//! operator orderings D(alpha)S(z)|0> and S(z)D(alpha)|0>.
//!
//! Both expansions share one combinatorial kernel: grouping the double sum
//! by total quantum number k = 2q + parity gives
//!   c_k = pref * sum_n exp(ln(k!)/2 - ln((2n+par)!) - (q-n) ln 2
//!                          - ln((q-n)!)) * arg^(2n+par) * gamma_plus^(q-n),
//! with (pref, arg) = (e^{(gamma3 - |a|^2 + conj(a)^2 gamma_plus)/2},
//! a - gamma_plus conj(a)) for the (alpha,z) ordering and
//! (e^{(gamma3 + a^2 gamma_minus - |a|^2)/2}, a e^{gamma3}) for (z,alpha).
//! The scalar conj(a)^2 gamma_plus / 2 in the first prefactor and the
//! sqrt(k!) placement are fixed by requiring unit norm at truncation; they
//! are verified against a matrix-exponential oracle in the test suite.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::auxiliary::AuxiliaryBundle;
use crate::error::{Error, Result};
use crate::states::{ln_factorial, NumberState, WavefunctionGrid};

/// Coherent displacement alpha = |alpha| e^{i delta}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementParam {
    pub alpha: Complex64,
}

impl DisplacementParam {
    pub fn new(alpha: Complex64) -> Self {
        DisplacementParam { alpha }
    }
    pub fn from_polar(modulus: f64, delta: f64) -> Self {
        DisplacementParam {
            alpha: Complex64::from_polar(modulus, delta),
        }
    }
    pub fn modulus(&self) -> f64 {
        self.alpha.norm()
    }
    pub fn delta(&self) -> f64 {
        self.alpha.arg()
    }
}

/// Squeeze z = r e^{i theta} with r >= 0 and theta canonical in [0, 2 pi).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParam {
    pub z: Complex64,
}

impl SqueezeParam {
    pub fn new(z: Complex64) -> Self {
        SqueezeParam { z }
    }
    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        if r < 0.0 {
            return Err(Error::Config("squeeze magnitude r must be >= 0".into()));
        }
        Ok(SqueezeParam {
            z: Complex64::from_polar(r, theta),
        })
    }
    pub fn r(&self) -> f64 {
        self.z.norm()
    }
    pub fn theta(&self) -> f64 {
        let t = self.z.arg();
        if t < 0.0 {
            t + 2.0 * std::f64::consts::PI
        } else {
            t
        }
    }
}

/// Canonical coordinates of the second kind for S(z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BchCoords {
    pub gamma_minus: Complex64,
    pub gamma_plus: Complex64,
    pub gamma_3: f64,
}

/// gamma_minus = -(conj(z)/|z|) tanh|z|, gamma_plus = (z/|z|) tanh|z|,
/// gamma_3 = -ln cosh|z|; the z = 0 limit is (0, 0, 0).
pub fn bch(z: SqueezeParam) -> BchCoords {
    let r = z.r();
    if r == 0.0 {
        return BchCoords {
            gamma_minus: Complex64::new(0.0, 0.0),
            gamma_plus: Complex64::new(0.0, 0.0),
            gamma_3: 0.0,
        };
    }
    let dir = z.z / r;
    let t = r.tanh();
    BchCoords {
        gamma_minus: -dir.conj() * t,
        gamma_plus: dir * t,
        gamma_3: -r.cosh().ln(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    AlphaZ,
    ZAlpha,
}

/// Truncated expansion sum_m c_m |m> of a squeezed state.
#[derive(Debug, Clone, Serialize)]
pub struct NumberBasisExpansion {
    pub ordering: Ordering,
    pub alpha: Complex64,
    pub z: Complex64,
    #[serde(rename = "N")]
    pub truncation: usize,
    pub coefficients: Vec<Complex64>,
    pub tail_bound: f64,
}

fn kahan_sum(terms: impl Iterator<Item = Complex64>) -> Complex64 {
    let (mut s_re, mut s_im, mut c_re, mut c_im) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for t in terms {
        let y = t.re - c_re;
        let u = s_re + y;
        c_re = (u - s_re) - y;
        s_re = u;
        let y = t.im - c_im;
        let u = s_im + y;
        c_im = (u - s_im) - y;
        s_im = u;
    }
    Complex64::new(s_re, s_im)
}

fn expand_kernel(
    ordering: Ordering,
    alpha: Complex64,
    z: SqueezeParam,
    n: usize,
) -> NumberBasisExpansion {
    let g = bch(z);
    let (pref, arg) = match ordering {
        Ordering::AlphaZ => (
            (0.5 * (Complex64::new(g.gamma_3 - alpha.norm_sqr(), 0.0)
                + alpha.conj() * alpha.conj() * g.gamma_plus))
                .exp(),
            alpha - g.gamma_plus * alpha.conj(),
        ),
        Ordering::ZAlpha => (
            (0.5 * (Complex64::new(g.gamma_3 - alpha.norm_sqr(), 0.0)
                + alpha * alpha * g.gamma_minus))
                .exp(),
            alpha * g.gamma_3.exp(),
        ),
    };
    let ln2 = std::f64::consts::LN_2;
    let mut coefficients = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let par = k % 2;
        let q = (k - par) / 2;
        let half_ln_kfac = 0.5 * ln_factorial(k);
        let terms = (0..=q).map(|j| {
            let amp = (half_ln_kfac
                - ln_factorial(2 * j + par)
                - (q - j) as f64 * ln2
                - ln_factorial(q - j))
                .exp();
            amp * arg.powu((2 * j + par) as u32) * g.gamma_plus.powu((q - j) as u32)
        });
        coefficients.push(pref * kahan_sum(terms));
    }
    let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    NumberBasisExpansion {
        ordering,
        alpha,
        z: z.z,
        truncation: n,
        coefficients,
        tail_bound: (1.0 - norm).abs(),
    }
}

/// Expansion of D(alpha)S(z)|0> to order N.
pub fn expand_alpha_z(alpha: Complex64, z: SqueezeParam, n: usize) -> Result<NumberBasisExpansion> {
    if n < 1 {
        return Err(Error::Config("truncation order must be >= 1".into()));
    }
    Ok(expand_kernel(Ordering::AlphaZ, alpha, z, n))
}

/// Expansion of S(z)D(alpha)|0> to order N.
pub fn expand_z_alpha(alpha: Complex64, z: SqueezeParam, n: usize) -> Result<NumberBasisExpansion> {
    if n < 1 {
        return Err(Error::Config("truncation order must be >= 1".into()));
    }
    Ok(expand_kernel(Ordering::ZAlpha, alpha, z, n))
}

pub const MAX_EXPANSION_ORDER: usize = 1024;

/// Grow the truncation until the norm deficit drops below `tol`.
pub fn expand_adaptive(
    ordering: Ordering,
    alpha: Complex64,
    z: SqueezeParam,
    tol: f64,
) -> Result<NumberBasisExpansion> {
    let mut n = 32;
    loop {
        let e = expand_kernel(ordering, alpha, z, n);
        if e.tail_bound < tol {
            return Ok(e);
        }
        if n >= MAX_EXPANSION_ORDER {
            return Err(Error::Convergence {
                tail: e.tail_bound,
                tol,
                n,
            });
        }
        n = (2 * n).min(MAX_EXPANSION_ORDER);
    }
}

/// Synthesize the expansion against the number-state basis on an x grid at
/// one tau.
pub fn assemble_wavefunction(
    expansion: &NumberBasisExpansion,
    x_grid: &[f64],
    tau: f64,
    bundle: &std::sync::Arc<AuxiliaryBundle>,
) -> Result<WavefunctionGrid> {
    if expansion.tail_bound > 1e-6 {
        return Err(Error::Convergence {
            tail: expansion.tail_bound,
            tol: 1e-6,
            n: expansion.truncation,
        });
    }
    let mut values = vec![Complex64::new(0.0, 0.0); x_grid.len()];
    for (m, &c) in expansion.coefficients.iter().enumerate() {
        if c.norm_sqr() < 1e-30 {
            continue;
        }
        let g = NumberState::new(m, bundle.clone())?.grid(x_grid, tau)?;
        for (v, psi) in values.iter_mut().zip(&g.values) {
            *v += c * psi;
        }
    }
    WavefunctionGrid::new(x_grid.to_vec(), tau, values)
}
