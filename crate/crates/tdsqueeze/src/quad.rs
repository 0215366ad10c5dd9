//! Adaptive quadrature for the tau-dependent auxiliary integrals, plus a
//! cumulative-integral cache that makes F(tau) = integral from 0 to tau
//! cheap to evaluate at arbitrary tau after one adaptive pass.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// 10-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; mirror).
const GL10_X: [f64; 5] = [
    0.148_874_338_981_631_21,
    0.433_395_394_129_247_19,
    0.679_409_568_299_024_41,
    0.865_063_366_688_984_51,
    0.973_906_528_517_171_72,
];
const GL10_W: [f64; 5] = [
    0.295_524_224_714_752_87,
    0.269_266_719_309_996_35,
    0.219_086_362_515_982_04,
    0.149_451_349_150_580_59,
    0.066_671_344_308_688_14,
];

fn gauss10(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> Complex64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..5 {
        s += GL10_W[i] * (f(c - h * GL10_X[i]) + f(c + h * GL10_X[i]));
    }
    s * h
}

fn simpson(_f: &impl Fn(f64) -> Complex64, a: f64, fa: Complex64, b: f64, fb: Complex64, fm: Complex64) -> Complex64 {
    (fa + 4.0 * fm + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &impl Fn(f64) -> Complex64,
    a: f64,
    fa: Complex64,
    b: f64,
    fb: Complex64,
    fm: Complex64,
    whole: Complex64,
    tol: f64,
    depth: usize,
    out: Option<&mut Vec<(f64, f64, Complex64)>>,
) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let flm = f(0.5 * (a + m));
    let frm = f(0.5 * (m + b));
    let left = simpson(f, a, fa, m, fm, flm);
    let right = simpson(f, m, fm, b, fb, frm);
    let err = (left + right - whole).norm();
    if err < 15.0 * tol || depth >= 40 {
        if depth >= 40 && err > 1e6 * tol {
            return Err(Error::Numeric(format!(
                "quadrature failed to converge on [{a:.6e}, {b:.6e}] (error {err:.3e})"
            )));
        }
        let val = left + right + (left + right - whole) / 15.0;
        if let Some(v) = out {
            v.push((a, b, val));
        }
        return Ok(val);
    }
    match out {
        Some(v) => {
            let l = adapt(f, a, fa, m, fm, flm, left, 0.5 * tol, depth + 1, Some(v))?;
            let r = adapt(f, m, fm, b, fb, frm, right, 0.5 * tol, depth + 1, Some(v))?;
            Ok(l + r)
        }
        None => {
            let l = adapt(f, a, fa, m, fm, flm, left, 0.5 * tol, depth + 1, None)?;
            let r = adapt(f, m, fm, b, fb, frm, right, 0.5 * tol, depth + 1, None)?;
            Ok(l + r)
        }
    }
}

/// Adaptive Simpson integral of a complex-valued function.
pub fn integrate_c(f: impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Result<Complex64> {
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(&f, a, fa, b, fb, fm);
    adapt(&f, a, fa, b, fb, fm, whole, tol, 0, None)
}

/// Adaptive Simpson integral of a real-valued function.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    Ok(integrate_c(|t| Complex64::new(f(t), 0.0), a, b, tol)?.re)
}

type Integrand = Box<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Cumulative integral F(tau) = integral of f from 0 to tau on [0, tau_max].
///
/// One adaptive pass fixes a panel decomposition with prefix sums; queries
/// re-integrate only the partial panel containing tau by Gauss-Legendre.
/// Panels are capped at width 1/2 so the partial rule stays accurate.
pub struct CumulativeIntegral {
    f: Integrand,
    tau_max: f64,
    // (a, b, prefix) with prefix = integral from 0 to a
    panels: Vec<(f64, f64, Complex64)>,
    total: Complex64,
}

impl std::fmt::Debug for CumulativeIntegral {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt.debug_struct("CumulativeIntegral")
            .field("tau_max", &self.tau_max)
            .field("panels", &self.panels.len())
            .field("total", &self.total)
            .finish()
    }
}

impl CumulativeIntegral {
    pub fn build(f: Integrand, tau_max: f64, tol: f64) -> Result<Self> {
        assert!(tau_max >= 0.0);
        let mut leaves: Vec<(f64, f64, Complex64)> = Vec::new();
        if tau_max > 0.0 {
            let n = (tau_max / 0.5).ceil() as usize;
            let h = tau_max / n as f64;
            for k in 0..n {
                let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
                let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
                let whole = simpson(&f, a, fa, b, fb, fm);
                adapt(
                    &f,
                    a,
                    fa,
                    b,
                    fb,
                    fm,
                    whole,
                    tol * h / tau_max,
                    0,
                    Some(&mut leaves),
                )?;
            }
        }
        leaves.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut prefix = Complex64::new(0.0, 0.0);
        let mut panels = Vec::with_capacity(leaves.len());
        for (a, b, v) in leaves {
            panels.push((a, b, prefix));
            prefix += v;
        }
        Ok(CumulativeIntegral {
            f,
            tau_max,
            panels,
            total: prefix,
        })
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_max
    }

    /// F(tau); tau must lie in [0, tau_max].
    pub fn eval(&self, tau: f64) -> Result<Complex64> {
        if !(0.0..=self.tau_max * (1.0 + 1e-12) + 1e-300).contains(&tau) {
            return Err(Error::Domain {
                what: "tau",
                value: tau,
                lo: 0.0,
                hi: self.tau_max,
            });
        }
        if self.panels.is_empty() || tau >= self.tau_max {
            return Ok(self.total);
        }
        let k = self
            .panels
            .partition_point(|p| p.1 <= tau)
            .min(self.panels.len() - 1);
        let (a, _, prefix) = self.panels[k];
        Ok(prefix + gauss10(&self.f, a, tau))
    }

    pub fn eval_re(&self, tau: f64) -> Result<f64> {
        Ok(self.eval(tau)?.re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_oscillatory_exponential() {
        // integral of exp(i w t) on [0, b] = (exp(i w b) - 1) / (i w)
        let w = 3.7;
        let f = move |t: f64| Complex64::new(0.0, w * t).exp();
        let got = integrate_c(f, 0.0, 5.0, 1e-12).unwrap();
        let want = (Complex64::new(0.0, w * 5.0).exp() - 1.0) / Complex64::new(0.0, w);
        assert!((got - want).norm() < 1e-11);
    }

    #[test]
    fn cumulative_matches_closed_form_everywhere() {
        let w = 2.3;
        let ci = CumulativeIntegral::build(
            Box::new(move |t| Complex64::new(0.0, w * t).exp()),
            8.0,
            1e-12,
        )
        .unwrap();
        for k in 0..=160 {
            let t = 8.0 * k as f64 / 160.0;
            let want = (Complex64::new(0.0, w * t).exp() - 1.0) / Complex64::new(0.0, w);
            assert!((ci.eval(t).unwrap() - want).norm() < 1e-10, "t = {t}");
        }
        assert!(ci.eval(-0.1).is_err());
        assert!(ci.eval(8.3).is_err());
    }
}
