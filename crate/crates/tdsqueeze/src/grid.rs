//! Uniform space-time grids holding complex field samples, with the
//! second-order central-difference stencils used by the operator and
//! residual machinery. Boundary layers touched by a stencil are tracked
//! as an invalid margin and excluded from norms.

use num_complex::Complex64;

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + h * i as f64).collect()
}

/// Complex samples on a uniform (x, tau) product grid, tau-major storage.
#[derive(Debug, Clone)]
pub struct FieldGrid {
    x: Vec<f64>,
    tau: Vec<f64>,
    values: Vec<Complex64>,
    margin: usize,
}

impl FieldGrid {
    pub fn from_fn(x: Vec<f64>, tau: Vec<f64>, mut f: impl FnMut(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(x.len() * tau.len());
        for &t in &tau {
            for &xv in &x {
                values.push(f(xv, t));
            }
        }
        FieldGrid {
            x,
            tau,
            values,
            margin: 0,
        }
    }

    pub fn clone_shape(&self) -> Self {
        FieldGrid {
            x: self.x.clone(),
            tau: self.tau.clone(),
            values: vec![Complex64::new(0.0, 0.0); self.values.len()],
            margin: self.margin,
        }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }
    pub fn tau(&self) -> &[f64] {
        &self.tau
    }
    pub fn nx(&self) -> usize {
        self.x.len()
    }
    pub fn ntau(&self) -> usize {
        self.tau.len()
    }
    pub fn dx(&self) -> f64 {
        self.x[1] - self.x[0]
    }
    pub fn dt(&self) -> f64 {
        self.tau[1] - self.tau[0]
    }
    pub fn margin(&self) -> usize {
        self.margin
    }
    pub fn set_margin(&mut self, m: usize) {
        self.margin = m;
    }

    #[inline]
    pub fn get(&self, ix: usize, it: usize) -> Complex64 {
        self.values[it * self.x.len() + ix]
    }
    #[inline]
    pub fn set(&mut self, ix: usize, it: usize, v: Complex64) {
        self.values[it * self.x.len() + ix] = v;
    }

    /// Central first x-derivative; zero on the outermost layer.
    #[inline]
    pub fn dxf(&self, ix: usize, it: usize) -> Complex64 {
        if ix == 0 || ix + 1 == self.nx() {
            return Complex64::new(0.0, 0.0);
        }
        (self.get(ix + 1, it) - self.get(ix - 1, it)) / (2.0 * self.dx())
    }

    /// Central second x-derivative; zero on the outermost layer.
    #[inline]
    pub fn dxx(&self, ix: usize, it: usize) -> Complex64 {
        if ix == 0 || ix + 1 == self.nx() {
            return Complex64::new(0.0, 0.0);
        }
        (self.get(ix + 1, it) - 2.0 * self.get(ix, it) + self.get(ix - 1, it))
            / (self.dx() * self.dx())
    }

    /// Central first tau-derivative; zero on the outermost layer.
    #[inline]
    pub fn dtau(&self, ix: usize, it: usize) -> Complex64 {
        if it == 0 || it + 1 == self.ntau() {
            return Complex64::new(0.0, 0.0);
        }
        (self.get(ix, it + 1) - self.get(ix, it - 1)) / (2.0 * self.dt())
    }

    fn norm_over(&self, m: usize) -> f64 {
        let mut s = 0.0;
        if 2 * m >= self.nx() || 2 * m >= self.ntau() {
            return 0.0;
        }
        for it in m..self.ntau() - m {
            for ix in m..self.nx() - m {
                s += self.get(ix, it).norm_sqr();
            }
        }
        (s * self.dx() * self.dt()).sqrt()
    }

    /// L2 norm over this grid's own valid interior.
    pub fn interior_norm(&self) -> f64 {
        self.norm_over(self.margin)
    }

    /// L2 norm excluding an explicit margin (used to compare two fields on
    /// a common valid region).
    pub fn norm_with_margin(&self, m: usize) -> f64 {
        self.norm_over(m)
    }

    /// L2 norm in x of a single tau-slice, margin layers excluded.
    pub fn slice_norm(&self, it: usize) -> f64 {
        let m = self.margin;
        let mut s = 0.0;
        for ix in m..self.nx() - m {
            s += self.get(ix, it).norm_sqr();
        }
        (s * self.dx()).sqrt()
    }

    /// Linear combination a*self + b*other (shapes must match); resulting
    /// margin is the larger of the two.
    pub fn axpy(&self, a: Complex64, other: &FieldGrid, b: Complex64) -> FieldGrid {
        assert_eq!(self.values.len(), other.values.len());
        let mut out = self.clone_shape();
        for i in 0..self.values.len() {
            out.values[i] = a * self.values[i] + b * other.values[i];
        }
        out.margin = self.margin.max(other.margin);
        out
    }

    pub fn scale(&self, a: Complex64) -> FieldGrid {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= a;
        }
        out
    }
}
