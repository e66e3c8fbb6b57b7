//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

/// Perturbative Laplace solve on the strip `-h < y < 0`, periodic in `x`.
///
/// The boundary condition `Φ(x, η) = ψ` is Taylor-expanded about `y = 0`; each order is a
/// Dirichlet problem with `Φ_y = 0` at the bottom, solved mode by mode in `x` with a
/// Numerov discretization in `y` and a one-sided fourth-order derivative at the surface.
pub struct StripOracle {
    pub nx: usize,
    pub ny: usize,
    pub depth: f64,
}

impl StripOracle {
    pub fn new(nx: usize, ny: usize, depth: f64) -> Self {
        StripOracle { nx, ny, depth }
    }

    fn wavenumber(&self, m: usize) -> f64 {
        if m <= self.nx / 2 {
            m as f64
        } else {
            m as f64 - self.nx as f64
        }
    }

    fn fft(&self, v: &[f64]) -> Vec<C64> {
        let mut buf: Vec<C64> = v.iter().map(|x| C64::new(*x, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(self.nx).process(&mut buf);
        buf
    }

    fn ifft(&self, mut buf: Vec<C64>) -> Vec<f64> {
        FftPlanner::new().plan_fft_inverse(self.nx).process(&mut buf);
        buf.iter().map(|c| c.re / self.nx as f64).collect()
    }

    fn multiplier(&self, v: &[f64], mut sym: impl FnMut(f64) -> C64) -> Vec<f64> {
        let mut c = self.fft(v);
        for (m, x) in c.iter_mut().enumerate() {
            *x *= sym(self.wavenumber(m));
        }
        self.ifft(c)
    }

    fn dx(&self, v: &[f64]) -> Vec<f64> {
        self.multiplier(v, |k| if 2 * k.abs() as usize == self.nx { C64::new(0.0, 0.0) } else { C64::new(0.0, k) })
    }

    fn dxx(&self, v: &[f64]) -> Vec<f64> {
        self.multiplier(v, |k| C64::new(-k * k, 0.0))
    }

    /// `φ'(0)/φ(0)` for `φ'' = k²φ`, `φ'(-h) = 0`, on `ny` Numerov nodes.
    pub fn surface_ratio(&self, k: f64) -> f64 {
        if k == 0.0 {
            return 0.0;
        }
        let n = self.ny;
        let dy = self.depth / (n - 1) as f64;
        let s = (k * dy).powi(2);
        let a = 1.0 - s / 12.0;
        let b = 1.0 + 5.0 * s / 12.0;
        // Unknowns φ_0..φ_{n-2}; φ_{n-1} = 1. Row 0 uses the mirror φ_{-1} = φ_1.
        let m = n - 1;
        let mut lower = vec![0.0; m];
        let mut diag = vec![-2.0 * b; m];
        let mut upper = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        upper[0] = 2.0 * a;
        for i in 1..m {
            lower[i] = a;
            if i + 1 < m {
                upper[i] = a;
            }
        }
        rhs[m - 1] = -a;
        // Thomas algorithm.
        for i in 1..m {
            let w = lower[i] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut phi = vec![0.0; n];
        phi[n - 1] = 1.0;
        phi[m - 1] = rhs[m - 1] / diag[m - 1];
        for i in (0..m - 1).rev() {
            phi[i] = (rhs[i] - upper[i] * phi[i + 1]) / diag[i];
        }
        let t = n - 1;
        (25.0 * phi[t] - 48.0 * phi[t - 1] + 36.0 * phi[t - 2] - 16.0 * phi[t - 3] + 3.0 * phi[t - 4]) / (12.0 * dy)
    }

    /// `∂_yΦ` at the surface for the harmonic extension of `trace`.
    fn normal_derivative(&self, trace: &[f64]) -> Vec<f64> {
        let mut cache: BTreeMap<u64, f64> = BTreeMap::new();
        self.multiplier(trace, |k| {
            let r = *cache.entry(k.abs() as u64).or_insert_with(|| self.surface_ratio(k.abs()));
            C64::new(r, 0.0)
        })
    }

    /// `[G_0ψ, G_1(η)ψ, G_2(η)ψ]` sampled on the `x` grid.
    pub fn dn_orders(&self, eta: &[f64], psi: &[f64]) -> [Vec<f64>; 3] {
        let n = self.nx;
        let mul = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x * y).collect() };
        let eta_x = self.dx(eta);
        let psi_x = self.dx(psi);
        let psi_xx = self.dxx(psi);
        let d0 = self.normal_derivative(psi);
        // First order: trace of Φ_1 is -η ∂_yΦ_0.
        let t1: Vec<f64> = mul(eta, &d0).iter().map(|v| -v).collect();
        let d1 = self.normal_derivative(&t1);
        let g1: Vec<f64> = (0..n).map(|i| d1[i] - eta[i] * psi_xx[i] - eta_x[i] * psi_x[i]).collect();
        // Second order: trace of Φ_2 is -η ∂_yΦ_1 - ½η² ∂_y²Φ_0.
        let t2: Vec<f64> = (0..n).map(|i| -eta[i] * d1[i] + 0.5 * eta[i] * eta[i] * psi_xx[i]).collect();
        let d2 = self.normal_derivative(&t2);
        let t1_xx = self.dxx(&t1);
        let t1_x = self.dx(&t1);
        let d0_xx = self.dxx(&d0);
        let d0_x = self.dx(&d0);
        let g2: Vec<f64> = (0..n)
            .map(|i| {
                d2[i] - eta[i] * t1_xx[i] - 0.5 * eta[i] * eta[i] * d0_xx[i]
                    - eta_x[i] * (t1_x[i] + eta[i] * d0_x[i])
            })
            .collect();
        [d0, g1, g2]
    }

    /// Samples of `Σ f̂_j e^{ijx}/√(2π)`.
    pub fn synthesize(&self, f: &BTreeMap<i32, C64>) -> Vec<f64> {
        (0..self.nx)
            .map(|i| {
                let x = 2.0 * PI * i as f64 / self.nx as f64;
                let v: C64 = f.iter().map(|(j, c)| c * C64::from_polar(1.0, *j as f64 * x)).sum();
                v.re / (2.0 * PI).sqrt()
            })
            .collect()
    }

    /// Fourier coefficients `f̂_j` for `|j| ≤ jmax`.
    pub fn analyze(&self, v: &[f64], jmax: i32) -> BTreeMap<i32, C64> {
        let c = self.fft(v);
        let scale = (2.0 * PI).sqrt() / self.nx as f64;
        (-jmax..=jmax)
            .map(|j| {
                let m = if j >= 0 { j as usize } else { (self.nx as i32 + j) as usize };
                (j, c[m] * scale)
            })
            .collect()
    }

    /// `∫ a b dx` by the trapezoidal rule.
    pub fn integrate(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * 2.0 * PI / self.nx as f64
    }
}

/// Real field with the given Fourier coefficients on positive modes.
pub fn real_field(pos: &[(i32, C64)]) -> BTreeMap<i32, C64> {
    let mut f = BTreeMap::new();
    for (j, c) in pos {
        f.insert(*j, *c);
        f.insert(-*j, c.conj());
    }
    f
}
