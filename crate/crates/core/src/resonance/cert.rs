//! Analytic functions whose sublevel sets bound the resonant surface tensions.

use crate::error::{LabError, Result};
use crate::medium::{stable_tanh, Depth, MediumParams};

/// Evaluation point: `x = (x_0, …, x_A)` and, in finite depth, `t = (t_1, …, t_{A+B})`.
#[derive(Clone, Debug, PartialEq)]
pub struct CertPoint {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
}

/// Point attached to distinct modes `n_1 < … < n_A` (and `m_1, …, m_B` in finite depth):
/// `x_0 = 1/(Σn + Σm)`, `x_a = x_0 √n_a`, `t = √tanh(h n)`.
pub fn cert_point(params: &MediumParams, n: &[u64], m: &[u64]) -> CertPoint {
    let total: u64 = n.iter().sum::<u64>() + m.iter().sum::<u64>();
    let x0 = 1.0 / total as f64;
    let mut x = vec![x0];
    x.extend(n.iter().map(|&k| x0 * (k as f64).sqrt()));
    let t = match params.depth {
        Depth::Infinite => Vec::new(),
        Depth::Finite(h) => n.iter().chain(m.iter()).map(|&k| stable_tanh(h * k as f64).sqrt()).collect(),
    };
    CertPoint { x, t }
}

pub fn lambda_deep(params: &MediumParams, y: f64, x0: f64, kappa: f64) -> Result<f64> {
    let r = kappa * y.powi(6) + params.g * y * y * x0.powi(4) + 0.25 * params.gamma * params.gamma * x0.powi(6);
    radicand(r)
}

pub fn lambda_finite(params: &MediumParams, y: f64, s: f64, x0: f64, kappa: f64) -> Result<f64> {
    let r = kappa * y.powi(6)
        + params.g * y * y * x0.powi(4)
        + 0.25 * params.gamma * params.gamma * s * s * x0.powi(6);
    radicand(r)
}

fn radicand(r: f64) -> Result<f64> {
    if r < 0.0 {
        Err(LabError::Invalid(format!("negative radicand {r:e}")))
    } else {
        Ok(r.sqrt())
    }
}

/// Integer coefficients of a certificate function.
#[derive(Clone, Debug, PartialEq)]
pub enum CertArgs {
    /// `c = (c_0, c_1, …, c_A)` against `x = (x_0, …, x_A)`.
    Deep { c: Vec<i64>, x: Vec<f64> },
    /// `c = (c_1, …, c_A)`, `d = (d_1, …, d_B)`, `t` of length `A + B`.
    Finite { c: Vec<i64>, d: Vec<i64>, x: Vec<f64>, t: Vec<f64> },
}

pub fn cert_f(params: &MediumParams, args: &CertArgs, kappa: f64) -> Result<f64> {
    match args {
        CertArgs::Deep { c, x } => {
            if c.len() != x.len() || x.is_empty() {
                return Err(LabError::Invalid("c and x must have equal nonzero length".into()));
            }
            check_unit(x)?;
            let x0 = x[0];
            let mut s = 0.5 * params.gamma * c[0] as f64 * x0.powi(3);
            for a in 1..x.len() {
                if c[a] != 0 {
                    s += c[a] as f64 * lambda_deep(params, x[a], x0, kappa)?;
                }
            }
            Ok(s)
        }
        CertArgs::Finite { c, d, x, t } => {
            let a_len = c.len();
            if x.len() != a_len + 1 || t.len() != a_len + d.len() {
                return Err(LabError::Invalid("inconsistent finite-depth certificate lengths".into()));
            }
            check_unit(x)?;
            check_unit(t)?;
            let x0 = x[0];
            let mut s = 0.0;
            for a in 0..a_len {
                if c[a] != 0 {
                    s += c[a] as f64 * t[a] * lambda_finite(params, x[a + 1], t[a], x0, kappa)?;
                }
            }
            for (b, &db) in d.iter().enumerate() {
                let tb = t[a_len + b];
                s += 0.5 * params.gamma * db as f64 * tb * tb * x0.powi(3);
            }
            Ok(s)
        }
    }
}

fn check_unit(v: &[f64]) -> Result<()> {
    if v.iter().any(|a| a.abs() > 1.0) {
        Err(LabError::Invalid("certificate arguments must lie in [-1, 1]".into()))
    } else {
        Ok(())
    }
}

/// Vandermonde-type weight. Deep water: `∏ x_a ∏_{a<b}(x_a² - x_b²)`.
/// Finite depth uses the `t`-dependent pair factors.
pub fn cert_rho(params: &MediumParams, point: &CertPoint) -> f64 {
    let x = &point.x;
    let a_len = x.len().saturating_sub(1);
    if point.t.is_empty() {
        let mut r: f64 = x.iter().product();
        for a in 1..=a_len {
            for b in (a + 1)..=a_len {
                r *= x[a] * x[a] - x[b] * x[b];
            }
        }
        r
    } else {
        let t = &point.t;
        let x0 = x[0];
        let mut r = x0;
        for a in 1..=a_len {
            r *= x[a] * t[a - 1];
        }
        let w = |a: usize| {
            params.g * x[a] * x[a] * x0.powi(4) + 0.25 * params.gamma * params.gamma * t[a - 1] * t[a - 1] * x0.powi(6)
        };
        for a in 1..=a_len {
            for b in (a + 1)..=a_len {
                r *= w(a) * x[b].powi(6) - w(b) * x[a].powi(6);
            }
        }
        r
    }
}

/// `τ_1 = A + 1 + 2·binom(A, 2)`.
pub fn rho_tau1(a: usize) -> usize {
    a + 1 + a * a.saturating_sub(1)
}

/// `τ_2 = A + 1 + 12·binom(A, 2)`.
pub fn rho_tau2(a: usize) -> usize {
    a + 1 + 6 * a * a.saturating_sub(1)
}

/// One `(c, n)` family, plus `(d, m)` in finite depth.
#[derive(Clone, Debug, PartialEq)]
pub struct CertFamily {
    pub c0: i64,
    pub c: Vec<i64>,
    pub n: Vec<u64>,
    pub d: Vec<i64>,
    pub m: Vec<u64>,
}

impl CertFamily {
    pub fn deep(c0: i64, c: Vec<i64>, n: Vec<u64>) -> Self {
        CertFamily { c0, c, n, d: Vec::new(), m: Vec::new() }
    }

    fn args(&self, params: &MediumParams) -> (CertArgs, CertPoint) {
        let pt = cert_point(params, &self.n, &self.m);
        let args = match params.depth {
            Depth::Infinite => {
                let mut c = vec![self.c0];
                c.extend_from_slice(&self.c);
                CertArgs::Deep { c, x: pt.x.clone() }
            }
            Depth::Finite(_) => CertArgs::Finite {
                c: self.c.clone(),
                d: self.d.clone(),
                x: pt.x.clone(),
                t: pt.t.clone(),
            },
        };
        (args, pt)
    }
}

/// Sublevel-set query over a κ interval.
#[derive(Clone, Debug)]
pub struct BadSetQuery {
    pub interval: (f64, f64),
    pub alpha: f64,
    pub big_n: u32,
    pub grid_points: usize,
    pub families: Vec<CertFamily>,
}

/// Grid estimate of `meas ∪ { κ : |f(x(n), κ)| ≤ α |ρ(x(n))|^N }`.
pub fn badset_measure(params: &MediumParams, q: &BadSetQuery) -> Result<f64> {
    let (k1, k2) = q.interval;
    if !(k1 > 0.0 && k2 > k1) {
        return Err(LabError::Invalid("κ interval must satisfy 0 < κ1 < κ2".into()));
    }
    if !(q.alpha > 0.0 && q.alpha < 1.0) {
        return Err(LabError::Invalid("α must lie in (0, 1)".into()));
    }
    if q.grid_points < 2 {
        return Err(LabError::Invalid("need at least two grid points".into()));
    }
    let prepared: Vec<(CertArgs, f64)> = q
        .families
        .iter()
        .map(|f| {
            let (args, pt) = f.args(params);
            let thr = q.alpha * cert_rho(params, &pt).abs().powi(q.big_n as i32);
            (args, thr)
        })
        .collect();
    let n = q.grid_points;
    let mut bad = 0usize;
    for i in 0..n {
        let kappa = k1 + (k2 - k1) * (i as f64 + 0.5) / n as f64;
        for (args, thr) in &prepared {
            if cert_f(params, args, kappa)?.abs() <= *thr {
                bad += 1;
                break;
            }
        }
    }
    Ok((k2 - k1) * bad as f64 / n as f64)
}
