//! Physical constants and the linear dispersion law.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Fluid depth. Infinite depth is its own branch so that `𝙶(ξ) = |ξ|` holds exactly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Depth {
    Finite(f64),
    Infinite,
}

impl Depth {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Depth::Infinite)
    }
}

impl std::fmt::Display for Depth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Depth::Finite(h) => write!(f, "{h}"),
            Depth::Infinite => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Depth {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinite") {
            return Ok(Depth::Infinite);
        }
        let h: f64 = t
            .parse()
            .map_err(|_| LabError::Invalid(format!("depth `{s}` is not a number or `inf`")))?;
        Ok(Depth::Finite(h))
    }
}

/// Gravity `g`, surface tension `κ`, vorticity `γ` and depth `h`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    pub g: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub depth: Depth,
}

impl MediumParams {
    pub fn new(g: f64, kappa: f64, gamma: f64, depth: Depth) -> Result<Self> {
        let p = MediumParams { g, kappa, gamma, depth };
        p.validate()?;
        Ok(p)
    }

    pub fn deep(g: f64, kappa: f64, gamma: f64) -> Self {
        MediumParams { g, kappa, gamma, depth: Depth::Infinite }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g > 0.0 && self.g.is_finite()) {
            return Err(LabError::Invalid(format!("gravity must be positive, got {}", self.g)));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(LabError::Invalid(format!(
                "surface tension must be positive, got {}",
                self.kappa
            )));
        }
        if !self.gamma.is_finite() {
            return Err(LabError::Invalid("vorticity must be finite".into()));
        }
        if let Depth::Finite(h) = self.depth {
            if !(h > 0.0 && h.is_finite()) {
                return Err(LabError::Invalid(format!("depth must be positive, got {h}")));
            }
        }
        Ok(())
    }

    pub fn with_kappa(&self, kappa: f64) -> Self {
        MediumParams { kappa, ..*self }
    }

    /// `𝙶(ξ)/ξ`: `tanh(hξ)` or `sign(ξ)`.
    pub fn gsym_over_xi(&self, xi: f64) -> f64 {
        match self.depth {
            Depth::Infinite => xi.signum(),
            Depth::Finite(h) => stable_tanh(h * xi),
        }
    }
}

/// `tanh` saturated to `±1` once `1 - tanh` drops below half an ulp of one.
pub fn stable_tanh(x: f64) -> f64 {
    // 1 - tanh(x) = 2 e^{-2x} / (1 + e^{-2x}) < 2^-54 for x > 19.06.
    if x > 19.5 {
        1.0
    } else if x < -19.5 {
        -1.0
    } else {
        x.tanh()
    }
}

/// One row of the dispersion table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispersionSample {
    pub mode: i32,
    pub omega: f64,
    #[serde(rename = "Omega")]
    pub big_omega: f64,
    pub gsym: f64,
    pub msym: f64,
}

fn check_xi(xi: f64) -> Result<()> {
    if xi == 0.0 {
        Err(LabError::ZeroMode)
    } else {
        Ok(())
    }
}

/// Symbol of the flat Dirichlet-Neumann operator.
pub fn gsym(params: &MediumParams, xi: f64) -> Result<f64> {
    check_xi(xi)?;
    Ok(gsym_unchecked(params, xi))
}

#[inline]
pub(crate) fn gsym_unchecked(params: &MediumParams, xi: f64) -> f64 {
    match params.depth {
        Depth::Infinite => xi.abs(),
        Depth::Finite(h) => {
            let a = xi.abs();
            a * stable_tanh(h * a)
        }
    }
}

/// `g + κξ² + (γ²/4)𝙶(ξ)/ξ²`.
fn stiffness(params: &MediumParams, xi: f64, g_xi: f64) -> f64 {
    params.g + params.kappa * xi * xi + 0.25 * params.gamma * params.gamma * g_xi / (xi * xi)
}

pub fn omega(params: &MediumParams, j: i32) -> Result<f64> {
    check_xi(j as f64)?;
    Ok(omega_unchecked(params, j as f64))
}

#[inline]
pub(crate) fn omega_unchecked(params: &MediumParams, xi: f64) -> f64 {
    let gx = gsym_unchecked(params, xi);
    (gx * stiffness(params, xi, gx)).sqrt()
}

/// `Ω_j = ω_j + (γ/2)𝙶(j)/j`.
pub fn big_omega(params: &MediumParams, j: i32) -> Result<f64> {
    check_xi(j as f64)?;
    Ok(big_omega_unchecked(params, j))
}

#[inline]
pub(crate) fn big_omega_unchecked(params: &MediumParams, j: i32) -> f64 {
    let xi = j as f64;
    omega_unchecked(params, xi) + 0.5 * params.gamma * params.gsym_over_xi(xi)
}

pub fn msym(params: &MediumParams, xi: f64) -> Result<f64> {
    check_xi(xi)?;
    Ok(msym_unchecked(params, xi))
}

pub(crate) fn msym_unchecked(params: &MediumParams, xi: f64) -> f64 {
    let gx = gsym_unchecked(params, xi);
    (gx / stiffness(params, xi, gx)).sqrt().sqrt()
}

pub fn sample(params: &MediumParams, j: i32) -> Result<DispersionSample> {
    check_xi(j as f64)?;
    let xi = j as f64;
    Ok(DispersionSample {
        mode: j,
        omega: omega_unchecked(params, xi),
        big_omega: big_omega_unchecked(params, j),
        gsym: gsym_unchecked(params, xi),
        msym: msym_unchecked(params, xi),
    })
}

/// `Ω_j` for every mode of the box `[-J, J] \ {0}`, keyed by mode.
pub fn omega_table(params: &MediumParams, box_j: u32) -> std::collections::BTreeMap<i32, f64> {
    let b = box_j as i32;
    (-b..=b)
        .filter(|&j| j != 0)
        .map(|j| (j, big_omega_unchecked(params, j)))
        .collect()
}

/// Largest `|Ω_j|` over the box.
pub fn max_abs_omega(params: &MediumParams, box_j: u32) -> f64 {
    omega_table(params, box_j).values().fold(0.0_f64, |m, v| m.max(v.abs()))
}
