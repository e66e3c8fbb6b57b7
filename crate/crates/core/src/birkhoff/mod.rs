//! Hamiltonian Birkhoff normal form by Lie series: each step removes the non-SAP
//! part of one degree with a generator solving the homological equation.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::medium::{max_abs_omega, MediumParams};
use crate::plurimap::{approx_flow, symplectic_up_to_n, PluriMap, SymplecticReport, TauField};
use crate::polyham::{poisson_poly, Poly, PolyHamiltonian};
use crate::resonance::small_divisor;

/// Tolerance for the SAP and bracket checks of a normal form.
pub const SAP_TOL: f64 = 1e-10;

/// Relative tolerance for the diagonal quadratic part of the input.
pub const QUADRATIC_TOL: f64 = 1e-10;

/// Default small-divisor threshold `1e-8·max|Ω_j|` over the box.
pub fn default_threshold(params: &MediumParams, box_j: u32) -> f64 {
    1e-8 * max_abs_omega(params, box_j)
}

/// Generator of `{χ, H_2} = -F` for the non-SAP monomials of `term`:
/// `χ_m = F_m / (i (α-β)·Ω)`. SAP monomials get no generator coefficient.
pub fn homological_solve(term: &PolyHamiltonian, params: &MediumParams, threshold: f64) -> Result<PolyHamiltonian> {
    let mut chi = Poly::zero();
    for (m, c) in term.iter() {
        if m.is_sap() {
            continue;
        }
        let d = small_divisor(params, m);
        if !(d.abs() > threshold) {
            return Err(LabError::SmallDivisor { index: m.to_string(), value: d, step: 0 });
        }
        chi.add_term(m.clone(), c / C64::new(0.0, d));
    }
    PolyHamiltonian::from_poly(term.box_j(), chi)
}

/// Smallest `|divisor|` over the non-SAP monomials of `term`, with its index.
pub fn min_divisor(term: &PolyHamiltonian, params: &MediumParams) -> Option<(String, f64)> {
    term.iter()
        .filter(|(m, _)| !m.is_sap())
        .map(|(m, _)| (m.to_string(), small_divisor(params, m)))
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
}

/// `e^{ad_χ} H = Σ_k ad_χ^k H / k!` with `ad_χ H = {χ, H}`, truncated at degree `cap`.
/// Returns the result and the largest coefficient dropped by the cap.
pub fn lie_transform(h: &PolyHamiltonian, chi: &PolyHamiltonian, cap: u32) -> Result<(PolyHamiltonian, f64)> {
    if h.box_j() != chi.box_j() {
        return Err(LabError::BoxMismatch(h.box_j(), chi.box_j()));
    }
    if chi.iter().any(|(m, _)| m.len() < 3) {
        return Err(LabError::Invalid("generator must have degree at least 3".into()));
    }
    let (mut acc, mut dropped) = h.poly().truncate(cap);
    let mut term = acc.clone();
    let mut k = 1.0;
    while !term.is_zero() && !chi.is_zero() {
        let full = poisson_poly(chi.poly(), &term, None);
        let (t, d) = full.truncate(cap);
        dropped = dropped.max(d / k);
        term = t.scale(C64::new(1.0 / k, 0.0));
        acc.add_assign(&term);
        k += 1.0;
    }
    Ok((PolyHamiltonian::from_poly(h.box_j(), acc)?, dropped))
}

/// Options of [`normal_form`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalFormOptions {
    /// Normal-form order `N`: degrees `3..=N+2` are normalized.
    pub order: u32,
    /// Small-divisor threshold; `None` for [`default_threshold`].
    pub threshold: Option<f64>,
    /// Largest degree kept in intermediate products, at least `N + 2`.
    pub tail_cap: Option<u32>,
    /// Build the composed transformation and check its symplecticity.
    pub build_map: bool,
}

impl NormalFormOptions {
    pub fn new(order: u32) -> Self {
        NormalFormOptions { order, threshold: None, tail_cap: None, build_map: true }
    }
}

/// Record of one normalization step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: u32,
    pub degree: u32,
    /// Number of non-SAP monomials removed.
    pub eliminated: usize,
    pub min_divisor: Option<f64>,
    pub min_divisor_index: Option<String>,
    pub generator_max: f64,
    /// Largest coefficient dropped by the degree cap during the Lie transform.
    pub dropped_mass: f64,
}

#[derive(Clone, Debug)]
pub struct NormalFormResult {
    pub params: MediumParams,
    pub box_j: u32,
    pub order: u32,
    pub tail_cap: u32,
    pub threshold: f64,
    /// Transformed Hamiltonian up to `tail_cap`.
    pub hamiltonian: PolyHamiltonian,
    pub generators: Vec<PolyHamiltonian>,
    pub steps: Vec<StepRecord>,
    /// Largest coefficient of the input above `tail_cap`, dropped on entry.
    pub input_dropped: f64,
    /// `D = Φ_{χ_N} ∘ … ∘ Φ_{χ_1}` up to operator degree `N`, with `H^NF ∘ D = H`.
    pub transformation: Option<PluriMap>,
    pub symplectic: Option<SymplecticReport>,
}

/// Machine-readable summary of a normal form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalFormManifest {
    pub params: MediumParams,
    pub box_j: u32,
    pub order: u32,
    pub tail_cap: u32,
    pub threshold: f64,
    pub steps: Vec<StepRecord>,
    pub input_dropped: f64,
    pub total_dropped: f64,
    pub sap: SapReport,
    pub symplectic: Option<SymplecticReport>,
    pub terms: usize,
    pub tail_terms: usize,
}

impl NormalFormResult {
    /// Degrees `≤ N + 2`.
    pub fn normal_form(&self) -> PolyHamiltonian {
        self.hamiltonian.degree_range(0, self.order + 2)
    }

    /// Degrees `> N + 2` (not trusted beyond the cap).
    pub fn tail(&self) -> PolyHamiltonian {
        self.hamiltonian.degree_range(self.order + 3, u32::MAX)
    }

    pub fn manifest(&self) -> NormalFormManifest {
        let total = self.steps.iter().map(|s| s.dropped_mass).fold(self.input_dropped, f64::max);
        NormalFormManifest {
            params: self.params,
            box_j: self.box_j,
            order: self.order,
            tail_cap: self.tail_cap,
            threshold: self.threshold,
            steps: self.steps.clone(),
            input_dropped: self.input_dropped,
            total_dropped: total,
            sap: verify_sap(self),
            symplectic: self.symplectic.clone(),
            terms: self.normal_form().len(),
            tail_terms: self.tail().len(),
        }
    }
}

/// Normalizes degrees `3..=N+2` of `h`, whose quadratic part must be `Σ Ω_j |z_j|²`.
pub fn normal_form(h: &PolyHamiltonian, params: &MediumParams, opts: &NormalFormOptions) -> Result<NormalFormResult> {
    let box_j = h.box_j();
    let n = opts.order;
    if n == 0 {
        return Err(LabError::Invalid("normal-form order must be at least 1".into()));
    }
    let cap = opts.tail_cap.unwrap_or(n + 2);
    if cap < n + 2 {
        return Err(LabError::Invalid(format!("tail cap {cap} below N + 2 = {}", n + 2)));
    }
    let threshold = opts.threshold.unwrap_or_else(|| default_threshold(params, box_j));
    let h2 = PolyHamiltonian::quadratic(params, box_j);
    let quad_err = h.degree_piece(2).distance(&h2);
    if quad_err > QUADRATIC_TOL * h2.max_abs().max(1.0) {
        return Err(LabError::Invalid(format!("quadratic part is not Σ Ω_j|z_j|² (defect {quad_err:e})")));
    }
    if h.degrees().iter().any(|&d| d < 2) {
        return Err(LabError::Invalid("Hamiltonian has terms of degree below 2".into()));
    }
    let (mut cur, input_dropped) = h.truncate(cap);
    let mut generators = Vec::new();
    let mut steps = Vec::new();
    for p in 1..=n {
        let d = p + 2;
        let (_, non) = cur.degree_piece(d).sap_split();
        let md = min_divisor(&non, params);
        let chi = homological_solve(&non, params, threshold).map_err(|e| match e {
            LabError::SmallDivisor { index, value, .. } => LabError::SmallDivisor { index, value, step: p as usize },
            other => other,
        })?;
        let (next, dropped) = lie_transform(&cur, &chi, cap)?;
        steps.push(StepRecord {
            step: p,
            degree: d,
            eliminated: non.len(),
            min_divisor: md.as_ref().map(|x| x.1),
            min_divisor_index: md.map(|x| x.0),
            generator_max: chi.max_abs(),
            dropped_mass: dropped,
        });
        generators.push(chi);
        cur = next;
    }
    let (transformation, symplectic) = if opts.build_map {
        let mut d = PluriMap::identity(box_j);
        for chi in &generators {
            if chi.is_zero() {
                continue;
            }
            let step = approx_flow(&TauField::hamiltonian(chi)?, n)?;
            d = step.compose(&d, n)?;
        }
        let rep = symplectic_up_to_n(&d, n)?;
        (Some(d), Some(rep))
    } else {
        (None, None)
    };
    Ok(NormalFormResult {
        params: *params,
        box_j,
        order: n,
        tail_cap: cap,
        threshold,
        hamiltonian: cur,
        generators,
        steps,
        input_dropped,
        transformation,
        symplectic,
    })
}

/// Result of [`verify_sap`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SapReport {
    /// Largest coefficient of `{J_n, H^NF_{≤N+2}}` over `n ≤ J`.
    pub bracket_max: f64,
    /// Largest non-SAP coefficient in degrees `3..=N+2`.
    pub non_sap_max: f64,
    pub passed: bool,
}

/// Recomputes `{J_n, H^NF_{≤N+2}}` for every `n ≤ J`.
pub fn verify_sap(result: &NormalFormResult) -> SapReport {
    let nf = result.normal_form();
    let bracket_max = nf.superaction_bracket_norm();
    let non_sap_max = nf.degree_range(3, result.order + 2).sap_split().1.max_abs();
    SapReport { bracket_max, non_sap_max, passed: bracket_max < SAP_TOL && non_sap_max < SAP_TOL }
}

#[cfg(test)]
mod tests;
