//! Multi-index combinatorics, small divisors, κ-scans and the non-resonance
//! certificate functions.

mod cert;
mod multiindex;

pub use cert::{
    badset_measure, cert_f, cert_rho, cert_point, lambda_deep, lambda_finite, rho_tau1,
    rho_tau2, BadSetQuery, CertArgs, CertFamily, CertPoint,
};
pub use multiindex::MultiIndex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::medium::{omega_unchecked, Depth, MediumParams};

/// Divisors with modulus below this are treated as exact resonances.
pub const EXACT_ZERO: f64 = 1e-12;

/// Small divisor `Ω(κ)·(α - β)` evaluated in the grouped form
/// `Σ_n c_n ω_n + (γ/2) Σ_n d_n 𝙶(n)/n`, which keeps SAP cancellations exact.
pub fn small_divisor(params: &MediumParams, idx: &MultiIndex) -> f64 {
    DivisorForm::new(idx).eval(params, &|n| omega_unchecked(params, n as f64))
}

/// Integer data of an index needed to evaluate its divisor at any κ.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorForm {
    /// `(n, c_n)` with `c_n = α_n + α_{-n} - β_n - β_{-n} ≠ 0`.
    pub c: Vec<(u32, i64)>,
    /// `(n, d_n)` with `d_n = α_n - α_{-n} - β_n + β_{-n} ≠ 0`.
    pub d: Vec<(u32, i64)>,
}

impl DivisorForm {
    pub fn new(idx: &MultiIndex) -> Self {
        let mut c: std::collections::BTreeMap<u32, i64> = Default::default();
        let mut d: std::collections::BTreeMap<u32, i64> = Default::default();
        for &(j, a, b) in idx.entries() {
            let n = j.unsigned_abs();
            let diff = a as i64 - b as i64;
            *c.entry(n).or_insert(0) += diff;
            *d.entry(n).or_insert(0) += if j > 0 { diff } else { -diff };
        }
        DivisorForm {
            c: c.into_iter().filter(|e| e.1 != 0).collect(),
            d: d.into_iter().filter(|e| e.1 != 0).collect(),
        }
    }

    pub fn eval(&self, params: &MediumParams, omega_n: &dyn Fn(u32) -> f64) -> f64 {
        let mut s = 0.0;
        for &(n, c) in &self.c {
            s += c as f64 * omega_n(n);
        }
        let half = 0.5 * params.gamma;
        if half == 0.0 || self.d.is_empty() {
            return s;
        }
        match params.depth {
            Depth::Infinite => {
                let dsum: i64 = self.d.iter().map(|e| e.1).sum();
                s + half * dsum as f64
            }
            Depth::Finite(_) => {
                let mut t = 0.0;
                for &(n, d) in &self.d {
                    t += d as f64 * params.gsym_over_xi(n as f64);
                }
                s + half * t
            }
        }
    }
}

/// One evaluated divisor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorRecord {
    pub index: MultiIndex,
    pub divisor: f64,
    pub sap: bool,
    pub kappa: f64,
}

/// Non-resonance certificate at one surface tension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kappa: f64,
    pub maxdeg: u32,
    pub box_j: u32,
    pub tau: f64,
    /// `min |divisor|·maxmode^τ` over non-SAP indices.
    pub nu: f64,
    pub worst: DivisorRecord,
}

impl Certificate {
    /// True when the worst divisor is an exact resonance.
    pub fn is_resonant(&self) -> bool {
        self.worst.divisor.abs() < EXACT_ZERO
    }
}

/// All nonempty indices with `|α+β| ≤ maxdeg` and support in `[-J, J] \ {0}`, in
/// lexicographic order. `maxdeg = 0` yields only the empty index.
pub fn enumerate(maxdeg: u32, box_j: u32, momentum_zero: bool) -> impl Iterator<Item = MultiIndex> {
    let mut out = Vec::new();
    if maxdeg > 0 && box_j > 0 {
        let modes = crate::coords::modes(box_j);
        let mut stack: Vec<(i32, u32, u32)> = Vec::new();
        dfs(&modes, 0, maxdeg, box_j as i64, momentum_zero, 0, &mut stack, &mut out);
    } else if maxdeg == 0 {
        out.push(MultiIndex::empty());
    }
    out.into_iter()
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    modes: &[i32],
    start: usize,
    remaining: u32,
    jmax: i64,
    momentum_zero: bool,
    momentum: i64,
    stack: &mut Vec<(i32, u32, u32)>,
    out: &mut Vec<MultiIndex>,
) {
    if (!momentum_zero || momentum == 0) && !stack.is_empty() {
        let map = stack.iter().map(|&(j, a, b)| (j, (a, b))).collect();
        out.push(MultiIndex::from_map(&map).expect("modes are nonzero"));
    }
    if remaining == 0 {
        return;
    }
    for (pos, &j) in modes.iter().enumerate().skip(start) {
        for a in 0..=remaining {
            for b in 0..=(remaining - a) {
                if a + b == 0 {
                    continue;
                }
                let m = momentum + j as i64 * (a as i64 - b as i64);
                let left = (remaining - a - b) as i64;
                if momentum_zero && m.abs() > left * jmax {
                    continue;
                }
                stack.push((j, a, b));
                dfs(modes, pos + 1, remaining - a - b, jmax, momentum_zero, m, stack, out);
                stack.pop();
            }
        }
    }
}

/// Compiled non-SAP index set for repeated evaluation across κ.
pub struct ScanPlan {
    pub maxdeg: u32,
    pub box_j: u32,
    entries: Vec<(MultiIndex, DivisorForm)>,
}

impl ScanPlan {
    pub fn new(maxdeg: u32, box_j: u32) -> Self {
        let entries = enumerate(maxdeg, box_j, true)
            .filter(|i| !i.is_sap())
            .map(|i| {
                let f = DivisorForm::new(&i);
                (i, f)
            })
            .collect();
        ScanPlan { maxdeg, box_j, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Certificate at the given parameters (κ included).
    pub fn certify(&self, params: &MediumParams, tau: f64) -> Option<Certificate> {
        let om: Vec<f64> =
            (0..=self.box_j).map(|n| if n == 0 { 0.0 } else { omega_unchecked(params, n as f64) }).collect();
        let omf = |n: u32| om[n as usize];
        let mut best: Option<(f64, f64, usize)> = None;
        for (k, (idx, form)) in self.entries.iter().enumerate() {
            let d = form.eval(params, &omf);
            let v = d.abs() * (idx.maxmode() as f64).powf(tau);
            if best.is_none_or(|b| v < b.0) {
                best = Some((v, d, k));
            }
        }
        let (nu, d, k) = best?;
        Some(Certificate {
            kappa: params.kappa,
            maxdeg: self.maxdeg,
            box_j: self.box_j,
            tau,
            nu,
            worst: DivisorRecord { index: self.entries[k].0.clone(), divisor: d, sap: false, kappa: params.kappa },
        })
    }
}

/// One certificate per κ in the grid; SAP indices never enter `ν`.
pub fn scan(
    params: &MediumParams,
    grid: &[f64],
    maxdeg: u32,
    box_j: u32,
    tau: f64,
) -> Result<Vec<Certificate>> {
    if grid.is_empty() {
        return Err(LabError::Invalid("empty κ grid".into()));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(LabError::Invalid("κ grid must be sorted".into()));
    }
    let plan = ScanPlan::new(maxdeg, box_j);
    if plan.is_empty() {
        return Err(LabError::Invalid("no non-SAP momentum-zero index in range".into()));
    }
    grid.par_iter()
        .map(|&k| {
            let p = params.with_kappa(k);
            p.validate()?;
            Ok(plan.certify(&p, tau).expect("plan is nonempty"))
        })
        .collect()
}

/// Certificate at a single κ; an exact resonance becomes an error naming the index.
pub fn certify(params: &MediumParams, maxdeg: u32, box_j: u32, tau: f64) -> Result<Certificate> {
    let c = scan(params, &[params.kappa], maxdeg, box_j, tau)?.remove(0);
    if c.is_resonant() {
        return Err(LabError::Resonance { index: c.worst.index.to_string(), value: c.worst.divisor });
    }
    Ok(c)
}

/// Uniform grid `a, a+step, …` up to `b` inclusive (within a relative slack).
pub fn kappa_grid(a: f64, b: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(b >= a) {
        return Err(LabError::Invalid(format!("bad grid {a}:{b}:{step}")));
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| a + i as f64 * step).collect())
}
