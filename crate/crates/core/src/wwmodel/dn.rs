//! Expansion `G(η) = G_0 + G_1(η) + G_2(η) + …` of the Dirichlet-Neumann operator:
//!
//! - `G_1(η) = DηD - G_0ηG_0`
//! - `G_2(η) = -½(G_0η²D² + D²η²G_0 - 2G_0ηG_0ηG_0)`
//!
//! with `D = -i∂_x` and `G_0` the multiplier `𝙶(j)`.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::series::{Coeff, Series};
use crate::error::{LabError, Result};
use crate::medium::{gsym_unchecked, MediumParams};

/// Largest supported expansion order.
pub const MAX_DN_ORDER: u32 = 2;

/// `[G_0ψ, G_1(η)ψ, …]` up to `order`, over any coefficient ring.
pub fn dn_pieces<T: Coeff>(params: &MediumParams, eta: &Series<T>, psi: &Series<T>, order: u32) -> Vec<Series<T>> {
    let g0 = |j: i32| C64::new(gsym_unchecked(params, j as f64), 0.0);
    let d2 = |j: i32| C64::new((j as f64) * (j as f64), 0.0);
    let g0psi = psi.multiplier(g0);
    let mut out = vec![g0psi.clone()];
    if order >= 1 {
        let a = eta.product(&psi.d()).d();
        let b = eta.product(&g0psi).multiplier(g0);
        out.push(a.add(&b.scale(C64::new(-1.0, 0.0))));
    }
    if order >= 2 {
        let eta2 = eta.product(eta);
        let a = eta.product(&eta.product(&g0psi).multiplier(g0)).multiplier(g0);
        let b = eta2.product(&psi.multiplier(d2)).multiplier(g0);
        let c = eta2.product(&g0psi).multiplier(d2);
        out.push(a.add(&b.add(&c).scale(C64::new(-0.5, 0.0))));
    }
    out
}

/// Numerical expansion of `G(η)ψ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DnExpansion {
    pub order: u32,
    pub box_j: u32,
    /// `G_k(η)ψ` for `k = 0..=order`, as `(mode, coefficient)` lists.
    pub pieces: Vec<Vec<(i32, C64)>>,
    /// Largest coefficient beyond `2J`, where the product support overflows the doubled box.
    pub overflow: f64,
}

impl DnExpansion {
    /// `Σ_k G_k(η)ψ`.
    pub fn total(&self) -> BTreeMap<i32, C64> {
        let mut out = BTreeMap::new();
        for piece in &self.pieces {
            for (j, c) in piece {
                *out.entry(*j).or_insert(C64::new(0.0, 0.0)) += c;
            }
        }
        out
    }

    pub fn overflows(&self) -> bool {
        self.overflow > 0.0
    }
}

fn check_support(name: &str, f: &BTreeMap<i32, C64>, box_j: u32) -> Result<()> {
    if let Some((j, _)) = f.iter().find(|(j, c)| j.unsigned_abs() > box_j && c.norm() > 0.0) {
        return Err(LabError::Invalid(format!("{name} has mode {j} outside the box J = {box_j}")));
    }
    Ok(())
}

/// Expands `G(η)ψ` to `order ≤ 2` for `η`, `ψ` in the box; `η` must be real with zero mean.
pub fn dn_expand(
    params: &MediumParams,
    eta: &BTreeMap<i32, C64>,
    psi: &BTreeMap<i32, C64>,
    order: u32,
    box_j: u32,
) -> Result<DnExpansion> {
    params.validate()?;
    if order > MAX_DN_ORDER {
        return Err(LabError::Invalid(format!("expansion order {order} above {MAX_DN_ORDER}")));
    }
    check_support("eta", eta, box_j)?;
    check_support("psi", psi, box_j)?;
    if eta.get(&0).is_some_and(|c| c.norm() > 0.0) {
        return Err(LabError::Invalid("eta must have zero mean".into()));
    }
    let scale = eta.values().fold(0.0_f64, |m, c| m.max(c.norm())).max(f64::MIN_POSITIVE);
    for (j, c) in eta {
        let partner = eta.get(&-j).copied().unwrap_or_default();
        if (c - partner.conj()).norm() > 1e-12 * scale {
            return Err(LabError::Invalid(format!("eta is not real at mode {j}")));
        }
    }
    let e = Series::from_map(eta.clone());
    let p = Series::from_map(psi.clone());
    let pieces = dn_pieces(params, &e, &p, order);
    let limit = 2 * box_j;
    let overflow = pieces
        .iter()
        .flat_map(|s| s.iter().filter(|(j, _)| j.unsigned_abs() > limit).map(|(_, c)| c.norm()).collect::<Vec<_>>())
        .fold(0.0, f64::max);
    Ok(DnExpansion {
        order,
        box_j,
        pieces: pieces.into_iter().map(|s| s.into_map().into_iter().collect()).collect(),
        overflow,
    })
}
