//! Galerkin-truncated water-waves Hamiltonian in the complex coordinates that
//! diagonalize the linearized flow, up to quartic degree.

mod dn;
mod fieldpoly;
pub mod series;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

pub use dn::{dn_expand, dn_pieces, DnExpansion, MAX_DN_ORDER};
pub use fieldpoly::{FieldKind, FieldPoly, FieldVar};
use series::{Coeff, Series};

use crate::coords::{modes, Coord};
use crate::error::{LabError, Result};
use crate::medium::{gsym_unchecked, msym_unchecked, MediumParams};
use crate::polyham::{FourierField, Poly, PolyHamiltonian, State};

/// Largest degree kept in the model.
pub const MODEL_DEGREE: u32 = 4;

/// Abort threshold on the diagonalization residual of the quadratic part.
pub const QUADRATIC_RESIDUAL_TOL: f64 = 1e-10;

/// Coefficients below this fraction of the largest one are rounding residue.
pub const PRUNE_REL: f64 = 1e-14;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn field(kind: FieldKind, box_j: u32) -> Series<FieldPoly> {
    Series::from_map(modes(box_j).into_iter().map(|j| (j, FieldPoly::var(FieldVar { kind, mode: j }))).collect())
}

/// The separate blocks of `H_γ(η, ψ)` in Fourier coefficients.
#[derive(Clone, Debug)]
pub struct HamiltonianBlocks {
    /// `½∫ψ G_k(η)ψ` for `k = 0, 1, 2`.
    pub kinetic: Vec<FieldPoly>,
    /// `½g∫η²`.
    pub gravity: FieldPoly,
    /// `½κ∫η_x²`.
    pub capillary_quadratic: FieldPoly,
    /// `-⅛κ∫η_x⁴`.
    pub capillary_quartic: FieldPoly,
    /// `(γ/2)∫(-ψ_x η² + (γ/3)η³)`.
    pub vorticity: FieldPoly,
}

impl HamiltonianBlocks {
    pub fn build(params: &MediumParams, box_j: u32) -> Result<Self> {
        params.validate()?;
        if box_j < 2 {
            return Err(LabError::Invalid(format!("box J = {box_j} below 2")));
        }
        let eta = field(FieldKind::Eta, box_j);
        let psi = field(FieldKind::Psi, box_j);
        let half = re(0.5);
        let kinetic = dn_pieces(params, &eta, &psi, MAX_DN_ORDER)
            .iter()
            .map(|g| psi.pair(g).scale(half))
            .collect();
        let gravity = eta.pair(&eta).scale(re(0.5 * params.g));
        let eta_x = eta.dx();
        let eta_x2 = eta_x.product(&eta_x);
        let capillary_quadratic = eta_x.pair(&eta_x).scale(re(0.5 * params.kappa));
        let capillary_quartic = eta_x2.pair(&eta_x2).scale(re(-params.kappa / 8.0));
        let eta2 = eta.product(&eta);
        let mut vorticity = psi.dx().pair(&eta2).scale(re(-0.5 * params.gamma));
        vorticity.add_assign(&eta.pair(&eta2).scale(re(params.gamma * params.gamma / 6.0)));
        Ok(HamiltonianBlocks { kinetic, gravity, capillary_quadratic, capillary_quartic, vorticity })
    }

    pub fn total(&self) -> FieldPoly {
        let mut h = FieldPoly::default();
        for k in &self.kinetic {
            h.add_assign(k);
        }
        for b in [&self.gravity, &self.capillary_quadratic, &self.capillary_quartic, &self.vorticity] {
            h.add_assign(b);
        }
        h
    }
}

/// `H_γ(η, ψ)` with degrees 2..4 on the box: DN expansion to second order and
/// `κ∫√(1+η_x²) = κ∫(½η_x² - ⅛η_x⁴) + const`. Mode 0 never appears.
pub fn build_hamiltonian(params: &MediumParams, box_j: u32) -> Result<FieldPoly> {
    Ok(HamiltonianBlocks::build(params, box_j)?.total())
}

/// Substitutes `ψ = ζ + (γ/2)∂_x^{-1}η`, giving the Hamiltonian in canonical `(η, ζ)`.
pub fn wahlen(h: &FieldPoly, params: &MediumParams) -> Result<FieldPoly> {
    if h.has_kind(FieldKind::Zeta) {
        return Err(LabError::Invalid("Hamiltonian already depends on zeta".into()));
    }
    let half_gamma = 0.5 * params.gamma;
    Ok(h.substitute(|v| match v.kind {
        FieldKind::Psi => {
            let mut p = FieldPoly::var(FieldVar::zeta(v.mode));
            p.add_term(vec![FieldVar::eta(v.mode)], C64::new(0.0, -half_gamma / v.mode as f64));
            p
        }
        _ => FieldPoly::var(v),
    }))
}

/// `η̂_j = M_j (u⁺_j + u⁻_{-j})/√2`, `ζ̂_j = -i M_j^{-1} (u⁺_j - u⁻_{-j})/√2`.
fn complex_substitution(params: &MediumParams, v: FieldVar) -> Poly {
    let m = msym_unchecked(params, v.mode as f64);
    let plus = Poly::coord(Coord::plus(v.mode));
    let minus = Poly::coord(Coord::minus(-v.mode));
    match v.kind {
        FieldKind::Eta => plus.add(&minus).scale(re(m * FRAC_1_SQRT_2)),
        FieldKind::Zeta => plus.sub(&minus).scale(C64::new(0.0, -FRAC_1_SQRT_2 / m)),
        FieldKind::Psi => unreachable!("psi is removed before complexification"),
    }
}

/// Fourier coefficients `(η̂, ζ̂)` of the real fields at a state.
pub fn fields_from_state(params: &MediumParams, z: &State) -> (BTreeMap<i32, C64>, BTreeMap<i32, C64>) {
    let mut eta = BTreeMap::new();
    let mut zeta = BTreeMap::new();
    for j in modes(z.box_j()) {
        let m = msym_unchecked(params, j as f64);
        let (a, b) = (z.get(j), z.get(-j).conj());
        eta.insert(j, (a + b) * m * FRAC_1_SQRT_2);
        zeta.insert(j, (a - b) * C64::new(0.0, -FRAC_1_SQRT_2 / m));
    }
    (eta, zeta)
}

/// Inverse of [`fields_from_state`]: `z_j = (M_j^{-1} η̂_j + i M_j ζ̂_j)/√2`.
pub fn state_from_fields(params: &MediumParams, box_j: u32, eta: &BTreeMap<i32, C64>, zeta: &BTreeMap<i32, C64>) -> State {
    let mut z = State::zeros(box_j);
    for j in modes(box_j) {
        let m = msym_unchecked(params, j as f64);
        let e = eta.get(&j).copied().unwrap_or_default();
        let s = zeta.get(&j).copied().unwrap_or_default();
        z.set(j, (e / m + C64::new(0.0, m) * s) * FRAC_1_SQRT_2);
    }
    z
}

/// How a model was assembled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub dn_order: u32,
    pub max_degree: u32,
    pub transforms: Vec<String>,
    pub dropped: Vec<String>,
    /// Distance of the assembled quadratic part from `Σ Ω_j|u_j|²`, before it is replaced.
    pub quadratic_residual: f64,
    pub pruned_terms: usize,
    pub pruned_max: f64,
    pub terms: usize,
}

/// Model Hamiltonian in the complex coordinates, degrees 2..4.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedModel {
    pub params: MediumParams,
    pub box_j: u32,
    pub hamiltonian: PolyHamiltonian,
    pub provenance: Provenance,
}

/// JSON companion of the Hamiltonian text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelManifest {
    pub params: MediumParams,
    pub box_j: u32,
    pub provenance: Provenance,
}

/// Substitutes `(η, ζ) = 𝓜(u, ū)` and packages the result. The quadratic part must
/// come out as `Σ Ω_j|u_j|²` up to [`QUADRATIC_RESIDUAL_TOL`]; it is then set exactly.
pub fn complexify(h: &FieldPoly, params: &MediumParams, box_j: u32) -> Result<TruncatedModel> {
    if h.has_kind(FieldKind::Psi) {
        return Err(LabError::Invalid("Hamiltonian still depends on psi".into()));
    }
    if h.touches_mode_zero() {
        return Err(LabError::Invalid("Hamiltonian touches mode 0".into()));
    }
    let mut poly = h.to_complex(|v| complex_substitution(params, v));
    let tol = PRUNE_REL * poly.max_abs();
    let small: Vec<f64> = poly.iter().map(|(_, c)| c.norm()).filter(|n| *n <= tol).collect();
    let pruned_max = small.iter().copied().fold(0.0, f64::max);
    poly.prune(tol);
    let ham = PolyHamiltonian::from_poly(box_j, poly)?;
    let target = PolyHamiltonian::quadratic(params, box_j);
    let residual = ham.degree_piece(2).distance(&target);
    if residual > QUADRATIC_RESIDUAL_TOL * target.max_abs().max(1.0) {
        return Err(LabError::Corrupted(format!("quadratic part is not diagonal (residual {residual:e})")));
    }
    let hamiltonian = target.add(&ham.degree_range(3, MODEL_DEGREE))?;
    if ham.max_degree() > MODEL_DEGREE {
        return Err(LabError::Invalid(format!("degree {} above the quartic cap", ham.max_degree())));
    }
    let provenance = Provenance {
        dn_order: MAX_DN_ORDER,
        max_degree: MODEL_DEGREE,
        transforms: vec!["dn_expand".into(), "wahlen".into(), "complexify".into()],
        dropped: vec!["DN expansion orders >= 3".into(), "curvature terms of degree >= 6".into()],
        quadratic_residual: residual,
        pruned_terms: small.len(),
        pruned_max,
        terms: hamiltonian.len(),
    };
    Ok(TruncatedModel { params: *params, box_j, hamiltonian, provenance })
}

impl TruncatedModel {
    /// Full pipeline: expansion, Wahlén shift, complexification.
    pub fn build(params: &MediumParams, box_j: u32) -> Result<Self> {
        let h = build_hamiltonian(params, box_j)?;
        complexify(&wahlen(&h, params)?, params, box_j)
    }

    /// Degrees `2..=max_degree` of the model.
    pub fn truncated(&self, max_degree: u32) -> PolyHamiltonian {
        self.hamiltonian.degree_range(2, max_degree)
    }

    /// `X_H`, with `ż_k = -i ∂_{z̄_k} H`.
    pub fn vector_field(&self) -> FourierField {
        vector_field(self)
    }

    /// Largest coefficient of `{M, H}` with `M = Σ j|u_j|²`.
    pub fn momentum_bracket(&self) -> f64 {
        PolyHamiltonian::momentum(self.box_j).poisson(&self.hamiltonian).map(|b| b.max_abs()).unwrap_or(f64::INFINITY)
    }

    pub fn manifest(&self) -> ModelManifest {
        ModelManifest { params: self.params, box_j: self.box_j, provenance: self.provenance.clone() }
    }

    pub fn to_text(&self) -> String {
        self.hamiltonian.to_text()
    }

    /// Rebuilds a model from its Hamiltonian text and manifest, rechecking the invariants.
    pub fn from_parts(text: &str, manifest: &ModelManifest) -> Result<Self> {
        let hamiltonian = PolyHamiltonian::from_text(text)?;
        if hamiltonian.box_j() != manifest.box_j {
            return Err(LabError::BoxMismatch(manifest.box_j, hamiltonian.box_j()));
        }
        manifest.params.validate()?;
        hamiltonian.validate(1e-12)?;
        let target = PolyHamiltonian::quadratic(&manifest.params, manifest.box_j);
        if hamiltonian.degree_piece(2).distance(&target) > QUADRATIC_RESIDUAL_TOL * target.max_abs().max(1.0) {
            return Err(LabError::Corrupted("quadratic part does not match the parameters".into()));
        }
        Ok(TruncatedModel { params: manifest.params, box_j: manifest.box_j, hamiltonian, provenance: manifest.provenance.clone() })
    }
}

/// `X_H` of the model Hamiltonian.
pub fn vector_field(model: &TruncatedModel) -> FourierField {
    model.hamiltonian.ham_field()
}

/// `G_0` multiplier `𝙶(j)`, with `𝙶(0) = 0`.
pub fn g0_symbol(params: &MediumParams, j: i32) -> f64 {
    gsym_unchecked(params, j as f64)
}
