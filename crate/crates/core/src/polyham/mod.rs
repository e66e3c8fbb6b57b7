//! Polynomial Hamiltonians and Fourier vector fields on the truncated phase space.

mod field;
mod poly;
mod state;
pub(crate) mod text;

pub use field::{CompiledField, FourierField};
pub use poly::{CompiledPoly, Poly};
pub use state::State;

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::coords::{all_coords, modes, Coord, Side};
use crate::error::{LabError, Result};
use crate::medium::{big_omega_unchecked, MediumParams};
use crate::resonance::MultiIndex;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Relative threshold on the imaginary residue of an evaluated Hamiltonian.
pub const REALITY_TOL: f64 = 1e-12;

/// Polynomial Hamiltonian on the box `[-J, J] \ {0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyHamiltonian {
    box_j: u32,
    poly: Poly,
}

impl PolyHamiltonian {
    pub fn zero(box_j: u32) -> Self {
        PolyHamiltonian { box_j, poly: Poly::zero() }
    }

    /// Wraps a polynomial; every monomial must lie in the box.
    pub fn from_poly(box_j: u32, poly: Poly) -> Result<Self> {
        if let Some((m, _)) = poly.iter().find(|(m, _)| !m.in_box(box_j)) {
            return Err(LabError::Invalid(format!("monomial {m} outside box {box_j}")));
        }
        Ok(PolyHamiltonian { box_j, poly })
    }

    pub(crate) fn from_poly_unchecked(box_j: u32, poly: Poly) -> Self {
        PolyHamiltonian { box_j, poly }
    }

    /// `Σ_j Ω_j |z_j|²`.
    pub fn quadratic(params: &MediumParams, box_j: u32) -> Self {
        let mut p = Poly::zero();
        for k in modes(box_j) {
            let m = MultiIndex::from_coords(&[Coord::plus(k), Coord::minus(k)]).expect("nonzero mode");
            p.add_term(m, C64::new(big_omega_unchecked(params, k), 0.0));
        }
        PolyHamiltonian { box_j, poly: p }
    }

    /// Super-action `J_n = |z_n|² + |z_{-n}|²`.
    pub fn superaction(box_j: u32, n: u32) -> Self {
        let mut p = Poly::zero();
        for k in [n as i32, -(n as i32)] {
            let m = MultiIndex::from_coords(&[Coord::plus(k), Coord::minus(k)]).expect("nonzero mode");
            p.add_term(m, C64::new(1.0, 0.0));
        }
        PolyHamiltonian { box_j, poly: p }
    }

    /// Momentum `Σ_j j |z_j|²`.
    pub fn momentum(box_j: u32) -> Self {
        let mut p = Poly::zero();
        for k in modes(box_j) {
            let m = MultiIndex::from_coords(&[Coord::plus(k), Coord::minus(k)]).expect("nonzero mode");
            p.add_term(m, C64::new(k as f64, 0.0));
        }
        PolyHamiltonian { box_j, poly: p }
    }

    pub fn box_j(&self) -> u32 {
        self.box_j
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn len(&self) -> usize {
        self.poly.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, m: &MultiIndex) -> C64 {
        self.poly.get(m)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &C64)> {
        self.poly.iter()
    }

    pub fn max_degree(&self) -> u32 {
        self.poly.max_degree().unwrap_or(0)
    }

    /// Degrees present, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.poly.iter().map(|(m, _)| m.len()).collect();
        v.dedup();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn degree_piece(&self, d: u32) -> Self {
        PolyHamiltonian { box_j: self.box_j, poly: self.poly.degree_piece(d) }
    }

    pub fn degree_range(&self, lo: u32, hi: u32) -> Self {
        PolyHamiltonian { box_j: self.box_j, poly: self.poly.degree_range(lo, hi) }
    }

    fn same_box(&self, other: &Self) -> Result<()> {
        if self.box_j != other.box_j {
            Err(LabError::BoxMismatch(self.box_j, other.box_j))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_box(other)?;
        Ok(PolyHamiltonian { box_j: self.box_j, poly: self.poly.add(&other.poly) })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_box(other)?;
        Ok(PolyHamiltonian { box_j: self.box_j, poly: self.poly.sub(&other.poly) })
    }

    pub fn scale(&self, s: f64) -> Self {
        PolyHamiltonian { box_j: self.box_j, poly: self.poly.scale(C64::new(s, 0.0)) }
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        PolyHamiltonian { box_j: self.box_j, poly: self.poly.scale(s) }
    }

    /// Terms of degree `≤ maxdeg` and the largest dropped coefficient modulus.
    pub fn truncate(&self, maxdeg: u32) -> (Self, f64) {
        let (p, d) = self.poly.truncate(maxdeg);
        (PolyHamiltonian { box_j: self.box_j, poly: p }, d)
    }

    /// Largest violation of `conj(c(α, β)) = c(β, α)`.
    pub fn reality_defect(&self) -> f64 {
        self.poly.reality_defect()
    }

    /// Momenta of monomials that are not momentum-zero.
    pub fn momentum_violations(&self) -> Vec<(MultiIndex, i64)> {
        self.poly.iter().filter(|(m, _)| m.momentum() != 0).map(|(m, _)| (m.clone(), m.momentum())).collect()
    }

    /// Checks reality (relative to the largest coefficient) and momentum.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let scale = self.poly.max_abs().max(1.0);
        let d = self.reality_defect();
        if d > tol * scale {
            return Err(LabError::Corrupted(format!("reality defect {d:e}")));
        }
        if let Some((m, p)) = self.momentum_violations().first() {
            return Err(LabError::Corrupted(format!("monomial {m} has momentum {p}")));
        }
        Ok(())
    }

    /// Value at a real-to-real state; an imaginary residue above `1e-12` times the
    /// sum of term magnitudes is reported as corruption.
    pub fn evaluate(&self, z: &State) -> Result<f64> {
        if z.box_j() > self.box_j {
            return Err(LabError::BoxMismatch(self.box_j, z.box_j()));
        }
        let u = z.to_coords(self.box_j);
        let mut s = C64::new(0.0, 0.0);
        let mut mag = 0.0;
        for (m, c) in self.poly.iter() {
            let mut t = *c;
            for (co, e) in m.factors() {
                t *= u[co.dense_index(self.box_j)].powu(e);
            }
            mag += t.norm();
            s += t;
        }
        if s.im.abs() > REALITY_TOL * mag {
            return Err(LabError::Corrupted(format!("imaginary residue {:e} (magnitude {:e})", s.im, mag)));
        }
        Ok(s.re)
    }

    /// Value at an arbitrary coordinate vector (no reality assumption).
    pub fn evaluate_coords(&self, u: &[C64]) -> C64 {
        self.poly.eval(u, self.box_j)
    }

    /// `(∇H)^σ_k = ∂_{u^σ_{-k}} H`.
    pub fn gradient(&self) -> FourierField {
        let mut f = FourierField::zero(self.box_j);
        for c in all_coords(self.box_j) {
            f.set(c, self.poly.derivative(c.paired()));
        }
        f
    }

    /// `(X_H)^σ_k = -iσ ∂_{u^{-σ}_k} H`, so `ż_k = -i ∂_{z̄_k} H`.
    pub fn ham_field(&self) -> FourierField {
        let mut f = FourierField::zero(self.box_j);
        for c in all_coords(self.box_j) {
            let s = -I * c.side.sign() as f64;
            f.set(c, self.poly.derivative(c.conj()).scale(s));
        }
        f
    }

    /// Hamiltonian whose field is `x`, by the Euler-formula inversion
    /// `H_d = (1/d) Σ_{k,σ} u^{-σ}_k · iσ X^σ_k`. No Hamiltonian check is made;
    /// compare `ham_field` of the result with `x` for that.
    pub fn from_field(x: &FourierField) -> Self {
        let mut p = Poly::zero();
        for (c, comp) in x.iter() {
            let s = I * c.side.sign() as f64;
            for (m, v) in comp.iter() {
                let d = m.len() + 1;
                p.add_term(m.mul_coord(c.conj()), v * s / d as f64);
            }
        }
        PolyHamiltonian { box_j: x.box_j(), poly: p }
    }

    /// `{F, G} = i Σ_j (∂_{z̄_j}F ∂_{z_j}G - ∂_{z_j}F ∂_{z̄_j}G)`; terms above `cap` dropped.
    pub fn poisson_capped(&self, other: &Self, cap: Option<u32>) -> Result<Self> {
        self.same_box(other)?;
        Ok(PolyHamiltonian { box_j: self.box_j, poly: poisson_poly(&self.poly, &other.poly, cap) })
    }

    pub fn poisson(&self, other: &Self) -> Result<Self> {
        self.poisson_capped(other, None)
    }

    /// `(SAP part, non-SAP part)`.
    pub fn sap_split(&self) -> (Self, Self) {
        let sap = self.poly.filter(|m| m.is_sap());
        let non = self.poly.filter(|m| !m.is_sap());
        (PolyHamiltonian { box_j: self.box_j, poly: sap }, PolyHamiltonian { box_j: self.box_j, poly: non })
    }

    /// Largest coefficient of `{J_n, H}` over `n = 1..=J`.
    pub fn superaction_bracket_norm(&self) -> f64 {
        (1..=self.box_j)
            .map(|n| {
                let jn = PolyHamiltonian::superaction(self.box_j, n);
                poisson_poly(&jn.poly, &self.poly, None).max_abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.poly.max_abs()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.poly.distance(&other.poly)
    }

    pub fn to_text(&self) -> String {
        text::ham_to_text(self)
    }

    pub fn from_text(s: &str) -> Result<Self> {
        text::ham_from_text(s)
    }
}

/// Poisson bracket of raw polynomials.
pub fn poisson_poly(f: &Poly, g: &Poly, cap: Option<u32>) -> Poly {
    let mut by_coord: BTreeMap<Coord, Vec<(&MultiIndex, C64)>> = BTreeMap::new();
    for (m, c) in g.iter() {
        for (co, _) in m.factors() {
            by_coord.entry(co).or_default().push((m, *c));
        }
    }
    let mut out = Poly::zero();
    for (m1, c1) in f.iter() {
        for (co, e1) in m1.factors() {
            let Some(list) = by_coord.get(&co.conj()) else { continue };
            let sign = match co.side {
                Side::Minus => 1.0,
                Side::Plus => -1.0,
            };
            let (r1, _) = m1.reduce(co).expect("factor present");
            for &(m2, c2) in list {
                if let Some(k) = cap {
                    if m1.len() + m2.len() - 2 > k {
                        continue;
                    }
                }
                let (r2, e2) = m2.reduce(co.conj()).expect("factor present");
                out.add_term(r1.mul(&r2), I * (sign * (e1 * e2) as f64) * c1 * c2);
            }
        }
    }
    out
}
