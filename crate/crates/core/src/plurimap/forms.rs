//! Polynomial differential forms in the coordinates `u^σ_k`.
//!
//! A 1-form is `θ = Σ_a θ_a du_a`; a 2-form is the antisymmetric array
//! `Λ[X, Y] = Σ_{a,b} ω_{ab} X_a Y_b`, equivalently `⟨E(U)X, Y⟩_r` with
//! `ω_{a,b} = E_{πb,a}`; 3-forms are stored the same way with three slots.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use super::op::{coords_in, OpPoly};
use super::PluriMap;
use crate::coords::Coord;
use crate::polyham::{FourierField, Poly};

fn cap_all(p: Poly, cap: Option<u32>) -> Poly {
    match cap {
        Some(n) => p.degree_range(0, n),
        None => p,
    }
}

fn grad_poly(p: &Poly) -> BTreeMap<Coord, Poly> {
    coords_in(p).into_iter().map(|c| (c, p.derivative(c))).collect()
}

/// `dW` of a 0-form.
pub fn d0(w: &Poly) -> OneForm {
    OneForm { comps: grad_poly(w) }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct OneForm {
    comps: BTreeMap<Coord, Poly>,
}

impl OneForm {
    pub fn zero() -> Self {
        OneForm::default()
    }

    pub fn get(&self, a: Coord) -> Poly {
        self.comps.get(&a).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, a: Coord, p: Poly) {
        if p.is_zero() {
            self.comps.remove(&a);
        } else {
            self.comps.insert(a, p);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Coord, &Poly)> {
        self.comps.iter()
    }

    /// From the pairing representation `θ[X] = ⟨w(U), X⟩_r`.
    pub fn from_vector(w: &FourierField) -> Self {
        let mut f = OneForm::zero();
        for (r, p) in w.iter() {
            f.set(r.paired(), p.clone());
        }
        f
    }

    /// Vector `w` with `θ[X] = ⟨w, X⟩_r`.
    pub fn to_vector(&self, box_j: u32) -> FourierField {
        let mut f = FourierField::zero(box_j);
        for (a, p) in &self.comps {
            f.set(a.paired(), p.clone());
        }
        f
    }

    /// Liouville form `θ_c(V) = ½⟨E_c V, ·⟩_r`.
    pub fn liouville(box_j: u32) -> Self {
        let v = OpPoly::symplectic(box_j).apply_identity().scale(C64::new(0.5, 0.0));
        OneForm::from_vector(&v)
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        let mut f = self.clone();
        for (a, p) in &other.comps {
            let v = f.get(*a).add(p);
            f.set(*a, v);
        }
        f
    }

    pub fn sub(&self, other: &OneForm) -> OneForm {
        let mut f = self.clone();
        for (a, p) in &other.comps {
            let v = f.get(*a).sub(p);
            f.set(*a, v);
        }
        f
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.values().map(|p| p.max_abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_up_to(&self, n: u32) -> f64 {
        self.comps.values().map(|p| p.degree_range(0, n).max_abs()).fold(0.0, f64::max)
    }

    /// `(dθ)_{ab} = ∂_a θ_b - ∂_b θ_a`.
    pub fn d(&self) -> TwoForm {
        let mut w = TwoForm::zero();
        for (b, p) in &self.comps {
            for (a, da) in grad_poly(p) {
                w.add_entry(a, *b, &da);
                w.add_entry(*b, a, &da.scale(C64::new(-1.0, 0.0)));
            }
        }
        w
    }

    /// `i_X θ = Σ_a θ_a X_a`.
    pub fn interior(&self, x: &FourierField, cap: Option<u32>) -> Poly {
        let mut out = Poly::zero();
        for (a, p) in &self.comps {
            out.add_assign(&p.mul_capped(&x.component(*a), cap));
        }
        out
    }

    /// `(φ^*θ)_a = Σ_b θ_b(φ(U)) ∂_a φ_b`.
    pub fn pullback(&self, phi: &PluriMap, cap: u32) -> OneForm {
        let f = phi.as_field();
        let jac = OpPoly::jacobian(&f);
        let mut out = OneForm::zero();
        for (b, p) in &self.comps {
            let pb = p.substitute(&|c: Coord| f.component(c), cap);
            for ((r, a), dp) in jac.iter() {
                if r == b {
                    let v = out.get(*a).add(&pb.mul_capped(dp, Some(cap)));
                    out.set(*a, v);
                }
            }
        }
        out
    }

    /// `(L_X θ)_a = Σ_c X_c ∂_c θ_a + Σ_c θ_c ∂_a X_c`.
    pub fn lie(&self, x: &FourierField, cap: Option<u32>) -> OneForm {
        let mut out = OneForm::zero();
        for (a, p) in &self.comps {
            let v = super::op::directional_poly(p, x, cap);
            let s = out.get(*a).add(&v);
            out.set(*a, s);
        }
        for (c, xc) in x.iter() {
            let th = self.get(*c);
            if th.is_zero() {
                continue;
            }
            for (a, dx) in grad_poly(xc) {
                let s = out.get(a).add(&th.mul_capped(&dx, cap));
                out.set(a, s);
            }
        }
        out
    }
}

/// Antisymmetric coefficient array of a 2-form.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct TwoForm {
    comps: BTreeMap<(Coord, Coord), Poly>,
}

impl TwoForm {
    pub fn zero() -> Self {
        TwoForm::default()
    }

    pub fn get(&self, a: Coord, b: Coord) -> Poly {
        self.comps.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn add_entry(&mut self, a: Coord, b: Coord, p: &Poly) {
        let v = self.get(a, b).add(p);
        if v.is_zero() {
            self.comps.remove(&(a, b));
        } else {
            self.comps.insert((a, b), v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Coord, Coord), &Poly)> {
        self.comps.iter()
    }

    /// From the operator representation `Λ[X, Y] = ⟨E X, Y⟩_r`.
    pub fn from_operator(e: &OpPoly) -> Self {
        let mut w = TwoForm::zero();
        for ((r, c), p) in e.iter() {
            w.add_entry(*c, r.paired(), p);
        }
        w
    }

    pub fn to_operator(&self, box_j: u32) -> OpPoly {
        let mut e = OpPoly::zero(box_j);
        for ((a, b), p) in &self.comps {
            e.add_entry(b.paired(), *a, p);
        }
        e
    }

    /// `Ω_c`.
    pub fn standard(box_j: u32) -> Self {
        TwoForm::from_operator(&OpPoly::symplectic(box_j))
    }

    pub fn add(&self, other: &TwoForm) -> TwoForm {
        let mut w = self.clone();
        for ((a, b), p) in &other.comps {
            w.add_entry(*a, *b, p);
        }
        w
    }

    pub fn sub(&self, other: &TwoForm) -> TwoForm {
        let mut w = self.clone();
        for ((a, b), p) in &other.comps {
            w.add_entry(*a, *b, &p.scale(C64::new(-1.0, 0.0)));
        }
        w
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.values().map(|p| p.max_abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_up_to(&self, n: u32) -> f64 {
        self.comps.values().map(|p| p.degree_range(0, n).max_abs()).fold(0.0, f64::max)
    }

    /// Largest coefficient of `ω_{ab} + ω_{ba}`.
    pub fn antisymmetry_defect(&self) -> f64 {
        self.comps.iter().map(|((a, b), p)| p.add(&self.get(*b, *a)).max_abs()).fold(0.0, f64::max)
    }

    /// `(dΛ)_{abc} = ∂_a ω_{bc} - ∂_b ω_{ac} + ∂_c ω_{ab}`.
    pub fn d(&self) -> ThreeForm {
        let mut t = ThreeForm::zero();
        for ((x, y), p) in &self.comps {
            for (c, dp) in grad_poly(p) {
                // ω_{xy} enters (a,b,c) = (c,x,y) with +, (x,c,y) with -, (x,y,c) with +.
                t.add_entry(c, *x, *y, &dp);
                t.add_entry(*x, c, *y, &dp.scale(C64::new(-1.0, 0.0)));
                t.add_entry(*x, *y, c, &dp);
            }
        }
        t
    }

    /// `(i_X Λ)_b = Σ_a X_a ω_{ab}`.
    pub fn interior(&self, x: &FourierField, cap: Option<u32>) -> OneForm {
        let mut out = OneForm::zero();
        for ((a, b), p) in &self.comps {
            let xa = x.component(*a);
            if xa.is_zero() {
                continue;
            }
            let v = out.get(*b).add(&p.mul_capped(&xa, cap));
            out.set(*b, v);
        }
        out
    }

    /// `(φ^*Λ)_{ab} = Σ_{cd} ω_{cd}(φ) ∂_a φ_c ∂_b φ_d`, truncated at degree `cap`.
    pub fn pullback(&self, phi: &PluriMap, cap: u32) -> TwoForm {
        let box_j = phi.box_j();
        let e = self.to_operator(box_j);
        TwoForm::from_operator(&pullback2(phi, &e, cap))
    }

    /// `(L_X Λ)_{ab} = Σ_c X_c ∂_c ω_{ab} + Σ_c ω_{cb} ∂_a X_c + Σ_c ω_{ac} ∂_b X_c`.
    pub fn lie(&self, x: &FourierField, cap: Option<u32>) -> TwoForm {
        let mut out = TwoForm::zero();
        for ((a, b), p) in &self.comps {
            out.add_entry(*a, *b, &super::op::directional_poly(p, x, cap));
        }
        for ((c, b), p) in &self.comps {
            for (a, dx) in grad_poly(&x.component(*c)) {
                out.add_entry(a, *b, &p.mul_capped(&dx, cap));
            }
        }
        for ((a, c), p) in &self.comps {
            for (b, dx) in grad_poly(&x.component(*c)) {
                out.add_entry(*a, b, &p.mul_capped(&dx, cap));
            }
        }
        out
    }

    pub fn truncated(&self, n: u32) -> TwoForm {
        let mut w = TwoForm::zero();
        for ((a, b), p) in &self.comps {
            w.add_entry(*a, *b, &cap_all(p.clone(), Some(n)));
        }
        w
    }
}

/// Coefficient array of a 3-form.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ThreeForm {
    comps: BTreeMap<(Coord, Coord, Coord), Poly>,
}

impl ThreeForm {
    pub fn zero() -> Self {
        ThreeForm::default()
    }

    pub fn add_entry(&mut self, a: Coord, b: Coord, c: Coord, p: &Poly) {
        let v = self.comps.get(&(a, b, c)).cloned().unwrap_or_default().add(p);
        if v.is_zero() {
            self.comps.remove(&(a, b, c));
        } else {
            self.comps.insert((a, b, c), v);
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.values().map(|p| p.max_abs()).fold(0.0, f64::max)
    }

    /// `(i_X Λ)_{bc} = Σ_a X_a ω_{abc}`.
    pub fn interior(&self, x: &FourierField, cap: Option<u32>) -> TwoForm {
        let mut out = TwoForm::zero();
        for ((a, b, c), p) in &self.comps {
            let xa = x.component(*a);
            if xa.is_zero() {
                continue;
            }
            out.add_entry(*b, *c, &p.mul_capped(&xa, cap));
        }
        out
    }
}

/// Operator of the pulled-back 2-form: `dφ^T E(φ(U)) dφ`, truncated at degree `n`.
pub fn pullback2(phi: &PluriMap, e: &OpPoly, n: u32) -> OpPoly {
    let f = phi.as_field();
    let dphi = OpPoly::jacobian(&f).degree_range(0, n);
    let ephi = e.substitute(&f, n);
    dphi.transpose().mul_capped(&ephi, Some(n)).mul_capped(&dphi, Some(n))
}
