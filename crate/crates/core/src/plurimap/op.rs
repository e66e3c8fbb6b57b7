use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::coords::{all_coords, Coord};
use crate::polyham::{FourierField, Poly};

/// Operator-valued polynomial `M(U)`: entry `(row, col)` is a polynomial in `U`,
/// acting by `(M(U)V)_row = Σ_col M_{row,col}(U) V_col`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct OpPoly {
    box_j: u32,
    entries: BTreeMap<(Coord, Coord), Poly>,
}

impl OpPoly {
    pub fn zero(box_j: u32) -> Self {
        OpPoly { box_j, entries: BTreeMap::new() }
    }

    pub fn identity(box_j: u32) -> Self {
        let mut m = OpPoly::zero(box_j);
        for c in all_coords(box_j) {
            m.set(c, c, Poly::constant(C64::new(1.0, 0.0)));
        }
        m
    }

    /// Constant symplectic tensor: `(E_c U)^σ_k = -iσ u^{-σ}_{-k}`.
    pub fn symplectic(box_j: u32) -> Self {
        let mut m = OpPoly::zero(box_j);
        for r in all_coords(box_j) {
            let c = Coord::new(-r.k, r.side.flip());
            m.set(r, c, Poly::constant(C64::new(0.0, -(r.side.sign() as f64))));
        }
        m
    }

    pub fn box_j(&self) -> u32 {
        self.box_j
    }

    pub fn set(&mut self, row: Coord, col: Coord, p: Poly) {
        if p.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), p);
        }
    }

    pub fn add_entry(&mut self, row: Coord, col: Coord, p: &Poly) {
        let v = self.get(row, col).add(p);
        self.set(row, col, v);
    }

    pub fn get(&self, row: Coord, col: Coord) -> Poly {
        self.entries.get(&(row, col)).cloned().unwrap_or_default()
    }

    pub fn entry(&self, row: Coord, col: Coord) -> Option<&Poly> {
        self.entries.get(&(row, col))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Coord, Coord), &Poly)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &OpPoly) -> OpPoly {
        let mut m = self.clone();
        for ((r, c), p) in &other.entries {
            m.add_entry(*r, *c, p);
        }
        m
    }

    pub fn sub(&self, other: &OpPoly) -> OpPoly {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> OpPoly {
        let mut m = OpPoly::zero(self.box_j);
        for ((r, c), p) in &self.entries {
            m.set(*r, *c, p.scale(s));
        }
        m
    }

    /// Applies `f` to every entry.
    pub fn map_entries<F: Fn(&Poly) -> Poly>(&self, f: F) -> OpPoly {
        let mut m = OpPoly::zero(self.box_j);
        for ((r, c), p) in &self.entries {
            m.set(*r, *c, f(p));
        }
        m
    }

    /// Operator product, entries above degree `cap` dropped.
    pub fn mul_capped(&self, other: &OpPoly, cap: Option<u32>) -> OpPoly {
        let mut by_row: BTreeMap<Coord, Vec<(Coord, &Poly)>> = BTreeMap::new();
        for ((r, c), p) in &other.entries {
            by_row.entry(*r).or_default().push((*c, p));
        }
        let mut acc: BTreeMap<(Coord, Coord), Poly> = BTreeMap::new();
        for ((r, s), p) in &self.entries {
            if let Some(list) = by_row.get(s) {
                for (c, q) in list {
                    let prod = p.mul_capped(q, cap);
                    if !prod.is_zero() {
                        acc.entry((*r, *c)).or_default().add_assign(&prod);
                    }
                }
            }
        }
        acc.retain(|_, p| !p.is_zero());
        OpPoly { box_j: self.box_j, entries: acc }
    }

    pub fn mul(&self, other: &OpPoly) -> OpPoly {
        self.mul_capped(other, None)
    }

    /// Transpose with respect to `⟨V, W⟩_r`: `M^T_{r,s} = M_{πs,πr}`.
    pub fn transpose(&self) -> OpPoly {
        let mut m = OpPoly::zero(self.box_j);
        for ((r, c), p) in &self.entries {
            m.set(c.paired(), r.paired(), p.clone());
        }
        m
    }

    pub fn truncate(&self, maxdeg: u32) -> (OpPoly, f64) {
        let mut m = OpPoly::zero(self.box_j);
        let mut dropped = 0.0_f64;
        for ((r, c), p) in &self.entries {
            let (k, d) = p.truncate(maxdeg);
            dropped = dropped.max(d);
            m.set(*r, *c, k);
        }
        (m, dropped)
    }

    pub fn degree_piece(&self, d: u32) -> OpPoly {
        self.map_entries(|p| p.degree_piece(d))
    }

    pub fn degree_range(&self, lo: u32, hi: u32) -> OpPoly {
        self.map_entries(|p| p.degree_range(lo, hi))
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.entries.values().filter_map(|p| p.min_degree()).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.entries.values().filter_map(|p| p.max_degree()).max()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|p| p.max_abs()).fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &OpPoly) -> f64 {
        self.sub(other).max_abs()
    }

    /// Largest coefficient among entries of degree `≤ maxdeg`.
    pub fn max_abs_up_to(&self, maxdeg: u32) -> f64 {
        self.entries.values().map(|p| p.degree_range(0, maxdeg).max_abs()).fold(0.0, f64::max)
    }

    /// Largest coefficient among entries of degree `> maxdeg`.
    pub fn max_abs_above(&self, maxdeg: u32) -> f64 {
        self.entries.values().map(|p| p.degree_range(maxdeg + 1, u32::MAX).max_abs()).fold(0.0, f64::max)
    }

    /// `M(U)·Y(U)` for a vector polynomial `Y`.
    pub fn apply_field(&self, y: &FourierField, cap: Option<u32>) -> FourierField {
        let mut acc: BTreeMap<Coord, Poly> = BTreeMap::new();
        for ((r, c), p) in &self.entries {
            let yc = y.component(*c);
            if yc.is_zero() {
                continue;
            }
            acc.entry(*r).or_default().add_assign(&p.mul_capped(&yc, cap));
        }
        let mut f = FourierField::zero(self.box_j);
        for (r, p) in acc {
            f.set(r, p);
        }
        f
    }

    /// The vector polynomial `M(U)U`.
    pub fn apply_identity(&self) -> FourierField {
        let mut acc: BTreeMap<Coord, Poly> = BTreeMap::new();
        for ((r, c), p) in &self.entries {
            acc.entry(*r).or_default().add_assign(&p.mul(&Poly::coord(*c)));
        }
        let mut f = FourierField::zero(self.box_j);
        for (r, p) in acc {
            f.set(r, p);
        }
        f
    }

    /// `M(u) v` at dense vectors.
    pub fn eval_apply(&self, u: &[C64], v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); 4 * self.box_j as usize];
        for ((r, c), p) in &self.entries {
            out[r.dense_index(self.box_j)] += p.eval(u, self.box_j) * v[c.dense_index(self.box_j)];
        }
        out
    }

    /// Entries with `u_c ↦ subs_c`.
    pub fn substitute(&self, subs: &FourierField, cap: u32) -> OpPoly {
        let sf = |c: Coord| subs.component(c);
        self.map_entries(|p| p.substitute(&sf, cap))
    }

    /// `dM(U)[X(U)]`, entrywise directional derivative.
    pub fn directional(&self, x: &FourierField, cap: Option<u32>) -> OpPoly {
        self.map_entries(|p| directional_poly(p, x, cap))
    }

    /// `G(U)`, defined by `G(U)W = dM(U)[W] U`.
    pub fn g_operator(&self) -> OpPoly {
        let mut acc: BTreeMap<(Coord, Coord), Poly> = BTreeMap::new();
        for ((r, s), p) in &self.entries {
            for c in coords_in(p) {
                let d = p.derivative(c).mul(&Poly::coord(*s));
                acc.entry((*r, c)).or_default().add_assign(&d);
            }
        }
        acc.retain(|_, p| !p.is_zero());
        OpPoly { box_j: self.box_j, entries: acc }
    }

    /// Jacobian `∂_c Y_r` of a vector polynomial.
    pub fn jacobian(y: &FourierField) -> OpPoly {
        let mut m = OpPoly::zero(y.box_j());
        for (r, p) in y.iter() {
            for c in coords_in(p) {
                m.set(*r, c, p.derivative(c));
            }
        }
        m
    }

    /// Operator form of a vector polynomial: each degree-`d` piece becomes
    /// `(1/d)·Jacobian`, so that `M(U)U = Y(U)` by Euler's identity.
    pub fn euler_form(y: &FourierField) -> OpPoly {
        let mut m = OpPoly::zero(y.box_j());
        for (r, p) in y.iter() {
            for c in coords_in(p) {
                let mut e = Poly::zero();
                for (mi, v) in p.iter() {
                    if let Some((red, k)) = mi.reduce(c) {
                        e.add_term(red, v * (k as f64 / mi.len() as f64));
                    }
                }
                m.set(*r, c, e);
            }
        }
        m
    }

    /// Number of coefficients with `σk ≠ momentum(monomial) + σ'j`.
    pub fn momentum_violations(&self) -> usize {
        self.entries
            .iter()
            .map(|((r, c), p)| p.iter().filter(|(m, _)| r.momentum() != m.momentum() + c.momentum()).count())
            .sum()
    }

    /// Largest violation of `conj(M_{r,c}) = M_{r̄,c̄}` under the reality involution.
    pub fn reality_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for ((r, c), p) in &self.entries {
            let other = self.get(r.conj(), c.conj());
            worst = worst.max(p.conj_involution().distance(&other));
        }
        worst
    }

    /// Largest coefficient of `M + M^T`.
    pub fn antisymmetry_defect(&self) -> f64 {
        self.add(&self.transpose()).max_abs()
    }
}

/// Distinct coordinates appearing in `p`.
pub(crate) fn coords_in(p: &Poly) -> Vec<Coord> {
    let mut v: Vec<Coord> = p.iter().flat_map(|(m, _)| m.factors().into_iter().map(|f| f.0)).collect();
    v.sort();
    v.dedup();
    v
}

/// `dp(U)[X(U)] = Σ_c ∂_c p · X_c`.
pub(crate) fn directional_poly(p: &Poly, x: &FourierField, cap: Option<u32>) -> Poly {
    let mut out = Poly::zero();
    for c in coords_in(p) {
        let xc = x.component(c);
        if xc.is_zero() {
            continue;
        }
        out.add_assign(&p.derivative(c).mul_capped(&xc, cap));
    }
    out
}
