use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::coords::Coord;
use crate::resonance::MultiIndex;

/// Sparse polynomial in the coordinates `u^σ_k`, keyed by monomial index.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly {
    terms: BTreeMap<MultiIndex, C64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: C64) -> Self {
        let mut p = Poly::zero();
        p.add_term(MultiIndex::empty(), c);
        p
    }

    pub fn coord(c: Coord) -> Self {
        let mut p = Poly::zero();
        p.add_term(MultiIndex::single(c), C64::new(1.0, 0.0));
        p
    }

    pub fn monomial(idx: MultiIndex, c: C64) -> Self {
        let mut p = Poly::zero();
        p.add_term(idx, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (MultiIndex, C64)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c` to the coefficient of `idx`; exact zeros are removed.
    pub fn add_term(&mut self, idx: MultiIndex, c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = *o.get() + c;
                if v == C64::new(0.0, 0.0) {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
        }
    }

    pub fn set(&mut self, idx: MultiIndex, c: C64) {
        if c == C64::new(0.0, 0.0) {
            self.terms.remove(&idx);
        } else {
            self.terms.insert(idx, c);
        }
    }

    pub fn get(&self, idx: &MultiIndex) -> C64 {
        self.terms.get(idx).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.len()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.len()).min()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), *c);
        }
    }

    pub fn add_scaled(&mut self, other: &Poly, s: C64) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), *c * s);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut p = self.clone();
        p.add_scaled(other, C64::new(-1.0, 0.0));
        p
    }

    pub fn scale(&self, s: C64) -> Poly {
        if s == C64::new(0.0, 0.0) {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    /// Product with terms of degree above `cap` discarded.
    pub fn mul_capped(&self, other: &Poly, cap: Option<u32>) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some(k) = cap {
                    if m1.len() + m2.len() > k {
                        continue;
                    }
                }
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_capped(other, None)
    }

    /// Homogeneous component of degree `d`.
    pub fn degree_piece(&self, d: u32) -> Poly {
        Poly {
            terms: self.terms.iter().filter(|(m, _)| m.len() == d).map(|(m, c)| (m.clone(), *c)).collect(),
        }
    }

    /// Terms with degree in `lo..=hi`.
    pub fn degree_range(&self, lo: u32, hi: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.len() >= lo && m.len() <= hi)
                .map(|(m, c)| (m.clone(), *c))
                .collect(),
        }
    }

    /// Splits into terms of degree `≤ maxdeg` and the largest dropped modulus.
    pub fn truncate(&self, maxdeg: u32) -> (Poly, f64) {
        let mut kept = Poly::zero();
        let mut dropped = 0.0_f64;
        for (m, c) in &self.terms {
            if m.len() <= maxdeg {
                kept.terms.insert(m.clone(), *c);
            } else {
                dropped = dropped.max(c.norm());
            }
        }
        (kept, dropped)
    }

    pub fn filter<F: Fn(&MultiIndex) -> bool>(&self, f: F) -> Poly {
        Poly { terms: self.terms.iter().filter(|(m, _)| f(m)).map(|(m, c)| (m.clone(), *c)).collect() }
    }

    /// Removes coefficients with modulus `≤ tol`.
    pub fn prune(&mut self, tol: f64) {
        self.terms.retain(|_, c| c.norm() > tol);
    }

    /// `∂_{u_c}`.
    pub fn derivative(&self, c: Coord) -> Poly {
        let mut out = Poly::zero();
        for (m, v) in &self.terms {
            if let Some((r, e)) = m.reduce(c) {
                out.add_term(r, v * e as f64);
            }
        }
        out
    }

    /// Polynomial obtained by the reality involution: conjugate coefficients on conjugate indices.
    pub fn conj_involution(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect() }
    }

    /// Largest violation of `conj(c(α, β)) = c(β, α)`.
    pub fn reality_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (m, c) in &self.terms {
            worst = worst.max((c.conj() - self.get(&m.conj())).norm());
        }
        worst
    }

    /// Evaluates at a dense coordinate vector in the layout of `box_j`.
    pub fn eval(&self, u: &[C64], box_j: u32) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = *c;
            for (co, e) in m.factors() {
                t *= u[co.dense_index(box_j)].powu(e);
            }
            s += t;
        }
        s
    }

    /// Substitutes `u_c ↦ subs(c)` and drops every product term above `cap`.
    /// The lowest degree of each substitute must be at least 1.
    pub fn substitute(&self, subs: &dyn Fn(Coord) -> Poly, cap: u32) -> Poly {
        let mut cache: BTreeMap<(Coord, u32), Poly> = BTreeMap::new();
        let mut base: BTreeMap<Coord, Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(*c);
            for (co, e) in m.factors() {
                let b = base.entry(co).or_insert_with(|| subs(co)).clone();
                let pw = power_cached(&mut cache, co, e, &b, cap);
                acc = acc.mul_capped(&pw, Some(cap));
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign(&acc);
        }
        out
    }

    pub fn into_terms(self) -> BTreeMap<MultiIndex, C64> {
        self.terms
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, C64> {
        &self.terms
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn distance(&self, other: &Poly) -> f64 {
        self.sub(other).max_abs()
    }
}

fn power_cached(
    cache: &mut BTreeMap<(Coord, u32), Poly>,
    c: Coord,
    e: u32,
    base: &Poly,
    cap: u32,
) -> Poly {
    if let Some(p) = cache.get(&(c, e)) {
        return p.clone();
    }
    let p = if e == 1 {
        base.clone()
    } else {
        let prev = power_cached(cache, c, e - 1, base, cap);
        prev.mul_capped(base, Some(cap))
    };
    cache.insert((c, e), p.clone());
    p
}

/// Flattened polynomial for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(C64, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    pub fn new(p: &Poly, box_j: u32) -> Self {
        CompiledPoly {
            terms: p
                .iter()
                .map(|(m, c)| (*c, m.factors().into_iter().map(|(co, e)| (co.dense_index(box_j), e)).collect()))
                .collect(),
        }
    }

    #[inline]
    pub fn eval(&self, u: &[C64]) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (c, fs) in &self.terms {
            let mut t = *c;
            for &(i, e) in fs {
                t *= if e == 1 { u[i] } else { u[i].powu(e) };
            }
            s += t;
        }
        s
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}
