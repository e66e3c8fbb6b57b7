//! Polynomials in the Fourier coefficients of the real fields `η`, `ψ`, `ζ`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use super::series::Coeff;
use crate::polyham::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldKind {
    Eta,
    Psi,
    Zeta,
}

/// Fourier coefficient `f̂_j` of one field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldVar {
    pub kind: FieldKind,
    pub mode: i32,
}

impl FieldVar {
    pub fn eta(j: i32) -> Self {
        FieldVar { kind: FieldKind::Eta, mode: j }
    }
    pub fn psi(j: i32) -> Self {
        FieldVar { kind: FieldKind::Psi, mode: j }
    }
    pub fn zeta(j: i32) -> Self {
        FieldVar { kind: FieldKind::Zeta, mode: j }
    }
}

/// Sparse polynomial; monomials are sorted variable lists.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FieldPoly {
    terms: BTreeMap<Vec<FieldVar>, C64>,
}

impl FieldPoly {
    pub fn var(v: FieldVar) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![v], C64::new(1.0, 0.0));
        FieldPoly { terms }
    }

    pub fn constant(c: C64) -> Self {
        let mut p = FieldPoly::default();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn add_term(&mut self, mut mono: Vec<FieldVar>, c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        mono.sort_unstable();
        self.accumulate(mono, c);
    }

    fn accumulate(&mut self, mono: Vec<FieldVar>, c: C64) {
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == C64::new(0.0, 0.0) {
                    e.remove();
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<FieldVar>, &C64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &[FieldVar]) -> C64 {
        let mut m = mono.to_vec();
        m.sort_unstable();
        self.terms.get(&m).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn degree_piece(&self, d: usize) -> FieldPoly {
        FieldPoly { terms: self.terms.iter().filter(|(m, _)| m.len() == d).map(|(m, c)| (m.clone(), *c)).collect() }
    }

    pub fn sub(&self, other: &FieldPoly) -> FieldPoly {
        let mut out = self.clone();
        out.add_assign(&other.scale(C64::new(-1.0, 0.0)));
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Largest `|Σ modes|` over the monomials; zero for translation-invariant polynomials.
    pub fn max_momentum(&self) -> i64 {
        self.terms.keys().map(|m| m.iter().map(|v| v.mode as i64).sum::<i64>().abs()).max().unwrap_or(0)
    }

    pub fn touches_mode_zero(&self) -> bool {
        self.terms.keys().any(|m| m.iter().any(|v| v.mode == 0))
    }

    pub fn has_kind(&self, kind: FieldKind) -> bool {
        self.terms.keys().any(|m| m.iter().any(|v| v.kind == kind))
    }

    pub fn evaluate(&self, value: impl Fn(FieldVar) -> C64) -> C64 {
        self.terms.iter().map(|(m, c)| m.iter().fold(*c, |acc, v| acc * value(*v))).sum()
    }

    pub fn derivative(&self, v: FieldVar) -> FieldPoly {
        let mut out = FieldPoly::default();
        for (m, c) in &self.terms {
            let k = m.iter().filter(|w| **w == v).count();
            if k == 0 {
                continue;
            }
            let mut rest = m.clone();
            let pos = rest.iter().position(|w| *w == v).unwrap();
            rest.remove(pos);
            out.add_term(rest, c * k as f64);
        }
        out
    }

    /// Replaces every variable by a polynomial.
    pub fn substitute(&self, subs: impl Fn(FieldVar) -> FieldPoly) -> FieldPoly {
        let mut cache: BTreeMap<FieldVar, FieldPoly> = BTreeMap::new();
        let mut out = FieldPoly::default();
        for (m, c) in &self.terms {
            let mut acc = FieldPoly::constant(*c);
            for v in m {
                let s = cache.entry(*v).or_insert_with(|| subs(*v));
                acc = Coeff::mul(&acc, s);
            }
            out.add_assign(&acc);
        }
        out
    }

    /// Replaces every variable by a polynomial in the complex coordinates.
    pub fn to_complex(&self, subs: impl Fn(FieldVar) -> Poly) -> Poly {
        let mut cache: BTreeMap<FieldVar, Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(*c);
            for v in m {
                let s = cache.entry(*v).or_insert_with(|| subs(*v));
                acc = acc.mul(s);
            }
            out.add_assign(&acc);
        }
        out
    }
}

impl Coeff for FieldPoly {
    fn zero() -> Self {
        FieldPoly::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.accumulate(m.clone(), *c);
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = FieldPoly::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut m = a.clone();
                m.extend_from_slice(b);
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    fn scale(&self, s: C64) -> Self {
        if s == C64::new(0.0, 0.0) {
            return FieldPoly::default();
        }
        FieldPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }
}
