//! Polynomials whose coefficients are polynomials in an auxiliary time `τ`.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use super::op::OpPoly;
use crate::coords::Coord;
use crate::polyham::Poly;

/// `Σ_k τ^k p_k(U)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TPoly {
    coeffs: Vec<Poly>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly { coeffs: Vec::new() }
    }

    pub fn constant_in_tau(p: Poly) -> Self {
        let mut t = TPoly { coeffs: vec![p] };
        t.trim();
        t
    }

    pub fn from_coeffs(coeffs: Vec<Poly>) -> Self {
        let mut t = TPoly { coeffs };
        t.trim();
        t
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|p| p.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|p| p.is_zero())
    }

    pub fn add_assign_shifted(&mut self, other: &TPoly, shift: usize) {
        if self.coeffs.len() < other.coeffs.len() + shift {
            self.coeffs.resize(other.coeffs.len() + shift, Poly::zero());
        }
        for (k, p) in other.coeffs.iter().enumerate() {
            self.coeffs[k + shift].add_assign(p);
        }
        self.trim();
    }

    pub fn mul_capped(&self, other: &TPoly, cap: u32) -> TPoly {
        if self.is_zero() || other.is_zero() {
            return TPoly::zero();
        }
        let mut out = vec![Poly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j].add_assign(&a.mul_capped(b, Some(cap)));
            }
        }
        TPoly::from_coeffs(out)
    }

    /// `∫_0^τ`, exact on monomials in `τ`.
    pub fn integrate(&self) -> TPoly {
        let mut out = vec![Poly::zero()];
        for (k, p) in self.coeffs.iter().enumerate() {
            out.push(p.scale(C64::new(1.0 / (k + 1) as f64, 0.0)));
        }
        TPoly::from_coeffs(out)
    }

    /// Value at a numeric `τ`.
    pub fn at(&self, tau: f64) -> Poly {
        let mut out = Poly::zero();
        let mut w = 1.0;
        for p in &self.coeffs {
            out.add_scaled(p, C64::new(w, 0.0));
            w *= tau;
        }
        out
    }
}

/// `p(subs(U))` where each substitute may depend on `τ`; products above `cap` dropped.
pub fn substitute_t(p: &Poly, subs: &dyn Fn(Coord) -> TPoly, cap: u32) -> TPoly {
    Powers::new(subs, cap).substitute(p)
}

/// Powers of the substitutes, shared across the polynomials of one substitution.
struct Powers<'a> {
    subs: &'a dyn Fn(Coord) -> TPoly,
    cap: u32,
    cache: BTreeMap<(Coord, u32), TPoly>,
}

impl<'a> Powers<'a> {
    fn new(subs: &'a dyn Fn(Coord) -> TPoly, cap: u32) -> Self {
        Powers { subs, cap, cache: BTreeMap::new() }
    }

    fn get(&mut self, c: Coord, e: u32) -> &TPoly {
        if !self.cache.contains_key(&(c, e)) {
            let p = if e == 1 {
                (self.subs)(c)
            } else {
                let cap = self.cap;
                let lower = self.get(c, e - 1).clone();
                lower.mul_capped(self.get(c, 1), cap)
            };
            self.cache.insert((c, e), p);
        }
        &self.cache[&(c, e)]
    }

    fn substitute(&mut self, p: &Poly) -> TPoly {
        let cap = self.cap;
        let mut out = TPoly::zero();
        for (m, c) in p.iter() {
            let mut acc = TPoly::constant_in_tau(Poly::constant(*c));
            for (co, e) in m.factors() {
                acc = acc.mul_capped(self.get(co, e), cap);
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign_shifted(&acc, 0);
        }
        out
    }
}

/// `Σ_k τ^k M_k(U)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TauOp {
    box_j: u32,
    coeffs: Vec<OpPoly>,
}

impl TauOp {
    pub fn zero(box_j: u32) -> Self {
        TauOp { box_j, coeffs: Vec::new() }
    }

    pub fn from_coeffs(box_j: u32, coeffs: Vec<OpPoly>) -> Self {
        let mut t = TauOp { box_j, coeffs };
        t.trim();
        t
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|p| p.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn box_j(&self) -> u32 {
        self.box_j
    }

    pub fn coeffs(&self) -> &[OpPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|m| m.is_zero())
    }

    pub fn add_shifted(&mut self, m: &OpPoly, shift: usize) {
        if self.coeffs.len() <= shift {
            self.coeffs.resize(shift + 1, OpPoly::zero(self.box_j));
        }
        self.coeffs[shift] = self.coeffs[shift].add(m);
        self.trim();
    }

    pub fn add(&self, other: &TauOp) -> TauOp {
        let mut t = self.clone();
        for (k, m) in other.coeffs.iter().enumerate() {
            t.add_shifted(m, k);
        }
        t
    }

    pub fn mul_capped(&self, other: &TauOp, cap: u32) -> TauOp {
        let mut t = TauOp::zero(self.box_j);
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                t.add_shifted(&a.mul_capped(b, Some(cap)), i + j);
            }
        }
        t
    }

    pub fn integrate(&self) -> TauOp {
        let mut coeffs = vec![OpPoly::zero(self.box_j)];
        for (k, m) in self.coeffs.iter().enumerate() {
            coeffs.push(m.scale(C64::new(1.0 / (k + 1) as f64, 0.0)));
        }
        TauOp::from_coeffs(self.box_j, coeffs)
    }

    pub fn at(&self, tau: f64) -> OpPoly {
        let mut out = OpPoly::zero(self.box_j);
        let mut w = 1.0;
        for m in &self.coeffs {
            out = out.add(&m.scale(C64::new(w, 0.0)));
            w *= tau;
        }
        out
    }

    /// Vector `(M^τ(U)U)_c` as τ-polynomials.
    pub fn apply_identity(&self) -> BTreeMap<Coord, TPoly> {
        let mut out: BTreeMap<Coord, TPoly> = BTreeMap::new();
        for (k, m) in self.coeffs.iter().enumerate() {
            for (c, p) in m.apply_identity().iter() {
                out.entry(*c).or_default().add_assign_shifted(&TPoly::constant_in_tau(p.clone()), k);
            }
        }
        out
    }

    /// Entries of `M^τ(subs^τ(U))` as a τ-family.
    pub fn substitute(&self, subs: &dyn Fn(Coord) -> TPoly, cap: u32) -> TauOp {
        let mut t = TauOp::zero(self.box_j);
        let mut powers = Powers::new(subs, cap);
        for (k, m) in self.coeffs.iter().enumerate() {
            let mut scattered: Vec<OpPoly> = Vec::new();
            for ((r, c), p) in m.iter() {
                let tp = powers.substitute(p);
                for (i, q) in tp.coeffs().iter().enumerate() {
                    if scattered.len() <= i {
                        scattered.resize(i + 1, OpPoly::zero(self.box_j));
                    }
                    scattered[i].add_entry(*r, *c, q);
                }
            }
            for (i, s) in scattered.iter().enumerate() {
                t.add_shifted(s, i + k);
            }
        }
        t
    }
}
