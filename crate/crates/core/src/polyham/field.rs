use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use super::poly::{CompiledPoly, Poly};
use super::state::State;
use crate::coords::{all_coords, Coord};

/// Polynomial vector field: one polynomial per output coordinate `(k, σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierField {
    box_j: u32,
    comps: BTreeMap<Coord, Poly>,
}

impl FourierField {
    pub fn zero(box_j: u32) -> Self {
        FourierField { box_j, comps: BTreeMap::new() }
    }

    pub fn box_j(&self) -> u32 {
        self.box_j
    }

    pub fn set(&mut self, c: Coord, p: Poly) {
        if p.is_zero() {
            self.comps.remove(&c);
        } else {
            self.comps.insert(c, p);
        }
    }

    pub fn component(&self, c: Coord) -> Poly {
        self.comps.get(&c).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Coord, &Poly)> {
        self.comps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Values at a dense coordinate vector.
    pub fn eval(&self, u: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); 4 * self.box_j as usize];
        for (c, p) in &self.comps {
            out[c.dense_index(self.box_j)] = p.eval(u, self.box_j);
        }
        out
    }

    /// `ż_k` for each mode at a real-to-real state, in mode order.
    pub fn eval_state(&self, z: &State) -> Vec<C64> {
        let u = z.to_coords(self.box_j);
        let v = self.eval(&u);
        v[..2 * self.box_j as usize].to_vec()
    }

    /// Largest violation of `X^-_k = conj(X^+_k)` as polynomials under the reality involution.
    pub fn reality_defect(&self) -> f64 {
        all_coords(self.box_j)
            .into_iter()
            .filter(|c| c.side == crate::coords::Side::Plus)
            .map(|c| self.component(c).conj_involution().distance(&self.component(c.conj())))
            .fold(0.0, f64::max)
    }

    /// Entries violating `σk = momentum(monomial)`.
    pub fn momentum_violations(&self) -> usize {
        self.comps
            .iter()
            .map(|(c, p)| p.iter().filter(|(m, _)| m.momentum() != c.momentum()).count())
            .sum()
    }

    pub fn degree_piece(&self, d: u32) -> Self {
        let mut f = FourierField::zero(self.box_j);
        for (c, p) in &self.comps {
            f.set(*c, p.degree_piece(d));
        }
        f
    }

    /// Largest coefficient modulus of the difference.
    pub fn distance(&self, other: &FourierField) -> f64 {
        let keys: std::collections::BTreeSet<Coord> =
            self.comps.keys().chain(other.comps.keys()).copied().collect();
        keys.into_iter().map(|c| self.component(c).distance(&other.component(c))).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &FourierField) -> FourierField {
        let mut f = self.clone();
        for (c, p) in &other.comps {
            let v = f.component(*c).add(p);
            f.set(*c, v);
        }
        f
    }

    pub fn sub(&self, other: &FourierField) -> FourierField {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> FourierField {
        let mut f = FourierField::zero(self.box_j);
        for (c, p) in &self.comps {
            f.set(*c, p.scale(s));
        }
        f
    }

    /// Components truncated at degree `maxdeg`, with the largest dropped modulus.
    pub fn truncate(&self, maxdeg: u32) -> (FourierField, f64) {
        let mut f = FourierField::zero(self.box_j);
        let mut dropped = 0.0_f64;
        for (c, p) in &self.comps {
            let (k, d) = p.truncate(maxdeg);
            dropped = dropped.max(d);
            f.set(*c, k);
        }
        (f, dropped)
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.values().map(|p| p.max_abs()).fold(0.0, f64::max)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.comps.values().filter_map(|p| p.min_degree()).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.comps.values().filter_map(|p| p.max_degree()).max()
    }

    /// Identity vector field `U ↦ U`.
    pub fn identity(box_j: u32) -> FourierField {
        let mut f = FourierField::zero(box_j);
        for c in all_coords(box_j) {
            f.set(c, Poly::coord(c));
        }
        f
    }

    /// Components with `u_c ↦ subs_c`, products above `cap` dropped.
    pub fn substitute(&self, subs: &FourierField, cap: u32) -> FourierField {
        let sf = |c: Coord| subs.component(c);
        let mut f = FourierField::zero(self.box_j);
        for (c, p) in &self.comps {
            f.set(*c, p.substitute(&sf, cap));
        }
        f
    }

    pub fn compile(&self) -> CompiledField {
        CompiledField {
            dim: 4 * self.box_j as usize,
            comps: self.comps.iter().map(|(c, p)| (c.dense_index(self.box_j), CompiledPoly::new(p, self.box_j))).collect(),
        }
    }
}

/// Flattened field for time stepping.
#[derive(Clone, Debug)]
pub struct CompiledField {
    dim: usize,
    comps: Vec<(usize, CompiledPoly)>,
}

impl CompiledField {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval_into(&self, u: &[C64], out: &mut [C64]) {
        out.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        for (i, p) in &self.comps {
            out[*i] = p.eval(u);
        }
    }

    pub fn eval(&self, u: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        self.eval_into(u, &mut out);
        out
    }
}
