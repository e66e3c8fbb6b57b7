use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coords::{modes, Coord};

/// Amplitudes `z_j` for `j ∈ [-J, J] \ {0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct State {
    box_j: u32,
    z: Vec<C64>,
}

impl State {
    pub fn zeros(box_j: u32) -> Self {
        State { box_j, z: vec![C64::new(0.0, 0.0); 2 * box_j as usize] }
    }

    /// Builds a state from amplitudes listed in mode order `-J, …, -1, 1, …, J`.
    pub fn from_vec(box_j: u32, z: Vec<C64>) -> Option<Self> {
        (z.len() == 2 * box_j as usize).then_some(State { box_j, z })
    }

    /// Reads the `+` block of a dense coordinate vector.
    pub fn from_coords(box_j: u32, u: &[C64]) -> Self {
        State { box_j, z: u[..2 * box_j as usize].to_vec() }
    }

    /// Uniform random amplitudes with `|z_j| ≤ amp`.
    pub fn random<R: Rng>(box_j: u32, amp: f64, rng: &mut R) -> Self {
        let z = (0..2 * box_j)
            .map(|_| {
                let r = amp * rng.gen::<f64>().sqrt();
                C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        State { box_j, z }
    }

    pub fn box_j(&self) -> u32 {
        self.box_j
    }

    fn pos(&self, k: i32) -> usize {
        Coord::plus(k).dense_index(self.box_j)
    }

    /// `z_k`; zero outside the box.
    pub fn get(&self, k: i32) -> C64 {
        if Coord::plus(k).in_box(self.box_j) {
            self.z[self.pos(k)]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    /// Sets `z_k`; panics outside the box.
    pub fn set(&mut self, k: i32, v: C64) {
        assert!(Coord::plus(k).in_box(self.box_j), "mode {k} outside box {}", self.box_j);
        let p = self.pos(k);
        self.z[p] = v;
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.z
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, C64)> + '_ {
        modes(self.box_j).into_iter().zip(self.z.iter().copied())
    }

    /// Dense coordinate vector `(u^+, u^-)` in the layout of `box_j ≥ self.box_j`.
    pub fn to_coords(&self, box_j: u32) -> Vec<C64> {
        let mut u = vec![C64::new(0.0, 0.0); 4 * box_j as usize];
        for (k, v) in self.iter() {
            u[Coord::plus(k).dense_index(box_j)] = v;
            u[Coord::minus(k).dense_index(box_j)] = v.conj();
        }
        u
    }

    /// `J_n = |z_n|² + |z_{-n}|²`.
    pub fn superaction(&self, n: u32) -> f64 {
        let n = n as i32;
        self.get(n).norm_sqr() + self.get(-n).norm_sqr()
    }

    /// `(J_1, …, J_J)`.
    pub fn superactions(&self) -> Vec<f64> {
        (1..=self.box_j).map(|n| self.superaction(n)).collect()
    }

    /// `Σ_j j |z_j|²`.
    pub fn momentum(&self) -> f64 {
        self.iter().map(|(k, v)| k as f64 * v.norm_sqr()).sum()
    }

    /// Euclidean norm of the amplitudes.
    pub fn norm(&self) -> f64 {
        self.z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        State { box_j: self.box_j, z: self.z.iter().map(|v| v * s).collect() }
    }

    /// Maximum modulus of the difference.
    pub fn max_diff(&self, other: &State) -> f64 {
        self.z.iter().zip(&other.z).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}
