//! Coordinates `u^σ_k` of the truncated complex phase space.
//!
//! A state is indexed by `(k, σ)` with `k ∈ [-J, J] \ {0}` and `σ = ±`;
//! `u^+_k = z_k` and `u^-_k = conj(z_k)` on real-to-real states.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn sign(self) -> i64 {
        match self {
            Side::Plus => 1,
            Side::Minus => -1,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Side::Plus => '+',
            Side::Minus => '-',
        }
    }

    pub fn from_symbol(c: &str) -> Option<Side> {
        match c {
            "+" => Some(Side::Plus),
            "-" => Some(Side::Minus),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coord {
    pub k: i32,
    pub side: Side,
}

impl Coord {
    pub fn new(k: i32, side: Side) -> Self {
        Coord { k, side }
    }

    pub fn plus(k: i32) -> Self {
        Coord { k, side: Side::Plus }
    }

    pub fn minus(k: i32) -> Self {
        Coord { k, side: Side::Minus }
    }

    /// Momentum `σk` carried by this coordinate.
    pub fn momentum(self) -> i64 {
        self.side.sign() * self.k as i64
    }

    /// Partner under the bilinear pairing `⟨V, W⟩_r = Σ V^σ_k W^σ_{-k}`.
    pub fn paired(self) -> Coord {
        Coord { k: -self.k, side: self.side }
    }

    /// Complex-conjugate partner `(k, -σ)`.
    pub fn conj(self) -> Coord {
        Coord { k: self.k, side: self.side.flip() }
    }

    /// Position in the dense layout of box `J`: modes `-J..=J` without 0, plus side first.
    pub fn dense_index(self, box_j: u32) -> usize {
        let j = box_j as i32;
        let m = if self.k < 0 { self.k + j } else { self.k + j - 1 } as usize;
        match self.side {
            Side::Plus => m,
            Side::Minus => 2 * box_j as usize + m,
        }
    }

    pub fn in_box(self, box_j: u32) -> bool {
        self.k != 0 && self.k.unsigned_abs() <= box_j
    }
}

impl std::fmt::Display for Coord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.k, self.side.symbol())
    }
}

/// Modes of the box in increasing order.
pub fn modes(box_j: u32) -> Vec<i32> {
    let j = box_j as i32;
    (-j..=j).filter(|&k| k != 0).collect()
}

/// All `4J` coordinates in dense-index order.
pub fn all_coords(box_j: u32) -> Vec<Coord> {
    let ms = modes(box_j);
    let mut v: Vec<Coord> = ms.iter().map(|&k| Coord::plus(k)).collect();
    v.extend(ms.iter().map(|&k| Coord::minus(k)));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_layout_roundtrip() {
        let cs = all_coords(3);
        assert_eq!(cs.len(), 12);
        for (i, c) in cs.iter().enumerate() {
            assert_eq!(c.dense_index(3), i);
        }
    }

    #[test]
    fn pairing_and_conj_are_involutions() {
        let c = Coord::minus(-2);
        assert_eq!(c.paired().paired(), c);
        assert_eq!(c.conj().conj(), c);
        assert_eq!(c.momentum(), 2);
    }
}
