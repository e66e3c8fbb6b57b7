//! Seeded generators of valid random inputs (real, momentum-consistent).

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coords::{all_coords, Coord};
use crate::plurimap::OpPoly;
use crate::polyham::{Poly, PolyHamiltonian};
use crate::resonance::{enumerate, MultiIndex};

fn gauss_c<R: Rng>(rng: &mut R, scale: f64) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
}

/// Reproducible generator used by the command-line tools.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Indices of exact degree `d` in the box, grouped by momentum.
pub fn indices_by_momentum(d: u32, box_j: u32) -> BTreeMap<i64, Vec<MultiIndex>> {
    let mut out: BTreeMap<i64, Vec<MultiIndex>> = BTreeMap::new();
    if d == 0 {
        out.insert(0, vec![MultiIndex::empty()]);
        return out;
    }
    for m in enumerate(d, box_j, false).filter(|m| m.len() == d) {
        out.entry(m.momentum()).or_default().push(m);
    }
    out
}

/// Real momentum-zero Hamiltonian with each admissible monomial of the given
/// degrees kept with probability `density`.
pub fn hamiltonian<R: Rng>(box_j: u32, degrees: &[u32], density: f64, scale: f64, rng: &mut R) -> PolyHamiltonian {
    let mut p = Poly::zero();
    for &d in degrees {
        let idx = indices_by_momentum(d, box_j).remove(&0).unwrap_or_default();
        for m in idx {
            let c = m.conj();
            if c < m || rng.gen::<f64>() >= density {
                continue;
            }
            if c == m {
                p.add_term(m, C64::new(rng.gen_range(-1.0..1.0) * scale, 0.0));
            } else {
                let v = gauss_c(rng, scale);
                p.add_term(m, v);
                p.add_term(c, v.conj());
            }
        }
    }
    PolyHamiltonian::from_poly(box_j, p).expect("indices lie in the box")
}

/// Real-to-real, momentum-consistent operator polynomial of entry degree `d`.
pub fn op_poly<R: Rng>(box_j: u32, d: u32, density: f64, scale: f64, rng: &mut R) -> OpPoly {
    let by_m = indices_by_momentum(d, box_j);
    let mut out = OpPoly::zero(box_j);
    for r in all_coords(box_j) {
        for c in all_coords(box_j) {
            let need = r.momentum() - c.momentum();
            let Some(list) = by_m.get(&need) else { continue };
            for m in list {
                let key = (r, c, m.clone());
                let ckey = (r.conj(), c.conj(), m.conj());
                if ckey < key || rng.gen::<f64>() >= density {
                    continue;
                }
                let v = gauss_c(rng, scale);
                out.add_entry(r, c, &Poly::monomial(m.clone(), v));
                out.add_entry(r.conj(), c.conj(), &Poly::monomial(m.conj(), v.conj()));
            }
        }
    }
    out
}

/// Real-to-real, momentum-consistent operator that is symmetric: `K = K^T`.
pub fn symmetric_op<R: Rng>(box_j: u32, d: u32, density: f64, scale: f64, rng: &mut R) -> OpPoly {
    let k = op_poly(box_j, d, density, scale, rng);
    k.add(&k.transpose())
}

/// Dense coordinate vector of a random real-to-real state with `|z_j| ≤ amp`.
pub fn coords<R: Rng>(box_j: u32, amp: f64, rng: &mut R) -> Vec<C64> {
    crate::polyham::State::random(box_j, amp, rng).to_coords(box_j)
}

/// Dense vector with independent entries (not real-to-real).
pub fn vector<R: Rng>(box_j: u32, amp: f64, rng: &mut R) -> Vec<C64> {
    all_coords(box_j).iter().map(|_: &Coord| gauss_c(rng, amp)).collect()
}
