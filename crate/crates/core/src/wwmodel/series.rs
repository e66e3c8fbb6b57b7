//! Sparse Fourier series `f(x) = Σ_j f̂_j e^{ijx}/√(2π)` with coefficients in a ring,
//! so the same expansion code runs on numbers and on symbolic polynomials.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;

/// Coefficient ring of a [`Series`].
pub trait Coeff: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, s: C64) -> Self;
}

impl Coeff for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, s: C64) -> Self {
        self * s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series<T> {
    coeffs: BTreeMap<i32, T>,
}

impl<T: Coeff> Series<T> {
    pub fn zero() -> Self {
        Series { coeffs: BTreeMap::new() }
    }

    pub fn from_map(coeffs: BTreeMap<i32, T>) -> Self {
        let mut s = Series { coeffs };
        s.coeffs.retain(|_, c| !c.is_zero());
        s
    }

    pub fn get(&self, j: i32) -> T {
        self.coeffs.get(&j).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i32, &T)> {
        self.coeffs.iter()
    }

    pub fn into_map(self) -> BTreeMap<i32, T> {
        self.coeffs
    }

    /// Largest `|j|` carried, 0 for the empty series.
    pub fn max_mode(&self) -> u32 {
        self.coeffs.keys().map(|j| j.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.coeffs.clone();
        for (j, c) in &other.coeffs {
            out.entry(*j).or_insert_with(T::zero).add_assign(c);
        }
        Series::from_map(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        Series::from_map(self.coeffs.iter().map(|(j, c)| (*j, c.scale(s))).collect())
    }

    /// Fourier multiplier with symbol `m(j)`.
    pub fn multiplier(&self, m: impl Fn(i32) -> C64) -> Self {
        Series::from_map(self.coeffs.iter().map(|(j, c)| (*j, c.scale(m(*j)))).collect())
    }

    /// Pointwise product: `(fg)^_m = (2π)^{-1/2} Σ_{a+b=m} f̂_a ĝ_b`.
    pub fn product(&self, other: &Self) -> Self {
        let norm = C64::new(1.0 / (2.0 * PI).sqrt(), 0.0);
        let mut out: BTreeMap<i32, T> = BTreeMap::new();
        for (a, fa) in &self.coeffs {
            for (b, gb) in &other.coeffs {
                out.entry(a + b).or_insert_with(T::zero).add_assign(&fa.mul(gb).scale(norm));
            }
        }
        Series::from_map(out)
    }

    /// `∫ f g dx = Σ_j f̂_j ĝ_{-j}`.
    pub fn pair(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for (j, fj) in &self.coeffs {
            if let Some(g) = other.coeffs.get(&-j) {
                acc.add_assign(&fj.mul(g));
            }
        }
        acc
    }

    /// `∂_x`.
    pub fn dx(&self) -> Self {
        self.multiplier(|j| C64::new(0.0, j as f64))
    }

    /// `D = -i∂_x`.
    pub fn d(&self) -> Self {
        self.multiplier(|j| C64::new(j as f64, 0.0))
    }

    /// `∂_x^{-1}` on zero-mean series (mode 0 is dropped).
    pub fn dx_inv(&self) -> Self {
        let mut s = self.multiplier(|j| if j == 0 { C64::new(0.0, 0.0) } else { C64::new(0.0, -1.0 / j as f64) });
        s.coeffs.remove(&0);
        s
    }
}
