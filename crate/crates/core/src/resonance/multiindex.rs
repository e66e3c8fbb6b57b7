use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coords::{Coord, Side};
use crate::error::{LabError, Result};

/// Sparse exponent pair `(α, β)` over nonzero modes.
///
/// `α_j` is the exponent of `z_j = u^+_j`, `β_j` that of `z̄_j = u^-_j`.
/// Entries are kept sorted by mode with no zero pairs, so derived ordering
/// is lexicographic on the `(j, α_j, β_j)` encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    entries: Vec<(i32, u32, u32)>,
    len: u32,
    momentum: i64,
    maxmode: u32,
}

impl Default for MultiIndex {
    fn default() -> Self {
        MultiIndex::empty()
    }
}

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex { entries: Vec::new(), len: 0, momentum: 0, maxmode: 0 }
    }

    fn from_sorted(entries: Vec<(i32, u32, u32)>) -> Self {
        let mut len = 0;
        let mut momentum = 0i64;
        let mut maxmode = 0;
        for &(j, a, b) in &entries {
            len += a + b;
            momentum += j as i64 * (a as i64 - b as i64);
            maxmode = maxmode.max(j.unsigned_abs());
        }
        MultiIndex { entries, len, momentum, maxmode }
    }

    /// Builds an index from a map `j -> (α_j, β_j)`; zero pairs are dropped.
    pub fn from_map(map: &BTreeMap<i32, (u32, u32)>) -> Result<Self> {
        let mut v = Vec::with_capacity(map.len());
        for (&j, &(a, b)) in map {
            if j == 0 {
                return Err(LabError::ZeroMode);
            }
            if a + b > 0 {
                v.push((j, a, b));
            }
        }
        Ok(Self::from_sorted(v))
    }

    /// Index of the monomial `u^{σ_1}_{j_1} ⋯ u^{σ_p}_{j_p}`; order-insensitive.
    pub fn from_monomial(modes: &[(i32, Side)]) -> Result<Self> {
        let mut map: BTreeMap<i32, (u32, u32)> = BTreeMap::new();
        for &(j, s) in modes {
            if j == 0 {
                return Err(LabError::ZeroMode);
            }
            let e = map.entry(j).or_insert((0, 0));
            match s {
                Side::Plus => e.0 += 1,
                Side::Minus => e.1 += 1,
            }
        }
        Self::from_map(&map)
    }

    pub fn from_coords(cs: &[Coord]) -> Result<Self> {
        let v: Vec<(i32, Side)> = cs.iter().map(|c| (c.k, c.side)).collect();
        Self::from_monomial(&v)
    }

    pub fn single(c: Coord) -> Self {
        let e = match c.side {
            Side::Plus => (c.k, 1, 0),
            Side::Minus => (c.k, 0, 1),
        };
        Self::from_sorted(vec![e])
    }

    pub fn entries(&self) -> &[(i32, u32, u32)] {
        &self.entries
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn momentum(&self) -> i64 {
        self.momentum
    }

    pub fn maxmode(&self) -> u32 {
        self.maxmode
    }

    pub fn support(&self) -> Vec<i32> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn alpha(&self, j: i32) -> u32 {
        self.find(j).map(|e| e.1).unwrap_or(0)
    }

    pub fn beta(&self, j: i32) -> u32 {
        self.find(j).map(|e| e.2).unwrap_or(0)
    }

    pub fn exponent(&self, c: Coord) -> u32 {
        match c.side {
            Side::Plus => self.alpha(c.k),
            Side::Minus => self.beta(c.k),
        }
    }

    fn find(&self, j: i32) -> Option<&(i32, u32, u32)> {
        self.entries.binary_search_by_key(&j, |e| e.0).ok().map(|i| &self.entries[i])
    }

    /// `|α|`.
    pub fn alpha_len(&self) -> u32 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// `|β|`.
    pub fn beta_len(&self) -> u32 {
        self.entries.iter().map(|e| e.2).sum()
    }

    /// `α_n + α_{-n} - β_n - β_{-n}` for `n ≥ 1`.
    pub fn super_charge(&self, n: u32) -> i64 {
        let n = n as i32;
        (self.alpha(n) + self.alpha(-n)) as i64 - (self.beta(n) + self.beta(-n)) as i64
    }

    /// Super-action preserving: `α_n + α_{-n} = β_n + β_{-n}` for every `n ≥ 1`.
    pub fn is_sap(&self) -> bool {
        let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
        for &(j, a, b) in &self.entries {
            *acc.entry(j.unsigned_abs()).or_insert(0) += a as i64 - b as i64;
        }
        acc.values().all(|&v| v == 0)
    }

    /// The set `𝔑(α, β)` of `n ≥ 1` with nonzero super charge.
    pub fn unbalanced_modes(&self) -> Vec<u32> {
        let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
        for &(j, a, b) in &self.entries {
            *acc.entry(j.unsigned_abs()).or_insert(0) += a as i64 - b as i64;
        }
        acc.into_iter().filter(|&(_, v)| v != 0).map(|(n, _)| n).collect()
    }

    /// Every factor is `|z_a|²`: `α = β`.
    pub fn is_integrable(&self) -> bool {
        self.entries.iter().all(|e| e.1 == e.2)
    }

    /// Exchange of `α` and `β` (index of the conjugate monomial).
    pub fn conj(&self) -> Self {
        MultiIndex {
            entries: self.entries.iter().map(|&(j, a, b)| (j, b, a)).collect(),
            len: self.len,
            momentum: -self.momentum,
            maxmode: self.maxmode,
        }
    }

    /// Index of the product of two monomials.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut k) = (0, 0);
        while i < a.len() && k < b.len() {
            match a[i].0.cmp(&b[k].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[k]);
                    k += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[k].1, a[i].2 + b[k].2));
                    i += 1;
                    k += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[k..]);
        MultiIndex {
            entries: out,
            len: self.len + other.len,
            momentum: self.momentum + other.momentum,
            maxmode: self.maxmode.max(other.maxmode),
        }
    }

    /// Multiplies by one coordinate.
    pub fn mul_coord(&self, c: Coord) -> Self {
        self.mul(&MultiIndex::single(c))
    }

    /// Removes one factor `c`; returns the reduced index and the exponent it had.
    pub fn reduce(&self, c: Coord) -> Option<(Self, u32)> {
        let pos = self.entries.binary_search_by_key(&c.k, |e| e.0).ok()?;
        let (j, a, b) = self.entries[pos];
        let e = match c.side {
            Side::Plus => a,
            Side::Minus => b,
        };
        if e == 0 {
            return None;
        }
        let mut entries = self.entries.clone();
        let (na, nb) = match c.side {
            Side::Plus => (a - 1, b),
            Side::Minus => (a, b - 1),
        };
        if na + nb == 0 {
            entries.remove(pos);
        } else {
            entries[pos] = (j, na, nb);
        }
        let maxmode = if na + nb == 0 {
            entries.iter().map(|e| e.0.unsigned_abs()).max().unwrap_or(0)
        } else {
            self.maxmode
        };
        Some((
            MultiIndex {
                entries,
                len: self.len - 1,
                momentum: self.momentum - c.momentum(),
                maxmode,
            },
            e,
        ))
    }

    /// Coordinates with multiplicity, sorted.
    pub fn coords(&self) -> Vec<Coord> {
        let mut v = Vec::with_capacity(self.len as usize);
        for &(j, a, b) in &self.entries {
            for _ in 0..b {
                v.push(Coord::minus(j));
            }
            for _ in 0..a {
                v.push(Coord::plus(j));
            }
        }
        v.sort();
        v
    }

    /// Distinct coordinates with their exponents.
    pub fn factors(&self) -> Vec<(Coord, u32)> {
        let mut v = Vec::with_capacity(2 * self.entries.len());
        for &(j, a, b) in &self.entries {
            if a > 0 {
                v.push((Coord::plus(j), a));
            }
            if b > 0 {
                v.push((Coord::minus(j), b));
            }
        }
        v
    }

    pub fn in_box(&self, box_j: u32) -> bool {
        self.maxmode <= box_j
    }

    /// Text tokens `j:side:exp`, one per nonzero exponent.
    pub fn to_tokens(&self) -> String {
        let mut parts = Vec::new();
        for &(j, a, b) in &self.entries {
            if a > 0 {
                parts.push(format!("{j}:+:{a}"));
            }
            if b > 0 {
                parts.push(format!("{j}:-:{b}"));
            }
        }
        parts.join(" ")
    }

    pub fn parse_tokens(s: &str) -> std::result::Result<Self, String> {
        let mut map: BTreeMap<i32, (u32, u32)> = BTreeMap::new();
        for tok in s.split_whitespace() {
            let mut it = tok.split(':');
            let (Some(j), Some(side), Some(e), None) = (it.next(), it.next(), it.next(), it.next())
            else {
                return Err(format!("bad monomial token `{tok}`"));
            };
            let j: i32 = j.parse().map_err(|_| format!("bad mode in `{tok}`"))?;
            if j == 0 {
                return Err("mode 0 in monomial".into());
            }
            let e: u32 = e.parse().map_err(|_| format!("bad exponent in `{tok}`"))?;
            let side = Side::from_symbol(side).ok_or_else(|| format!("bad side in `{tok}`"))?;
            let ent = map.entry(j).or_insert((0, 0));
            match side {
                Side::Plus => ent.0 += e,
                Side::Minus => ent.1 += e,
            }
        }
        MultiIndex::from_map(&map).map_err(|e| e.to_string())
    }
}

impl std::fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        write!(f, "{}", self.to_tokens())
    }
}
