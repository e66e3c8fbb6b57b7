//! Line-oriented text format: a `box J` header, then one monomial per line
//! `deg d | j:side:exp ... | re im`. Floats use the shortest round-trip form.

use num_complex::Complex64 as C64;

use super::{Poly, PolyHamiltonian};
use crate::error::{LabError, Result};
use crate::resonance::MultiIndex;

pub(crate) fn fmt_c64(c: C64) -> String {
    format!("{:e} {:e}", c.re, c.im)
}

pub(crate) fn parse_c64(s: &str, line: usize) -> Result<C64> {
    let mut it = s.split_whitespace();
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return Err(perr(line, "expected `re im`"));
    };
    let re: f64 = a.parse().map_err(|_| perr(line, "bad real part"))?;
    let im: f64 = b.parse().map_err(|_| perr(line, "bad imaginary part"))?;
    Ok(C64::new(re, im))
}

pub(crate) fn perr(line: usize, msg: &str) -> LabError {
    LabError::Parse { line, msg: msg.to_string() }
}

/// Parses `deg d` and the monomial tokens, checking their agreement.
pub(crate) fn parse_monomial(deg: &str, toks: &str, line: usize) -> Result<MultiIndex> {
    let d: u32 = deg
        .trim()
        .strip_prefix("deg ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| perr(line, "expected `deg d`"))?;
    let m = MultiIndex::parse_tokens(toks).map_err(|e| perr(line, &e))?;
    if m.len() != d {
        return Err(perr(line, "degree does not match monomial"));
    }
    Ok(m)
}

/// Reads the `box J` header and returns the remaining numbered content lines.
pub(crate) fn header(s: &str) -> Result<(u32, Vec<(usize, &str)>)> {
    let mut lines = s
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, first) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let box_j: u32 = first
        .strip_prefix("box ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| perr(ln, "expected `box J` header"))?;
    Ok((box_j, lines.collect()))
}

pub(crate) fn ham_to_text(h: &PolyHamiltonian) -> String {
    let mut s = format!("box {}\n", h.box_j());
    for (m, c) in h.iter() {
        s.push_str(&format!("deg {} | {} | {}\n", m.len(), m.to_tokens(), fmt_c64(*c)));
    }
    s
}

pub(crate) fn ham_from_text(s: &str) -> Result<PolyHamiltonian> {
    let (box_j, lines) = header(s)?;
    let mut p = Poly::zero();
    for (ln, l) in lines {
        let parts: Vec<&str> = l.split('|').collect();
        if parts.len() != 3 {
            return Err(perr(ln, "expected three `|`-separated fields"));
        }
        let m = parse_monomial(parts[0], parts[1], ln)?;
        if !m.in_box(box_j) {
            return Err(perr(ln, "monomial outside box"));
        }
        if p.get(&m) != C64::new(0.0, 0.0) {
            return Err(perr(ln, "duplicate monomial"));
        }
        p.set(m, parse_c64(parts[2], ln)?);
    }
    Ok(PolyHamiltonian::from_poly_unchecked(box_j, p))
}
