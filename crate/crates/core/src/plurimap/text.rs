//! Map text format: `box J`, `linear identity|none|explicit`, then one coefficient
//! per line `deg d | j:side:exp ... | j:σ' -> k:σ | re im`.

use super::{OpPoly, PluriMap};
use crate::coords::{Coord, Side};
use crate::error::Result;
use crate::polyham::text::{fmt_c64, header, parse_c64, parse_monomial, perr};

fn fmt_coord(c: Coord) -> String {
    format!("{}:{}", c.k, c.side.symbol())
}

fn parse_coord(s: &str, line: usize) -> Result<Coord> {
    let (k, side) = s.trim().split_once(':').ok_or_else(|| perr(line, "bad coordinate"))?;
    let k: i32 = k.parse().map_err(|_| perr(line, "bad coordinate mode"))?;
    let side = Side::from_symbol(side).ok_or_else(|| perr(line, "bad coordinate side"))?;
    if k == 0 {
        return Err(perr(line, "mode 0 in coordinate"));
    }
    Ok(Coord::new(k, side))
}

fn write_op(s: &mut String, op: &OpPoly) {
    for ((r, c), p) in op.iter() {
        for (m, v) in p.iter() {
            s.push_str(&format!(
                "deg {} | {} | {} -> {} | {}\n",
                m.len(),
                m.to_tokens(),
                fmt_coord(*c),
                fmt_coord(*r),
                fmt_c64(*v)
            ));
        }
    }
}

pub(crate) fn map_to_text(m: &PluriMap) -> String {
    let mut s = format!("box {}\n", m.box_j());
    match m.linear() {
        None => s.push_str("linear none\n"),
        Some(_) if m.has_identity() => s.push_str("linear identity\n"),
        Some(l) => {
            s.push_str("linear explicit\n");
            write_op(&mut s, l);
        }
    }
    write_op(&mut s, m.nonlin());
    s
}

pub(crate) fn map_from_text(text: &str) -> Result<PluriMap> {
    let (box_j, lines) = header(text)?;
    let mut it = lines.into_iter();
    let (ln, mode) = it.next().ok_or_else(|| perr(2, "missing `linear` line"))?;
    let mode = mode.strip_prefix("linear ").ok_or_else(|| perr(ln, "expected `linear ...`"))?.trim();
    if !matches!(mode, "identity" | "none" | "explicit") {
        return Err(perr(ln, "linear must be identity, none or explicit"));
    }
    let mut lin = OpPoly::zero(box_j);
    let mut nonlin = OpPoly::zero(box_j);
    for (ln, l) in it {
        let parts: Vec<&str> = l.split('|').collect();
        if parts.len() != 4 {
            return Err(perr(ln, "expected four `|`-separated fields"));
        }
        let m = parse_monomial(parts[0], parts[1], ln)?;
        let (col, row) = parts[2].split_once("->").ok_or_else(|| perr(ln, "expected `col -> row`"))?;
        let (col, row) = (parse_coord(col, ln)?, parse_coord(row, ln)?);
        if !m.in_box(box_j) || !col.in_box(box_j) || !row.in_box(box_j) {
            return Err(perr(ln, "entry outside box"));
        }
        let v = parse_c64(parts[3], ln)?;
        let target = if m.is_empty() {
            if mode != "explicit" {
                return Err(perr(ln, "degree-0 entry requires `linear explicit`"));
            }
            &mut lin
        } else {
            &mut nonlin
        };
        let mut p = target.get(row, col);
        if p.get(&m) != num_complex::Complex64::new(0.0, 0.0) {
            return Err(perr(ln, "duplicate coefficient"));
        }
        p.set(m, v);
        target.set(row, col, p);
    }
    let linear = match mode {
        "identity" => Some(OpPoly::identity(box_j)),
        "none" => None,
        _ => Some(lin),
    };
    PluriMap::new(box_j, linear, nonlin)
}
