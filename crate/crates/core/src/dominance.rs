//! Dominance between positive roots.
//!
//! Presence is decided by the Gram pairing (`B(x,y) >= 1`). Direction is
//! decided geometrically: on the line through `x̂` and `ŷ`, the dominating
//! root lies between the other root and the isotropic cone. A brute-force
//! word enumeration over the group serves as the referee and as fallback
//! in the tangent case.

use std::fmt;

use crate::conic::line_roots;
use crate::datum::{max_dist, CoxeterDatum};
use crate::error::{Error, Result};
use crate::rootgen::{cmp_coords, normalize, Root, RootTable};

pub const PRESENCE_TOL: f64 = 1e-9;
pub const DEFAULT_WORD_BUDGET: usize = 50_000_000;
/// Oracle word length used when the separation test degenerates.
pub const DEFAULT_FALLBACK_LEN: usize = 8;
const EQUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    XdomY,
    YdomX,
    Equal,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Gram,
    Separation,
    Oracle,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::XdomY => "x_dom_y",
            Direction::YdomX => "y_dom_x",
            Direction::Equal => "equal",
            Direction::None => "none",
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Gram => "gram",
            Method::Separation => "separation",
            Method::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DominanceVerdict {
    pub present: bool,
    pub direction: Direction,
    pub method: Method,
}

pub fn dominance_present(datum: &CoxeterDatum, x: &[f64], y: &[f64]) -> Result<bool> {
    Ok(datum.bilinear(x, y)? >= 1.0 - PRESENCE_TOL)
}

/// Decide the direction of dominance from the position of `x̂`, `ŷ` and the
/// isotropic points on their common line.
pub fn dominates_separation(
    datum: &CoxeterDatum,
    x: &[f64],
    y: &[f64],
) -> Result<DominanceVerdict> {
    let bxy = datum.bilinear(x, y)?;
    if bxy < 1.0 - PRESENCE_TOL {
        return Err(Error::NotComparable(bxy));
    }
    if max_dist(x, y) <= EQUAL_TOL * crate::datum::max_abs(x).max(1.0) {
        return Ok(DominanceVerdict {
            present: true,
            direction: Direction::Equal,
            method: Method::Separation,
        });
    }
    if (bxy - 1.0).abs() <= PRESENCE_TOL {
        return Err(Error::Degenerate(bxy));
    }
    let xh = normalize(x)?;
    let yh = normalize(y)?;
    let roots = line_roots(datum, &xh, &yh);
    let direction = match roots.params.as_slice() {
        [t0, t1] if *t1 < 0.0 && *t0 < 0.0 => Direction::XdomY,
        [t0, t1] if *t0 > 1.0 && *t1 > 1.0 => Direction::YdomX,
        _ => return Err(Error::Degenerate(bxy)),
    };
    Ok(DominanceVerdict {
        present: true,
        direction,
        method: Method::Separation,
    })
}

fn is_negative(v: &[f64]) -> bool {
    v.iter().sum::<f64>() < 0.0
}

/// Search all words of length `<= max_len` (no letter repeated
/// consecutively) for `w` with `wx` negative but `wy` positive.
///
/// Returns `false` when such a witness exists (exact), `true` otherwise
/// (exact only up to the cutoff).
pub fn dominates_oracle(
    datum: &CoxeterDatum,
    x: &[f64],
    y: &[f64],
    max_len: usize,
) -> Result<bool> {
    dominates_oracle_budget(datum, x, y, max_len, DEFAULT_WORD_BUDGET)
}

pub fn dominates_oracle_budget(
    datum: &CoxeterDatum,
    x: &[f64],
    y: &[f64],
    max_len: usize,
    budget: usize,
) -> Result<bool> {
    datum.check_dim(x)?;
    datum.check_dim(y)?;
    if max_len == 0 {
        return Err(Error::InvalidArgument("oracle word length must be >= 1".into()));
    }
    let n = datum.rank();
    // stack of (wx, wy, last letter, length)
    let mut stack: Vec<(Vec<f64>, Vec<f64>, usize, usize)> = vec![(x.to_vec(), y.to_vec(), usize::MAX, 0)];
    let mut visited = 0usize;
    while let Some((wx, wy, last, len)) = stack.pop() {
        if len == max_len {
            continue;
        }
        for s in (0..n).rev() {
            if s == last {
                continue;
            }
            visited += 1;
            if visited > budget {
                return Err(Error::CapacityExceeded(format!(
                    "oracle exceeded {budget} words"
                )));
            }
            let mut nx = wx.clone();
            let mut ny = wy.clone();
            datum.reflect_in_place(s, &mut nx);
            datum.reflect_in_place(s, &mut ny);
            if is_negative(&nx) && !is_negative(&ny) {
                return Ok(false);
            }
            stack.push((nx, ny, s, len + 1));
        }
    }
    Ok(true)
}

/// Full verdict: Gram presence, separation direction, oracle fallback.
pub fn dominance_verdict(
    datum: &CoxeterDatum,
    x: &[f64],
    y: &[f64],
    fallback_len: usize,
) -> Result<DominanceVerdict> {
    match dominates_separation(datum, x, y) {
        Ok(v) => Ok(v),
        Err(Error::NotComparable(_)) => Ok(DominanceVerdict {
            present: false,
            direction: Direction::None,
            method: Method::Gram,
        }),
        Err(Error::Degenerate(_)) => {
            let xy = dominates_oracle(datum, x, y, fallback_len)?;
            let yx = dominates_oracle(datum, y, x, fallback_len)?;
            let direction = match (xy, yx) {
                (true, false) => Direction::XdomY,
                (false, true) => Direction::YdomX,
                (true, true) => Direction::Equal,
                (false, false) => Direction::None,
            };
            Ok(DominanceVerdict {
                present: true,
                direction,
                method: Method::Oracle,
            })
        }
        Err(e) => Err(e),
    }
}

/// `A(base) = { x in table | x dom base }`, canonically sorted.
pub fn dominance_cone(datum: &CoxeterDatum, base: &[f64], table: &RootTable) -> Result<Vec<Root>> {
    datum.check_dim(base)?;
    if table.position(base).is_none() {
        return Err(Error::BaseNotInTable);
    }
    let mut out = Vec::new();
    for r in table.roots() {
        if !dominance_present(datum, &r.coords, base)? {
            continue;
        }
        let v = dominance_verdict(datum, &r.coords, base, DEFAULT_FALLBACK_LEN)?;
        if matches!(v.direction, Direction::XdomY | Direction::Equal) {
            out.push(r.clone());
        }
    }
    out.sort_by(|a, b| a.depth.cmp(&b.depth).then_with(|| cmp_coords(&a.coords, &b.coords)));
    Ok(out)
}
