//! Breadth-first enumeration of positive roots, normalization onto the
//! transverse hyperplane `V_1 = {v : sum v_i = 1}`, and the isotropic form.

use std::cmp::Ordering;
use std::ops::Deref;

use rayon::prelude::*;

use crate::datum::{CoxeterDatum, Vector};
use crate::error::{Error, Result};
use crate::spatial::SpatialIndex;

pub const DEFAULT_ROOT_CAP: usize = 5_000_000;
pub(crate) const DEDUP_TOL: f64 = 1e-8;
const DEDUP_CELL: f64 = 1e-6;
pub(crate) const NEGATIVE_TOL: f64 = -1e-9;
const ZERO_SUM_TOL: f64 = 1e-14;

/// Point of the transverse hyperplane `V_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedPoint(Vector);

impl NormalizedPoint {
    pub fn coords(&self) -> &Vector {
        &self.0
    }

    pub fn into_vector(self) -> Vector {
        self.0
    }
}

impl Deref for NormalizedPoint {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A positive root together with a minimal-length witness
/// `coords = r_{word[0]} ... r_{word[d-1]} a_base`.
#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub coords: Vector,
    pub depth: usize,
    pub word: Vec<usize>,
    pub base: usize,
}

impl Root {
    /// `|x|`, the coordinate sum.
    pub fn norm_sum(&self) -> f64 {
        self.coords.coord_sum()
    }

    pub fn normalized(&self) -> NormalizedPoint {
        normalize(&self.coords).expect("positive roots have positive coordinate sum")
    }
}

/// Project `v` to `V_1` along its ray.
pub fn normalize(v: &[f64]) -> Result<NormalizedPoint> {
    let s: f64 = v.iter().sum();
    if s.abs() <= ZERO_SUM_TOL || !s.is_finite() {
        return Err(Error::OnZeroHyperplane { sum: s });
    }
    Ok(NormalizedPoint(Vector(v.iter().map(|x| x / s).collect())))
}

/// `q(p) = B(p, p)`; zero exactly on the isotropic cone.
pub fn isotropy(datum: &CoxeterDatum, p: &[f64]) -> Result<f64> {
    datum.bilinear(p, p)
}

/// Apply `r_{word[0]} ∘ ... ∘ r_{word[k-1]}` to `v` (rightmost letter first).
pub fn apply_word(datum: &CoxeterDatum, word: &[usize], v: &[f64]) -> Result<Vector> {
    datum.check_dim(v)?;
    for &s in word {
        datum.check_index(s)?;
    }
    let mut out = Vector::from(v);
    for &s in word.iter().rev() {
        datum.reflect_in_place(s, &mut out);
    }
    Ok(out)
}

pub(crate) fn cmp_coords(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Positive roots up to a depth bound, in canonical order (depth, then
/// lexicographic coordinates).
#[derive(Debug, Clone)]
pub struct RootTable {
    datum: CoxeterDatum,
    roots: Vec<Root>,
    max_depth: usize,
}

impl RootTable {
    pub fn datum(&self) -> &CoxeterDatum {
        &self.datum
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Linear scan for a root within the dedup tolerance of `v`.
    pub fn position(&self, v: &[f64]) -> Option<usize> {
        self.roots.iter().position(|r| {
            r.coords
                .iter()
                .zip(v)
                .all(|(a, b)| (a - b).abs() <= DEDUP_TOL * a.abs().max(1.0))
        })
    }

    pub fn up_to_depth(&self, depth: usize) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(move |r| r.depth <= depth)
    }
}

pub fn generate_positive_roots(datum: &CoxeterDatum, max_depth: usize) -> Result<RootTable> {
    generate_positive_roots_capped(datum, max_depth, DEFAULT_ROOT_CAP)
}

pub fn generate_positive_roots_capped(
    datum: &CoxeterDatum,
    max_depth: usize,
    cap: usize,
) -> Result<RootTable> {
    let n = datum.rank();
    if n > cap {
        return Err(Error::CapacityExceeded(format!("{n} simple roots exceed cap {cap}")));
    }
    let mut index = SpatialIndex::new(DEDUP_CELL, DEDUP_TOL);
    let mut roots: Vec<Root> = (0..n)
        .map(|i| Root {
            coords: Vector::basis(n, i),
            depth: 0,
            word: Vec::new(),
            base: i,
        })
        .collect();
    roots.sort_by(|a, b| cmp_coords(&a.coords, &b.coords));
    for r in &roots {
        index.insert(&r.coords);
    }
    let mut layer_start = 0;
    for depth in 1..=max_depth {
        let layer = &roots[layer_start..];
        let mut candidates: Vec<Root> = layer
            .par_iter()
            .flat_map_iter(|x| {
                (0..n).filter_map(move |s| {
                    let mut c = x.coords.clone();
                    datum.reflect_in_place(s, &mut c);
                    if c.iter().any(|&v| v < NEGATIVE_TOL) {
                        return None;
                    }
                    let mut word = Vec::with_capacity(x.word.len() + 1);
                    word.push(s);
                    word.extend_from_slice(&x.word);
                    Some(Root {
                        coords: c,
                        depth,
                        word,
                        base: x.base,
                    })
                })
            })
            .collect();
        candidates.par_sort_by(|a, b| {
            cmp_coords(&a.coords, &b.coords)
                .then(a.base.cmp(&b.base))
                .then_with(|| a.word.cmp(&b.word))
        });
        layer_start = roots.len();
        for c in candidates {
            if index.insert_unique(&c.coords).1 {
                roots.push(c);
                if roots.len() > cap {
                    return Err(Error::CapacityExceeded(format!(
                        "more than {cap} roots at depth {depth}"
                    )));
                }
            }
        }
        if layer_start == roots.len() {
            break;
        }
    }
    Ok(RootTable {
        datum: datum.clone(),
        roots,
        max_depth,
    })
}
