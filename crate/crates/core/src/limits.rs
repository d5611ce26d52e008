//! Numerical estimates of the limit-root set `E`, the projective `·`-action,
//! and the dominance neighborhoods `N_i` around a dihedral limit `â_∞`.
//!
//! `E` is approximated two ways: normalized deep roots clustered at a
//! tolerance, and exact limit points of hyperbolic dihedral subsystems
//! (plus their `W`-orbits). Accumulation is replaced by finite-depth
//! clustering; the parameters travel with every cloud.

use std::fmt;

use crate::conic::{line_roots, point_at};
use crate::datum::{max_dist, CoxeterDatum, Vector};
use crate::dihedral::{make_dihedral_pair, DihedralPair, PairKind, Side};
use crate::dominance::dominance_cone;
use crate::error::{Error, Result};
use crate::rootgen::{normalize, NormalizedPoint, RootTable};
use crate::spatial::SpatialIndex;

const CHART_TOL: f64 = 1e-14;
const FIXED_POINT_TOL: f64 = 1e-10;
const ON_CONE_TOL: f64 = 1e-9;
const PROBE_CONE_TOL: f64 = 1e-6;
const CONE_TOL: f64 = 1e-12;
const HYPERBOLIC_TOL: f64 = 1e-12;
/// Clustering tolerance for exact limit samples.
pub const E2_CLUSTER_TOL: f64 = 1e-9;
/// Coefficients along `b̂_∞` below this are indistinguishable from zero in
/// double precision once amplified by `e^{2iθ}`.
const B_INF_COEFF_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    DeepRoot { depth: usize },
    DihedralPair { i: usize, j: usize, side: Side },
    Orbit { word: Vec<usize>, base: (usize, usize) },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::DeepRoot { depth } => write!(f, "deep_root({depth})"),
            Provenance::DihedralPair { i, j, side } => {
                let s = match side {
                    Side::A => "a",
                    Side::B => "b",
                };
                write!(f, "dihedral_pair({},{},{s})", i + 1, j + 1)
            }
            Provenance::Orbit { word, base } => {
                let w: Vec<String> = word.iter().map(|s| (s + 1).to_string()).collect();
                write!(f, "orbit({}@{},{})", w.join("-"), base.0 + 1, base.1 + 1)
            }
        }
    }
}

/// Clustered numerical sample of `E`.
#[derive(Debug, Clone)]
pub struct LimitCloud {
    pub points: Vec<NormalizedPoint>,
    pub residuals: Vec<f64>,
    pub provenance: Vec<Provenance>,
    pub cluster_tol: f64,
}

impl LimitCloud {
    fn cluster(
        datum: &CoxeterDatum,
        candidates: impl IntoIterator<Item = (NormalizedPoint, Provenance)>,
        cluster_tol: f64,
    ) -> LimitCloud {
        let mut index = SpatialIndex::new(cluster_tol, cluster_tol);
        let mut cloud = LimitCloud {
            points: Vec::new(),
            residuals: Vec::new(),
            provenance: Vec::new(),
            cluster_tol,
        };
        for (p, prov) in candidates {
            if index.insert_unique(&p).1 {
                cloud.residuals.push(datum.form(&p, &p).abs());
                cloud.points.push(p);
                cloud.provenance.push(prov);
            }
        }
        cloud
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m: f64, r| m.max(*r))
    }

    /// Max-norm distance from `p` to the nearest cloud point.
    pub fn distance_to(&self, p: &[f64]) -> f64 {
        self.points
            .iter()
            .map(|q| max_dist(q, p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Largest distance from a point of `estimate` to the nearest point of
/// `reference`.
pub fn cross_validation_distance(estimate: &LimitCloud, reference: &LimitCloud) -> f64 {
    estimate
        .points
        .iter()
        .map(|p| reference.distance_to(p))
        .fold(0.0, f64::max)
}

/// Normalized roots of depth `>= min_depth`, greedily clustered in canonical
/// order (first representative kept).
pub fn estimate_limit_cloud(
    datum: &CoxeterDatum,
    table: &RootTable,
    min_depth: usize,
    cluster_tol: f64,
) -> Result<LimitCloud> {
    if min_depth > table.max_depth() {
        return Err(Error::InvalidArgument(format!(
            "min_depth {min_depth} exceeds table depth {}",
            table.max_depth()
        )));
    }
    if !(cluster_tol > 0.0) {
        return Err(Error::InvalidArgument("cluster tolerance must be positive".into()));
    }
    let selected: Vec<_> = table
        .roots()
        .iter()
        .filter(|r| r.depth >= min_depth)
        .map(|r| (r.normalized(), Provenance::DeepRoot { depth: r.depth }))
        .collect();
    if selected.is_empty() {
        return Err(Error::EmptySelection(min_depth));
    }
    Ok(LimitCloud::cluster(datum, selected, cluster_tol))
}

/// Points of `Q̂` on the line through `p` and `q`, in order along the line.
pub fn line_isotropic_intersections(
    datum: &CoxeterDatum,
    p: &[f64],
    q: &[f64],
) -> Result<Vec<NormalizedPoint>> {
    datum.check_dim(p)?;
    datum.check_dim(q)?;
    if max_dist(p, q) == 0.0 {
        return Err(Error::IdenticalPoints);
    }
    line_roots(datum, p, q)
        .params
        .into_iter()
        .map(|t| normalize(&point_at(p, q, t)))
        .collect()
}

/// `w · p = ŵp`, normalizing after every letter.
pub fn dot_action(datum: &CoxeterDatum, word: &[usize], p: &[f64]) -> Result<NormalizedPoint> {
    datum.check_dim(p)?;
    for &s in word {
        datum.check_index(s)?;
    }
    let mut v = Vector::from(p);
    let sum = v.coord_sum();
    if sum.abs() <= CHART_TOL {
        return Err(Error::LeavesChartD { sum });
    }
    for &s in word.iter().rev() {
        datum.reflect_in_place(s, &mut v);
        let sum = v.coord_sum();
        if sum.abs() <= CHART_TOL {
            return Err(Error::LeavesChartD { sum });
        }
        v = v.scaled(1.0 / sum);
    }
    normalize(&v)
}

#[derive(Debug, Clone)]
pub struct GeometricActionReport {
    pub fixed_point: bool,
    /// `r_α · x`
    pub image: NormalizedPoint,
    pub residual: f64,
}

/// Check that `r_α · x` is the second point where the line `L(α̂, x)` meets
/// `Q̂`, or that `x` is fixed when `B(α, x) = 0`.
pub fn verify_geometric_action(
    datum: &CoxeterDatum,
    alpha: &[f64],
    x: &[f64],
) -> Result<GeometricActionReport> {
    datum.check_dim(alpha)?;
    let q = datum.bilinear(x, x)?;
    if q.abs() > ON_CONE_TOL {
        return Err(Error::NotIsotropic(q.abs()));
    }
    let bax = datum.form(alpha, x);
    let raw = Vector::from(x).axpy(-2.0 * bax, alpha);
    let sum = raw.coord_sum();
    if sum.abs() <= CHART_TOL {
        return Err(Error::LeavesChartD { sum });
    }
    let image = normalize(&raw)?;
    if bax.abs() <= FIXED_POINT_TOL {
        let residual = max_dist(&image, x);
        return Ok(GeometricActionReport {
            fixed_point: true,
            image,
            residual,
        });
    }
    let alpha_hat = normalize(alpha)?;
    let hits = line_isotropic_intersections(datum, &alpha_hat, x)?;
    let residual = match hits.as_slice() {
        [u, v] => {
            let straight = max_dist(u, x).max(max_dist(v, &image));
            let crossed = max_dist(v, x).max(max_dist(u, &image));
            straight.min(crossed)
        }
        _ => f64::INFINITY,
    };
    Ok(GeometricActionReport {
        fixed_point: false,
        image,
        residual,
    })
}

/// Evaluates `B(a_i, η)` for the dominance cone `A_i` over
/// `a_i = (r_a r_b)^i a`.
#[derive(Debug, Clone)]
pub struct NeighborhoodProbe {
    pub pair: DihedralPair,
    pub index: usize,
    pub a_i: Vector,
    pub certificate_margin: Option<f64>,
}

impl NeighborhoodProbe {
    pub fn new(pair: &DihedralPair, index: usize) -> Result<Self> {
        let a_i = pair.sequence_root(index, Side::A)?;
        Ok(NeighborhoodProbe {
            pair: pair.clone(),
            index,
            a_i,
            certificate_margin: None,
        })
    }

    /// `B(a_i, η) > 0`; the margin is kept in `certificate_margin`.
    pub fn certify(&mut self, eta: &[f64]) -> Result<bool> {
        let d = self.pair.datum();
        let q = d.bilinear(eta, eta)?;
        if q.abs() > PROBE_CONE_TOL {
            return Err(Error::NotIsotropic(q.abs()));
        }
        let margin = neighborhood_margin(&self.pair, self.index, eta)?;
        self.certificate_margin = Some(margin);
        Ok(margin > 0.0)
    }
}

pub fn certify_neighborhood(probe: &mut NeighborhoodProbe, eta: &[f64]) -> Result<bool> {
    probe.certify(eta)
}

/// `B(a_i, η)` through `η = α â_∞ + β b̂_∞ + ρ`:
/// `B(a_i, η) = α e^{-2iθ} B(a, â_∞) + β e^{2iθ} B(a, b̂_∞)`.
///
/// Direct evaluation cancels catastrophically once `a_i` has grown by
/// `e^{2iθ}`; this form stays accurate for every `i`.
pub fn neighborhood_margin(pair: &DihedralPair, i: usize, eta: &[f64]) -> Result<f64> {
    let theta = pair.theta().ok_or(Error::AffinePair)?;
    let [paa, _, pba, _] = pair.limit_pairings()?;
    let coords = pair.limit_coordinates(eta)?;
    let alpha = coords.along_a_inf;
    let mut beta = coords.along_b_inf;
    if beta.abs() <= B_INF_COEFF_FLOOR * alpha.abs().max(1.0) {
        beta = 0.0;
    }
    let g = 2.0 * i as f64 * theta;
    let shrink = if alpha == 0.0 { 0.0 } else { alpha * paa * (-g).exp() };
    let grow = if beta == 0.0 { 0.0 } else { beta * pba * g.exp() };
    Ok(shrink + grow)
}

/// Whether some root of `A_i` (within `table`) normalizes to within `eps`
/// of `eta`. Approximates `η ∈ N_i` relative to the table depth.
pub fn neighborhood_membership(
    pair: &DihedralPair,
    i: usize,
    table: &RootTable,
    eta: &[f64],
    eps: f64,
) -> Result<bool> {
    let a_i = pair.sequence_root(i, Side::A)?;
    let cone = dominance_cone(pair.datum(), &a_i, table)?;
    Ok(cone.iter().any(|r| max_dist(&r.normalized(), eta) <= eps))
}

/// Smallest `i <= i_max` whose probe fails to certify `eta`.
pub fn shrink_witness(pair: &DihedralPair, eta: &[f64], i_max: usize) -> Result<Option<usize>> {
    for i in 0..=i_max {
        if neighborhood_margin(pair, i, eta)? <= 0.0 {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Membership in `𝒦 = { v ∈ PLC(Π) | B(v, a) <= 0 for all a ∈ Π }`.
pub fn fundamental_cone_contains(datum: &CoxeterDatum, v: &[f64]) -> Result<bool> {
    datum.check_dim(v)?;
    if v.iter().any(|&x| x < -CONE_TOL) || v.iter().all(|&x| x <= CONE_TOL) {
        return Ok(false);
    }
    Ok((0..datum.rank()).all(|s| datum.pair_simple(s, v) <= CONE_TOL))
}

/// Exact limit points of hyperbolic dihedral subsystems spanned by table
/// roots, plus the `·`-orbit of the first `â_∞` under short words.
pub fn sample_e2(
    datum: &CoxeterDatum,
    table: &RootTable,
    pair_budget: usize,
    word_budget: usize,
) -> Result<LimitCloud> {
    if pair_budget == 0 {
        return Err(Error::InvalidArgument("pair budget must be >= 1".into()));
    }
    let roots = table.roots();
    let mut pairs: Vec<(usize, usize, DihedralPair)> = Vec::new();
    'scan: for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            if datum.form(&roots[i].coords, &roots[j].coords) < -1.0 - HYPERBOLIC_TOL {
                let p = make_dihedral_pair(datum, &roots[i].coords, &roots[j].coords)?;
                debug_assert_eq!(p.kind(), PairKind::Hyperbolic);
                pairs.push((i, j, p));
                if pairs.len() == pair_budget {
                    break 'scan;
                }
            }
        }
    }
    let Some((bi, bj, base)) = pairs.first() else {
        return Err(Error::NoHyperbolicPairs);
    };
    let mut candidates: Vec<(NormalizedPoint, Provenance)> = Vec::new();
    for (i, j, p) in &pairs {
        candidates.push((p.a_inf().clone(), Provenance::DihedralPair { i: *i, j: *j, side: Side::A }));
        candidates.push((p.b_inf().clone(), Provenance::DihedralPair { i: *i, j: *j, side: Side::B }));
    }
    for word in words_up_to(datum.rank(), word_budget) {
        if let Ok(p) = dot_action(datum, &word, base.a_inf()) {
            candidates.push((p, Provenance::Orbit { word, base: (*bi, *bj) }));
        }
    }
    Ok(LimitCloud::cluster(datum, candidates, E2_CLUSTER_TOL))
}

/// Nonempty words of length `<= max_len` without immediate repeats, in
/// shortlex order.
pub(crate) fn words_up_to(rank: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for s in 0..rank {
                if w.last() == Some(&s) {
                    continue;
                }
                let mut v = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
