//! Infinite dihedral reflection subgroups `W_{a,b}` with `B(a,b) <= -1`.
//!
//! With `cosh θ = -B(a,b)` and `c_i = sinh(iθ)/sinh θ`, the alternating
//! products satisfy `(r_a r_b)^i a = c_{2i+1} a + c_{2i} b`, and the
//! normalized roots accumulate at the two isotropic points `â_∞`, `b̂_∞` of
//! the plane `span(a, b)`.

use crate::datum::{max_dist, CoxeterDatum, Vector};
use crate::error::{Error, Result};
use crate::rootgen::{normalize, NormalizedPoint, Root, RootTable};

const AFFINE_TOL: f64 = 1e-12;
const DEGENERATE_SEED_TOL: f64 = 1e-12;
const COLLINEAR_TOL: f64 = 1e-10;
const CONVERGENCE_TOL: f64 = 1e-12;
pub const MAX_PERIODIC_ITERS: usize = 200;
const PLANE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    Hyperbolic,
    Affine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Two positive roots spanning an infinite dihedral subsystem.
#[derive(Debug, Clone)]
pub struct DihedralPair {
    datum: CoxeterDatum,
    a: Vector,
    b: Vector,
    cosh_theta: f64,
    theta: Option<f64>,
    kind: PairKind,
    a_inf: NormalizedPoint,
    b_inf: NormalizedPoint,
    norm_a: f64,
    norm_b: f64,
}

/// `arcosh(x) = ln(x + sqrt(x^2 - 1))` for `x >= 1`.
pub fn arcosh(x: f64) -> f64 {
    (x + (x * x - 1.0).max(0.0).sqrt()).ln()
}

/// `c_0 .. c_{len-1}` from `c_{i+1} = 2 cosh θ c_i - c_{i-1}`.
pub fn chebyshev_sequence(cosh_theta: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let (mut prev, mut cur) = (0.0, 1.0);
    for i in 0..len {
        if i == 0 {
            out.push(0.0);
            continue;
        }
        out.push(cur);
        let next = 2.0 * cosh_theta * cur - prev;
        prev = cur;
        cur = next;
    }
    out
}

/// `c_i = sinh(iθ)/sinh θ`, evaluated by the linear recurrence.
pub fn chebyshev_c(theta: f64, i: usize) -> f64 {
    chebyshev_sequence(theta.cosh(), i + 1)[i]
}

/// 2×2 matrix in the ordered basis `(a, b)`, row-major.
pub type Matrix2 = [[f64; 2]; 2];

pub fn make_dihedral_pair(datum: &CoxeterDatum, a: &[f64], b: &[f64]) -> Result<DihedralPair> {
    let bab = datum.bilinear(a, b)?;
    if bab > -1.0 + AFFINE_TOL {
        return Err(Error::NotInfiniteDihedral(bab));
    }
    let norm_a: f64 = a.iter().sum();
    let norm_b: f64 = b.iter().sum();
    let a_hat = normalize(a)?;
    let b_hat = normalize(b)?;
    let x = -bab;
    let (kind, theta, a_inf, b_inf) = if x < 1.0 + AFFINE_TOL {
        // B(a,b) = -1: q(ua + vb) = (u - v)^2, single isotropic line R(a + b)
        let v: Vec<f64> = a.iter().zip(b).map(|(p, q)| p + q).collect();
        let p = normalize(&v)?;
        (PairKind::Affine, None, p.clone(), p)
    } else {
        let theta = arcosh(x);
        let plus = theta.exp();
        let minus = (-theta).exp();
        (
            PairKind::Hyperbolic,
            Some(theta),
            convex_limit(plus, norm_a, norm_b, &a_hat, &b_hat)?,
            convex_limit(minus, norm_a, norm_b, &a_hat, &b_hat)?,
        )
    };
    Ok(DihedralPair {
        datum: datum.clone(),
        a: Vector::from(a),
        b: Vector::from(b),
        cosh_theta: x,
        theta,
        kind,
        a_inf,
        b_inf,
        norm_a,
        norm_b,
    })
}

/// `[λ|a| â + |b| b̂] / [λ|a| + |b|]`
fn convex_limit(
    lambda: f64,
    norm_a: f64,
    norm_b: f64,
    a_hat: &[f64],
    b_hat: &[f64],
) -> Result<NormalizedPoint> {
    let wa = lambda * norm_a;
    let den = wa + norm_b;
    let v: Vec<f64> = a_hat
        .iter()
        .zip(b_hat)
        .map(|(x, y)| (wa * x + norm_b * y) / den)
        .collect();
    normalize(&v)
}

/// Pairings of the limit points with `a` and `b` in an eigen-decomposition
/// `η = α â_∞ + β b̂_∞ + ρ`, `ρ` B-orthogonal to the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitCoordinates {
    pub along_a_inf: f64,
    pub along_b_inf: f64,
}

impl DihedralPair {
    pub fn datum(&self) -> &CoxeterDatum {
        &self.datum
    }

    pub fn a(&self) -> &Vector {
        &self.a
    }

    pub fn b(&self) -> &Vector {
        &self.b
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }

    pub fn theta(&self) -> Option<f64> {
        self.theta
    }

    pub fn cosh_theta(&self) -> f64 {
        self.cosh_theta
    }

    pub fn a_inf(&self) -> &NormalizedPoint {
        &self.a_inf
    }

    pub fn b_inf(&self) -> &NormalizedPoint {
        &self.b_inf
    }

    pub fn norm_a(&self) -> f64 {
        self.norm_a
    }

    pub fn norm_b(&self) -> f64 {
        self.norm_b
    }

    fn require_hyperbolic(&self) -> Result<f64> {
        match self.kind {
            PairKind::Hyperbolic => Ok(self.theta.expect("hyperbolic pairs carry θ")),
            PairKind::Affine => Err(Error::AffinePair),
        }
    }

    /// `a_i = c_{2i+1} a + c_{2i} b` (side A) or `b_i = c_{2i} a + c_{2i+1} b`.
    pub fn sequence_root(&self, i: usize, side: Side) -> Result<Vector> {
        self.require_hyperbolic()?;
        let c = chebyshev_sequence(self.cosh_theta, 2 * i + 2);
        let (ca, cb) = match side {
            Side::A => (c[2 * i + 1], c[2 * i]),
            Side::B => (c[2 * i], c[2 * i + 1]),
        };
        Ok(self.combine(ca, cb))
    }

    /// `x_k = c_{k+1} a + c_k b`: the roots met one reflection at a time along
    /// `a, r_a b, r_a r_b a, r_a r_b r_a b, ...`; `x_{2i} = a_i`.
    pub fn alternating_root(&self, k: usize) -> Result<Vector> {
        self.require_hyperbolic()?;
        let c = chebyshev_sequence(self.cosh_theta, k + 2);
        Ok(self.combine(c[k + 1], c[k]))
    }

    fn combine(&self, ca: f64, cb: f64) -> Vector {
        Vector(
            self.a
                .iter()
                .zip(self.b.iter())
                .map(|(x, y)| ca * x + cb * y)
                .collect(),
        )
    }

    /// Matrix of `r_a r_b` on `span(a, b)` in the basis `(a, b)`.
    pub fn rotation_matrix(&self) -> Result<Matrix2> {
        self.require_hyperbolic()?;
        let ch = self.cosh_theta;
        Ok([[4.0 * ch * ch - 1.0, -2.0 * ch], [2.0 * ch, -1.0]])
    }

    /// `A^i = [[c_{2i+1}, -c_{2i}], [c_{2i}, -c_{2i-1}]]`.
    pub fn rotation_matrix_power(&self, i: usize) -> Result<Matrix2> {
        self.require_hyperbolic()?;
        if i == 0 {
            return Err(Error::InvalidArgument("matrix power needs i >= 1".into()));
        }
        let c = chebyshev_sequence(self.cosh_theta, 2 * i + 2);
        Ok([[c[2 * i + 1], -c[2 * i]], [c[2 * i], -c[2 * i - 1]]])
    }

    /// `(B(â_∞,a), B(â_∞,b), B(b̂_∞,a), B(b̂_∞,b))` from coordinates.
    pub fn limit_pairings(&self) -> Result<[f64; 4]> {
        self.require_hyperbolic()?;
        let f = |p: &[f64], r: &[f64]| self.datum.form(p, r);
        Ok([
            f(&self.a_inf, &self.a),
            f(&self.a_inf, &self.b),
            f(&self.b_inf, &self.a),
            f(&self.b_inf, &self.b),
        ])
    }

    /// Closed-form pairings `sinh θ / ((cosh θ + sinh θ)|a| + |b|)` and
    /// companions, in the order of [`limit_pairings`](Self::limit_pairings).
    pub fn limit_pairings_closed_form(&self) -> Result<[f64; 4]> {
        let theta = self.require_hyperbolic()?;
        let (ch, sh) = (theta.cosh(), theta.sinh());
        let (na, nb) = (self.norm_a, self.norm_b);
        let dp = (ch + sh) * na + nb;
        let dm = (ch - sh) * na + nb;
        Ok([sh / dp, -sh * (ch + sh) / dp, -sh / dm, sh * (ch - sh) / dm])
    }

    /// Coefficients of `η` along `â_∞` and `b̂_∞`, solved from `B(η,a)` and
    /// `B(η,b)`; the B-orthogonal remainder pairs to zero with the plane.
    pub fn limit_coordinates(&self, eta: &[f64]) -> Result<LimitCoordinates> {
        let [paa, pab, pba, pbb] = self.limit_pairings()?;
        self.datum.check_dim(eta)?;
        let ea = self.datum.form(eta, &self.a);
        let eb = self.datum.form(eta, &self.b);
        // [paa pba; pab pbb] [α; β] = [ea; eb]
        let det = paa * pbb - pba * pab;
        Ok(LimitCoordinates {
            along_a_inf: (ea * pbb - pba * eb) / det,
            along_b_inf: (paa * eb - pab * ea) / det,
        })
    }

    /// Limit of `ŵ c` for `w = (r_a r_b)^i`, `i → ∞`.
    pub fn periodic_limit(&self, c: &[f64]) -> Result<NormalizedPoint> {
        self.require_hyperbolic()?;
        self.datum.check_dim(c)?;
        let d = &self.datum;
        let bac = d.form(&self.a, c);
        let bbc = d.form(&self.b, c);
        if bac.abs() <= DEGENERATE_SEED_TOL && bbc.abs() <= DEGENERATE_SEED_TOL {
            return Err(Error::DegenerateSeed);
        }
        let step = |v: &[f64]| -> Vector {
            let v = d.reflect_in(&self.b, v).expect("dimensions checked");
            d.reflect_in(&self.a, &v).expect("dimensions checked")
        };
        let image = step(c);
        let cc: f64 = c.iter().map(|x| x * x).sum();
        let rho = image.iter().zip(c).map(|(x, y)| x * y).sum::<f64>() / cc;
        let resid = max_dist(&image, &Vector::from(c).scaled(rho));
        if resid <= COLLINEAR_TOL * image.max_abs() {
            return normalize(c).map_err(|_| Error::DegenerateSeed);
        }

        let mut v = Vector::from(c);
        let mut prev: Option<NormalizedPoint> = None;
        for _ in 0..MAX_PERIODIC_ITERS {
            v = step(&v);
            let m = v.max_abs();
            v = v.scaled(1.0 / m);
            let Ok(p) = normalize(&v) else {
                prev = None;
                continue;
            };
            if let Some(q) = &prev {
                if max_dist(&p, q) < CONVERGENCE_TOL {
                    return Ok(p);
                }
            }
            prev = Some(p);
        }
        Err(Error::NoConvergence(MAX_PERIODIC_ITERS))
    }
}

/// Roots of `table` lying in `span(a, b)`.
pub fn maximal_dihedral_plane(
    datum: &CoxeterDatum,
    a: &[f64],
    b: &[f64],
    table: &RootTable,
) -> Result<Vec<Root>> {
    datum.check_dim(a)?;
    datum.check_dim(b)?;
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
    let (aa, ab, bb) = (dot(a, a), dot(a, b), dot(b, b));
    let det = aa * bb - ab * ab;
    if det.abs() <= 1e-14 * aa * bb {
        return Err(Error::InvalidArgument("a and b are collinear".into()));
    }
    Ok(table
        .roots()
        .iter()
        .filter(|r| {
            let (xa, xb) = (dot(&r.coords, a), dot(&r.coords, b));
            let u = (xa * bb - xb * ab) / det;
            let v = (xb * aa - xa * ab) / det;
            let resid = r
                .coords
                .iter()
                .zip(a.iter().zip(b))
                .fold(0.0_f64, |m, (x, (p, q))| m.max((x - u * p - v * q).abs()));
            resid <= PLANE_TOL * r.coords.max_abs().max(1.0)
        })
        .cloned()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::{parse_coxeter_matrix, parse_gram_matrix};
    use crate::rootgen::{apply_word, generate_positive_roots, isotropy};

    fn f1() -> CoxeterDatum {
        parse_gram_matrix("2\n1 -1.25\n-1.25 1").unwrap()
    }

    fn f1_pair() -> DihedralPair {
        make_dihedral_pair(&f1(), &[1.0, 0.0], &[0.0, 1.0]).unwrap()
    }

    #[test]
    fn f1_pair_closed_forms() {
        let p = f1_pair();
        assert_eq!(p.kind(), PairKind::Hyperbolic);
        assert!((p.theta().unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!(max_dist(p.a_inf(), &[2.0 / 3.0, 1.0 / 3.0]) < 1e-12);
        assert!(max_dist(p.b_inf(), &[1.0 / 3.0, 2.0 / 3.0]) < 1e-12);
        assert!(isotropy(&f1(), p.a_inf()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn affine_pair_single_limit() {
        let d = parse_gram_matrix("2\n1 -1\n-1 1").unwrap();
        let p = make_dihedral_pair(&d, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!(p.kind(), PairKind::Affine);
        assert!(p.theta().is_none());
        assert!(max_dist(p.a_inf(), &[0.5, 0.5]) < 1e-15);
        assert_eq!(p.a_inf(), p.b_inf());
        assert!(matches!(p.sequence_root(1, Side::A), Err(Error::AffinePair)));
        assert!(matches!(p.limit_pairings(), Err(Error::AffinePair)));
    }

    #[test]
    fn affine_limit_is_isotropic_for_unequal_norms() {
        // b = r_b r_a b = 2a + 3b pairs with a to -1 but |a| != |b|
        let d = parse_gram_matrix("2\n1 -1\n-1 1").unwrap();
        let p = make_dihedral_pair(&d, &[1.0, 0.0], &[2.0, 3.0]).unwrap();
        assert_eq!(p.kind(), PairKind::Affine);
        assert!(isotropy(&d, p.a_inf()).unwrap().abs() < 1e-15);
        assert!(max_dist(p.a_inf(), &[0.5, 0.5]) < 1e-15);
    }

    #[test]
    fn finite_pair_rejected() {
        let d = parse_coxeter_matrix("3\n1 3 4\n3 1 3\n4 3 1", -1.0, &[]).unwrap();
        assert!(matches!(
            make_dihedral_pair(&d, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]),
            Err(Error::NotInfiniteDihedral(_))
        ));
    }

    #[test]
    fn chebyshev_examples() {
        let t = 2f64.ln();
        let want = [0.0, 1.0, 2.5, 5.25, 10.625];
        for (i, w) in want.iter().enumerate() {
            assert!((chebyshev_c(t, i) - w).abs() < 1e-12, "c_{i}");
        }
        assert_eq!(chebyshev_c(0.7, 0), 0.0);
        let c = chebyshev_sequence(1.25, 4);
        assert!((c[1] * c[3] - c[2] * c[2] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn sequence_root_examples() {
        let p = f1_pair();
        assert_eq!(p.sequence_root(1, Side::A).unwrap().0, vec![5.25, 2.5]);
        assert_eq!(p.sequence_root(0, Side::A).unwrap().0, vec![1.0, 0.0]);
        assert_eq!(p.sequence_root(2, Side::A).unwrap().0, vec![21.3125, 10.625]);
        assert_eq!(p.sequence_root(1, Side::B).unwrap().0, vec![2.5, 5.25]);
        let w = apply_word(&f1(), &[0, 1], &[1.0, 0.0]).unwrap();
        assert_eq!(p.sequence_root(1, Side::A).unwrap(), w);
        let x1 = p.alternating_root(1).unwrap();
        assert_eq!(x1.0, vec![2.5, 1.0]);
    }

    #[test]
    fn matrix_power_examples() {
        let p = f1_pair();
        assert_eq!(p.rotation_matrix_power(1).unwrap(), [[5.25, -2.5], [2.5, -1.0]]);
        assert_eq!(p.rotation_matrix().unwrap(), [[5.25, -2.5], [2.5, -1.0]]);
        assert_eq!(
            p.rotation_matrix_power(2).unwrap(),
            [[21.3125, -10.625], [10.625, -5.25]]
        );
        assert!(p.rotation_matrix_power(0).is_err());
    }

    #[test]
    fn pairings_examples() {
        let p = f1_pair();
        let got = p.limit_pairings().unwrap();
        let want = [0.25, -0.5, -0.5, 0.25];
        for k in 0..4 {
            assert!((got[k] - want[k]).abs() < 1e-12);
        }
        let closed = p.limit_pairings_closed_form().unwrap();
        for k in 0..4 {
            assert!((closed[k] - want[k]).abs() < 1e-12);
        }
        // any positive multiple of (cosh θ + sinh θ) a + b normalizes to â_∞
        for lambda in [0.5, 3.0, 1e6] {
            let v = [2.0 * lambda, lambda];
            assert!(max_dist(&normalize(&v).unwrap(), p.a_inf()) < 1e-12);
        }
    }

    #[test]
    fn periodic_limit_examples() {
        let p = f1_pair();
        let got = p.periodic_limit(&[0.0, 1.0]).unwrap();
        assert!(max_dist(&got, p.a_inf()) < 1e-9);
        let b_inf = p.b_inf().clone();
        let got = p.periodic_limit(&b_inf).unwrap();
        assert!(max_dist(&got, &b_inf) < 1e-12);
        assert!(matches!(p.periodic_limit(&[0.0, 0.0]), Err(Error::DegenerateSeed)));
    }

    #[test]
    fn plane_examples() {
        let d = f1();
        let t = generate_positive_roots(&d, 4).unwrap();
        assert_eq!(
            maximal_dihedral_plane(&d, &[1.0, 0.0], &[0.0, 1.0], &t).unwrap().len(),
            t.len()
        );
        let f2 = parse_coxeter_matrix("3\n1 3 4\n3 1 3\n4 3 1", -1.0, &[]).unwrap();
        let t = generate_positive_roots(&f2, 6).unwrap();
        let plane = maximal_dihedral_plane(&f2, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &t).unwrap();
        assert_eq!(plane.len(), 3);
    }
}
