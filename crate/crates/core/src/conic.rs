//! Intersections of an affine line with the isotropic cone `B(v, v) = 0`.

use crate::datum::CoxeterDatum;

/// Boundary tolerance on `|B(p,q)| / sqrt(B(p,p) B(q,q))` against 1.
pub const TANGENCY_TOL: f64 = 1e-9;

/// Real parameters `t` with `B(p + t(q-p), p + t(q-p)) = 0`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct LineRoots {
    pub params: Vec<f64>,
}

/// Solve the restricted quadratic along the line through `p` and `q`.
///
/// The discriminant of `A t^2 + 2 H t + C` equals
/// `B(p,q)^2 - B(p,p) B(q,q)`; when both endpoints are space-like the count
/// is read off the normalized pairing `k = |B(p,q)| / sqrt(B(p,p) B(q,q))`.
pub fn line_roots(datum: &CoxeterDatum, p: &[f64], q: &[f64]) -> LineRoots {
    let d: Vec<f64> = q.iter().zip(p).map(|(a, b)| a - b).collect();
    let bpp = datum.form(p, p);
    let bqq = datum.form(q, q);
    let bpq = datum.form(p, q);
    let a = datum.form(&d, &d);
    let h = datum.form(p, &d);
    let c = bpp;
    let scale = bpp.abs().max(bqq.abs()).max(bpq.abs()).max(f64::MIN_POSITIVE);

    let g = bpp * bqq;
    let count = if g > 0.0 {
        let k = bpq.abs() / g.sqrt();
        if (k - 1.0).abs() <= TANGENCY_TOL {
            1
        } else if k > 1.0 {
            2
        } else {
            0
        }
    } else {
        let disc = bpq * bpq - g;
        if disc > 1e-15 * scale * scale {
            2
        } else if disc >= -1e-15 * scale * scale {
            1
        } else {
            0
        }
    };

    let linear = a.abs() <= 1e-14 * scale;
    let mut params = match count {
        0 => Vec::new(),
        _ if linear => {
            if h.abs() <= 1e-300 {
                Vec::new()
            } else {
                vec![-c / (2.0 * h)]
            }
        }
        1 => vec![-h / a],
        _ => {
            let disc = (bpq * bpq - g).max(0.0);
            let sq = disc.sqrt();
            let qv = -(h + h.signum() * sq);
            if qv == 0.0 {
                vec![0.0, 0.0]
            } else {
                vec![qv / a, c / qv]
            }
        }
    };
    params.sort_by(f64::total_cmp);
    LineRoots { params }
}

pub(crate) fn point_at(p: &[f64], q: &[f64], t: f64) -> Vec<f64> {
    p.iter().zip(q).map(|(a, b)| a + t * (b - a)).collect()
}
