//! Deterministic SVG pictures of normalized roots, the isotropic conic and
//! limit points in the transverse hyperplane.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::conic::line_roots;
use crate::datum::{CoxeterDatum, Vector};
use crate::error::{Error, Result};
use crate::rootgen::{NormalizedPoint, RootTable};

pub const MIN_SIDE: u32 = 64;
pub const CONIC_SEGMENTS: usize = 512;
const MARGIN: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// Rank 2: `V_1` is a segment.
    Barycentric2,
    /// Rank 3: equilateral triangle.
    Barycentric3,
    /// Rank >= 4: simple roots on a regular n-gon.
    Polygon,
}

impl Projection {
    pub fn for_rank(rank: usize) -> Result<Self> {
        match rank {
            0 | 1 => Err(Error::InvalidArgument(format!(
                "rendering needs rank >= 2, got {rank}"
            ))),
            2 => Ok(Projection::Barycentric2),
            3 => Ok(Projection::Barycentric3),
            _ => Ok(Projection::Polygon),
        }
    }

    fn accepts(self, rank: usize) -> bool {
        Projection::for_rank(rank).is_ok_and(|p| p == self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layers {
    pub roots: bool,
    pub conic: bool,
    pub limits: bool,
    pub labels: bool,
}

impl Default for Layers {
    fn default() -> Self {
        Layers {
            roots: true,
            conic: false,
            limits: false,
            labels: false,
        }
    }
}

impl Layers {
    /// Comma-separated subset of `roots,conic,limits,labels`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut l = Layers {
            roots: false,
            conic: false,
            limits: false,
            labels: false,
        };
        for name in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match name {
                "roots" => l.roots = true,
                "conic" => l.conic = true,
                "limits" => l.limits = true,
                "labels" => l.labels = true,
                other => return Err(Error::InvalidArgument(format!("unknown layer `{other}`"))),
            }
        }
        Ok(l)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub width: u32,
    pub height: u32,
    pub projection: Projection,
    pub layers: Layers,
}

impl RenderSpec {
    pub fn new(rank: usize, width: u32, height: u32, layers: Layers) -> Result<Self> {
        let spec = RenderSpec {
            width,
            height,
            projection: Projection::for_rank(rank)?,
            layers,
        };
        spec.validate(rank)?;
        Ok(spec)
    }

    pub fn validate(&self, rank: usize) -> Result<()> {
        if self.width < MIN_SIDE || self.height < MIN_SIDE {
            return Err(Error::InvalidArgument(format!(
                "canvas must be at least {MIN_SIDE}x{MIN_SIDE}"
            )));
        }
        if !self.projection.accepts(rank) {
            return Err(Error::InvalidArgument(format!(
                "projection {:?} does not fit rank {rank}",
                self.projection
            )));
        }
        Ok(())
    }
}

/// Affine map from `V_1` to canvas pixels.
#[derive(Debug, Clone)]
pub struct Canvas {
    rank: usize,
    width: f64,
    height: f64,
    center: (f64, f64),
    radius: f64,
    angles: Vec<f64>,
}

impl Canvas {
    pub fn new(rank: usize, spec: &RenderSpec) -> Self {
        let (w, h) = (spec.width as f64, spec.height as f64);
        let angles = (0..rank)
            .map(|k| PI / 2.0 + 2.0 * PI * k as f64 / rank as f64)
            .collect();
        Canvas {
            rank,
            width: w,
            height: h,
            center: (w / 2.0, h / 2.0),
            radius: (w.min(h) / 2.0 - MARGIN).max(1.0),
            angles,
        }
    }

    /// Pixel position of a point of `V_1`.
    pub fn project(&self, p: &[f64]) -> (f64, f64) {
        if self.rank == 2 {
            let x = MARGIN + p[1] * (self.width - 2.0 * MARGIN);
            return (x, self.height / 2.0);
        }
        let (mut x, mut y) = self.center;
        for (pk, phi) in p.iter().zip(&self.angles) {
            x += self.radius * pk * phi.cos();
            y -= self.radius * pk * phi.sin();
        }
        (x, y)
    }

    fn vertex(&self, k: usize) -> (f64, f64) {
        self.project(&Vector::basis(self.rank, k))
    }

    /// Point of `V_1` at plane coordinates `(s, t)`.
    fn plane_point(&self, s: f64, t: f64) -> Vector {
        let n = self.rank as f64;
        Vector(
            self.angles
                .iter()
                .map(|phi| 1.0 / n + (2.0 / n) * (s * phi.cos() + t * phi.sin()))
                .collect(),
        )
    }

    fn plane_direction(&self, psi: f64) -> Vector {
        let n = self.rank as f64;
        Vector(
            self.angles
                .iter()
                .map(|phi| (2.0 / n) * (psi.cos() * phi.cos() + psi.sin() * phi.sin()))
                .collect(),
        )
    }
}

fn px(v: f64) -> String {
    format!("{v:.6}")
}

fn gray(depth: usize, max_depth: usize) -> String {
    let level = if max_depth == 0 {
        0.0
    } else {
        200.0 * (1.0 - depth as f64 / max_depth as f64)
    };
    let g = level.round() as u8;
    format!("rgb({g},{g},{g})")
}

/// Polylines tracing `Q̂` in the projection plane. Rank 2 yields single
/// points (the isotropic points of the segment).
pub fn conic_polylines(datum: &CoxeterDatum, canvas: &Canvas) -> Vec<Vec<(f64, f64)>> {
    let n = datum.rank();
    if n == 2 {
        let a = Vector::basis(2, 0);
        let b = Vector::basis(2, 1);
        return line_roots(datum, &a, &b)
            .params
            .into_iter()
            .filter(|t| (-1e-12..=1.0 + 1e-12).contains(t))
            .map(|t| vec![canvas.project(&[1.0 - t, t])])
            .collect();
    }
    let Some(center) = negative_point(datum, canvas) else {
        return Vec::new();
    };
    let q0 = datum.form(&center, &center);
    let mut lines = Vec::new();
    let mut current: Vec<(f64, f64)> = Vec::new();
    for j in 0..=CONIC_SEGMENTS {
        let psi = 2.0 * PI * (j % CONIC_SEGMENTS) as f64 / CONIC_SEGMENTS as f64;
        let d = canvas.plane_direction(psi);
        let bd = datum.form(&center, &d);
        let dd = datum.form(&d, &d);
        // q(c + r d) = q0 + 2 r bd + r^2 dd with q0 < 0
        let r = if dd > 0.0 {
            Some((-bd + (bd * bd - q0 * dd).sqrt()) / dd)
        } else if dd == 0.0 && bd > 0.0 {
            Some(-q0 / (2.0 * bd))
        } else {
            None
        };
        match r.filter(|r| r.is_finite() && *r < 10.0) {
            Some(r) => {
                let p = center.axpy(r, &d);
                current.push(canvas.project(&p));
            }
            None => {
                if current.len() > 1 {
                    lines.push(std::mem::take(&mut current));
                }
                current.clear();
            }
        }
    }
    if current.len() > 1 {
        lines.push(current);
    }
    lines
}

/// A point of the projection plane with `q < 0`: the centroid if it
/// qualifies, else the minimum of a fixed grid.
fn negative_point(datum: &CoxeterDatum, canvas: &Canvas) -> Option<Vector> {
    let g = canvas.plane_point(0.0, 0.0);
    if datum.form(&g, &g) < 0.0 {
        return Some(g);
    }
    let steps = 120;
    let mut best: Option<(f64, Vector)> = None;
    for i in 0..=steps {
        for j in 0..=steps {
            let s = -1.2 + 2.4 * i as f64 / steps as f64;
            let t = -1.2 + 2.4 * j as f64 / steps as f64;
            let p = canvas.plane_point(s, t);
            let q = datum.form(&p, &p);
            if best.as_ref().is_none_or(|(bq, _)| q < *bq) {
                best = Some((q, p));
            }
        }
    }
    best.filter(|(q, _)| *q < 0.0).map(|(_, p)| p)
}

/// Render `table` (and optional limit points) as an SVG document.
pub fn render_svg(
    table: &RootTable,
    limits: &[NormalizedPoint],
    spec: &RenderSpec,
) -> Result<String> {
    let datum = table.datum();
    let n = datum.rank();
    spec.validate(n)?;
    let canvas = Canvas::new(n, spec);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = spec.width,
        h = spec.height
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    if spec.layers.roots {
        let _ = writeln!(out, r#"<g id="roots">"#);
        for r in table.roots() {
            let (x, y) = canvas.project(&r.normalized());
            let _ = writeln!(
                out,
                r#"<circle class="root" cx="{}" cy="{}" r="2.500000" fill="{}"/>"#,
                px(x),
                px(y),
                gray(r.depth, table.max_depth())
            );
        }
        let _ = writeln!(out, "</g>");
    }
    if spec.layers.conic {
        let _ = writeln!(out, r#"<g id="conic">"#);
        for line in conic_polylines(datum, &canvas) {
            if let [(x, y)] = line.as_slice() {
                let _ = writeln!(
                    out,
                    r#"<circle class="conic" cx="{}" cy="{}" r="3.000000" fill="none" stroke="rgb(192,57,43)"/>"#,
                    px(*x),
                    px(*y)
                );
                continue;
            }
            let pts: Vec<String> = line.iter().map(|(x, y)| format!("{},{}", px(*x), px(*y))).collect();
            let _ = writeln!(
                out,
                r#"<polyline class="conic" fill="none" stroke="rgb(192,57,43)" stroke-width="1.000000" points="{}"/>"#,
                pts.join(" ")
            );
        }
        let _ = writeln!(out, "</g>");
    }
    if spec.layers.limits {
        let _ = writeln!(out, r#"<g id="limits">"#);
        for p in limits {
            let (x, y) = canvas.project(p);
            let _ = writeln!(
                out,
                r#"<circle class="limit" cx="{}" cy="{}" r="1.500000" fill="rgb(41,128,185)"/>"#,
                px(x),
                px(y)
            );
        }
        let _ = writeln!(out, "</g>");
    }
    if spec.layers.labels {
        let _ = writeln!(out, r#"<g id="labels" font-family="sans-serif" font-size="14">"#);
        for (k, label) in datum.labels().iter().enumerate() {
            let (x, y) = canvas.vertex(k);
            let (dx, dy) = if n == 2 {
                (0.0, -12.0)
            } else {
                let (cx, cy) = canvas.center;
                let len = ((x - cx).powi(2) + (y - cy).powi(2)).sqrt().max(1e-9);
                (18.0 * (x - cx) / len, 18.0 * (y - cy) / len)
            };
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
                px(x + dx),
                px(y + dy),
                escape(label)
            );
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
