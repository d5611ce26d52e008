//! Free Coxeter data: the simple roots are the standard basis of `V`, so a
//! datum is fully described by its Gram matrix `B(a_i, a_j)`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const DIAGONAL_TOL: f64 = 1e-12;
const BOND_MATCH_TOL: f64 = 1e-9;
const AFFINE_TOL: f64 = 1e-12;
const MAX_BOND_SCAN: u32 = 1000;

/// Coefficient vector over the simple roots.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Vector(pub Vec<f64>);

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Vector(vec![0.0; n])
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = 1.0;
        v
    }

    /// The linear functional `|v|`: the coordinate sum.
    pub fn coord_sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn scaled(&self, k: f64) -> Vector {
        Vector(self.0.iter().map(|x| x * k).collect())
    }

    /// `self + k * other`
    pub fn axpy(&self, k: f64, other: &[f64]) -> Vector {
        Vector(self.0.iter().zip(other).map(|(x, y)| x + k * y).collect())
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.0)
    }
}

impl Deref for Vector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for Vector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

impl From<&[f64]> for Vector {
    fn from(v: &[f64]) -> Self {
        Vector(v.to_vec())
    }
}

pub(crate) fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub(crate) fn max_dist(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
}

/// Label `m_ab` of an edge of the Coxeter graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bond {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bond::Finite(m) => write!(f, "{m}"),
            Bond::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BondClass {
    Finite(u32),
    /// `B(a,b) = -1`
    Affine,
    /// `B(a,b) < -1`
    Hyperbolic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoxeterDatum {
    rank: usize,
    gram: Vec<Vec<f64>>,
    bonds: Vec<Vec<Bond>>,
    labels: Vec<String>,
}

impl CoxeterDatum {
    /// Validate a Gram matrix and derive the bond labels from it.
    pub fn from_gram(gram: Vec<Vec<f64>>) -> Result<Self> {
        let rank = gram.len();
        if rank == 0 {
            return Err(Error::InvalidDatum("rank must be positive".into()));
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::InvalidDatum(format!(
                    "row {} has {} entries, expected {rank}",
                    i + 1,
                    row.len()
                )));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidDatum(format!("row {} has a non-finite entry", i + 1)));
            }
        }
        let mut bonds = vec![vec![Bond::Finite(1); rank]; rank];
        for i in 0..rank {
            if (gram[i][i] - 1.0).abs() > DIAGONAL_TOL {
                return Err(Error::InvalidDatum(format!(
                    "diagonal entry ({0},{0}) = {1} is not 1",
                    i + 1,
                    gram[i][i]
                )));
            }
            for j in 0..rank {
                if i == j {
                    continue;
                }
                let g = gram[i][j];
                if (g - gram[j][i]).abs() > SYMMETRY_TOL {
                    return Err(Error::InvalidDatum(format!(
                        "gram matrix is not symmetric at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
                bonds[i][j] = recognize_bond(g).ok_or_else(|| {
                    Error::InvalidDatum(format!(
                        "entry ({},{}) = {g} is neither -cos(pi/m) nor <= -1",
                        i + 1,
                        j + 1
                    ))
                })?;
            }
        }
        Ok(CoxeterDatum {
            rank,
            gram,
            bonds,
            labels: (1..=rank).map(|i| format!("s{i}")).collect(),
        })
    }

    /// Build a datum from bond labels; `None` marks an infinite bond, whose
    /// Gram entry is taken from `infinite_value(i, j)`.
    pub fn from_bonds(
        bonds: &[Vec<Option<u32>>],
        mut infinite_value: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let rank = bonds.len();
        let mut gram = vec![vec![0.0; rank]; rank];
        for i in 0..rank {
            gram[i][i] = 1.0;
            for j in 0..rank {
                if i == j {
                    continue;
                }
                gram[i][j] = match bonds[i][j] {
                    Some(m) if m >= 2 => -(PI / m as f64).cos(),
                    Some(m) => {
                        return Err(Error::InvalidDatum(format!(
                            "bond ({},{}) = {m} is illegal (need m >= 2 or infinity)",
                            i + 1,
                            j + 1
                        )))
                    }
                    None => {
                        let v = infinite_value(i.min(j), i.max(j));
                        if v > -1.0 {
                            return Err(Error::InvalidDatum(format!(
                                "infinite bond ({},{}) needs a value <= -1, got {v}",
                                i + 1,
                                j + 1
                            )));
                        }
                        v
                    }
                };
            }
        }
        Self::from_gram(gram)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                actual: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<f64>] {
        &self.gram
    }

    pub fn bond(&self, i: usize, j: usize) -> Result<Bond> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.bonds[i][j])
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn simple_root(&self, i: usize) -> Result<Vector> {
        self.check_index(i)?;
        Ok(Vector::basis(self.rank, i))
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.rank {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank,
            })
        }
    }

    pub(crate) fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() == self.rank {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.rank,
                actual: v.len(),
            })
        }
    }

    /// `B(u, v) = u^T G v`.
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        self.check_dim(u)?;
        self.check_dim(v)?;
        Ok(self.form(u, v))
    }

    // unchecked; callers guarantee dimensions
    pub(crate) fn form(&self, u: &[f64], v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (ui, row) in u.iter().zip(&self.gram) {
            if *ui == 0.0 {
                continue;
            }
            let rv: f64 = row.iter().zip(v).map(|(g, x)| g * x).sum();
            acc += ui * rv;
        }
        acc
    }

    /// `B(v, a_s)`, i.e. row `s` of the Gram matrix applied to `v`.
    pub(crate) fn pair_simple(&self, s: usize, v: &[f64]) -> f64 {
        self.gram[s].iter().zip(v).map(|(g, x)| g * x).sum()
    }

    /// Simple reflection `r_s(v) = v - 2 B(v, a_s) a_s`.
    pub fn reflect(&self, s: usize, v: &[f64]) -> Result<Vector> {
        self.check_index(s)?;
        self.check_dim(v)?;
        let mut out = Vector::from(v);
        self.reflect_in_place(s, &mut out);
        Ok(out)
    }

    pub(crate) fn reflect_in_place(&self, s: usize, v: &mut [f64]) {
        let k = self.pair_simple(s, v);
        v[s] -= 2.0 * k;
    }

    /// Reflection in an arbitrary root `alpha` (assumed `B(alpha, alpha) = 1`).
    pub fn reflect_in(&self, alpha: &[f64], v: &[f64]) -> Result<Vector> {
        self.check_dim(alpha)?;
        self.check_dim(v)?;
        let k = self.form(v, alpha);
        Ok(Vector::from(v).axpy(-2.0 * k, alpha))
    }

    pub fn classify_bond(&self, i: usize, j: usize) -> Result<BondClass> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(Error::InvalidArgument("classify_bond needs i != j".into()));
        }
        Ok(match self.bonds[i][j] {
            Bond::Finite(m) => BondClass::Finite(m),
            Bond::Infinite => classify_value(self.gram[i][j]),
        })
    }
}

pub(crate) fn classify_value(b: f64) -> BondClass {
    if (b + 1.0).abs() <= AFFINE_TOL {
        BondClass::Affine
    } else {
        BondClass::Hyperbolic
    }
}

fn recognize_bond(g: f64) -> Option<Bond> {
    if g <= -1.0 + AFFINE_TOL {
        return Some(Bond::Infinite);
    }
    (2..=MAX_BOND_SCAN)
        .find(|&m| (g + (PI / m as f64).cos()).abs() <= BOND_MATCH_TOL)
        .map(Bond::Finite)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
        }
    }
}

impl<'a> Iterator for Lines<'a> {
    type Item = (usize, &'a str);
    fn next(&mut self) -> Option<Self::Item> {
        for (no, line) in self.inner.by_ref() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Some((no + 1, t));
        }
        None
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_square<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<Vec<T>>> {
    let mut lines = Lines::new(text);
    let (no, first) = lines.next().ok_or_else(|| parse_err(0, "empty document"))?;
    let n: usize = first
        .parse()
        .map_err(|_| parse_err(no, format!("expected rank, found {first:?}")))?;
    if n == 0 {
        return Err(parse_err(no, "rank must be positive"));
    }
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let (no, line) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("expected {n} rows, found {r}")))?;
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<T>()
                    .map_err(|_| parse_err(no, format!("bad {what} {tok:?}")))
            })
            .collect::<Result<Vec<T>>>()?;
        if row.len() != n {
            return Err(parse_err(no, format!("expected {n} entries, found {}", row.len())));
        }
        rows.push(row);
    }
    if let Some((no, _)) = lines.next() {
        return Err(parse_err(no, "trailing content after matrix"));
    }
    Ok(rows)
}

/// Parse a Gram-matrix document into a validated datum.
pub fn parse_gram_matrix(text: &str) -> Result<CoxeterDatum> {
    let gram = parse_square::<f64>(text, "number")?;
    CoxeterDatum::from_gram(gram)
}

/// An explicit Gram value for an infinite bond, 0-based indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BondOverride {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// Parse an overrides document: lines `i j value` with 1-based indices.
pub fn parse_overrides(text: &str) -> Result<Vec<BondOverride>> {
    Lines::new(text)
        .map(|(no, line)| {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(parse_err(no, "expected `i j value`"));
            }
            let idx = |t: &str| -> Result<usize> {
                match t.parse::<usize>() {
                    Ok(k) if k >= 1 => Ok(k - 1),
                    _ => Err(parse_err(no, format!("bad index {t:?}"))),
                }
            };
            let value = toks[2]
                .parse::<f64>()
                .map_err(|_| parse_err(no, format!("bad number {:?}", toks[2])))?;
            Ok(BondOverride {
                i: idx(toks[0])?,
                j: idx(toks[1])?,
                value,
            })
        })
        .collect()
}

/// Parse a Coxeter-matrix document (integers, `0` meaning infinity).
pub fn parse_coxeter_matrix(
    text: &str,
    infinity_bond: f64,
    overrides: &[BondOverride],
) -> Result<CoxeterDatum> {
    if !(infinity_bond <= -1.0) {
        return Err(Error::InvalidDatum(format!(
            "infinity bond {infinity_bond} must be <= -1"
        )));
    }
    let m = parse_square::<u32>(text, "integer")?;
    let n = m.len();
    let mut bonds = vec![vec![None; n]; n];
    for i in 0..n {
        if m[i][i] != 1 {
            return Err(Error::InvalidDatum(format!("diagonal entry ({0},{0}) must be 1", i + 1)));
        }
        for j in 0..n {
            if m[i][j] != m[j][i] {
                return Err(Error::InvalidDatum(format!(
                    "Coxeter matrix is not symmetric at ({},{})",
                    i + 1,
                    j + 1
                )));
            }
            bonds[i][j] = match m[i][j] {
                0 => None,
                k => Some(k),
            };
        }
    }
    for o in overrides {
        if o.i >= n || o.j >= n || o.i == o.j {
            return Err(Error::InvalidDatum(format!(
                "override ({},{}) is out of range",
                o.i + 1,
                o.j + 1
            )));
        }
        if bonds[o.i][o.j].is_some() {
            return Err(Error::InvalidDatum(format!(
                "override on finite bond ({},{})",
                o.i + 1,
                o.j + 1
            )));
        }
        if !(o.value <= -1.0) {
            return Err(Error::InvalidDatum(format!(
                "override value {} must be <= -1",
                o.value
            )));
        }
    }
    CoxeterDatum::from_bonds(&bonds, |i, j| {
        overrides
            .iter()
            .rev()
            .find(|o| (o.i.min(o.j), o.i.max(o.j)) == (i, j))
            .map_or(infinity_bond, |o| o.value)
    })
}
