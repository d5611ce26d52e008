//! CSV and JSON writers. Numbers carry 17 significant digits so that every
//! `f64` round-trips exactly.

use serde::Serialize;
use serde_json::value::RawValue;

use crate::datum::{CoxeterDatum, Vector};
use crate::dihedral::{DihedralPair, PairKind, Side};
use crate::dominance::DominanceVerdict;
use crate::error::Result;
use crate::limits::{LimitCloud, NeighborhoodProbe};
use crate::rootgen::{Root, RootTable};

/// `x` with 17 significant digits.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// JSON number token with 17 significant digits (`null` when not finite).
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(sig17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

pub fn word_string(word: &[usize]) -> String {
    word.iter()
        .map(|s| (s + 1).to_string())
        .collect::<Vec<_>>()
        .join("-")
}

fn root_fields(datum: &CoxeterDatum, r: &Root) -> (Vector, f64) {
    let nhat = r.normalized().into_vector();
    let q = datum.form(&nhat, &nhat);
    (nhat, q)
}

pub fn roots_csv(table: &RootTable) -> String {
    let n = table.datum().rank();
    let mut out = String::from("index,depth,word,base");
    for k in 1..=n {
        out.push_str(&format!(",coeff_{k}"));
    }
    out.push_str(",norm_sum");
    for k in 1..=n {
        out.push_str(&format!(",nhat_{k}"));
    }
    out.push_str(",q_normalized\n");
    for (idx, r) in table.roots().iter().enumerate() {
        let (nhat, q) = root_fields(table.datum(), r);
        let mut row = vec![
            (idx + 1).to_string(),
            r.depth.to_string(),
            word_string(&r.word),
            (r.base + 1).to_string(),
        ];
        row.extend(r.coords.iter().map(|x| sig17(*x)));
        row.push(sig17(r.norm_sum()));
        row.extend(nhat.iter().map(|x| sig17(*x)));
        row.push(sig17(q));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct RootJson {
    index: usize,
    depth: usize,
    word: Vec<usize>,
    base: usize,
    coeffs: Vec<Num>,
    norm_sum: Num,
    nhat: Vec<Num>,
    q_normalized: Num,
}

#[derive(Serialize)]
struct RootTableJson {
    rank: usize,
    max_depth: usize,
    count: usize,
    roots: Vec<RootJson>,
}

pub fn roots_json(table: &RootTable) -> Result<String> {
    let roots = table
        .roots()
        .iter()
        .enumerate()
        .map(|(idx, r)| {
            let (nhat, q) = root_fields(table.datum(), r);
            RootJson {
                index: idx + 1,
                depth: r.depth,
                word: r.word.iter().map(|s| s + 1).collect(),
                base: r.base + 1,
                coeffs: nums(&r.coords),
                norm_sum: Num(r.norm_sum()),
                nhat: nums(&nhat),
                q_normalized: Num(q),
            }
        })
        .collect();
    to_json(&RootTableJson {
        rank: table.datum().rank(),
        max_depth: table.max_depth(),
        count: table.len(),
        roots,
    })
}

pub(crate) fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)
        .map_err(|e| crate::Error::InvalidArgument(format!("json encoding failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// One row of the dominance report (0-based indices).
#[derive(Debug, Clone)]
pub struct DominanceRow {
    pub x: usize,
    pub y: usize,
    pub b_xy: f64,
    pub verdict: DominanceVerdict,
}

pub fn dominance_csv(rows: &[DominanceRow]) -> String {
    let mut out = String::from("x_index,y_index,B_xy,present,direction,method\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.x + 1,
            r.y + 1,
            sig17(r.b_xy),
            r.verdict.present,
            r.verdict.direction,
            r.verdict.method
        ));
    }
    out
}

#[derive(Serialize)]
struct ConvergenceJson {
    i: usize,
    distance_to_a_inf: Num,
}

#[derive(Serialize)]
struct DihedralJson {
    theta: Option<Num>,
    kind: &'static str,
    a: Vec<Num>,
    b: Vec<Num>,
    a_inf: Vec<Num>,
    b_inf: Vec<Num>,
    pairings: Vec<Num>,
    convergence: Vec<ConvergenceJson>,
}

pub fn dihedral_json(pair: &DihedralPair, iters: usize) -> Result<String> {
    let (kind, pairings, convergence) = match pair.kind() {
        PairKind::Affine => ("affine", Vec::new(), Vec::new()),
        PairKind::Hyperbolic => {
            let conv = (1..=iters)
                .map(|i| {
                    let a_i = pair.sequence_root(i, Side::A)?;
                    let d = crate::datum::max_dist(&crate::rootgen::normalize(&a_i)?, pair.a_inf());
                    Ok(ConvergenceJson {
                        i,
                        distance_to_a_inf: Num(d),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            ("hyperbolic", nums(&pair.limit_pairings()?), conv)
        }
    };
    to_json(&DihedralJson {
        theta: pair.theta().map(Num),
        kind,
        a: nums(pair.a()),
        b: nums(pair.b()),
        a_inf: nums(pair.a_inf()),
        b_inf: nums(pair.b_inf()),
        pairings,
        convergence,
    })
}

pub fn limit_csv(rank: usize, cloud: &LimitCloud) -> String {
    let mut out = String::from("index");
    for k in 1..=rank {
        out.push_str(&format!(",nhat_{k}"));
    }
    out.push_str(",q_residual,provenance\n");
    for (idx, ((p, r), prov)) in cloud
        .points
        .iter()
        .zip(&cloud.residuals)
        .zip(&cloud.provenance)
        .enumerate()
    {
        let mut row = vec![(idx + 1).to_string()];
        row.extend(p.iter().map(|x| sig17(*x)));
        row.push(sig17(*r));
        // provenance tags contain commas
        row.push(format!("\"{prov}\""));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
pub struct LimitSummary {
    pub depth: usize,
    pub min_depth: usize,
    pub cluster_tol: Num,
    pub point_count: usize,
    pub max_residual: Option<Num>,
    pub e2_count: usize,
    pub e2_max_residual: Option<Num>,
    pub cross_validation_max_distance: Option<Num>,
}

pub fn limit_summary_json(s: &LimitSummary) -> Result<String> {
    to_json(s)
}

#[derive(Serialize)]
struct PairJson {
    a: Vec<Num>,
    b: Vec<Num>,
    theta: Option<Num>,
    a_inf: Vec<Num>,
}

#[derive(Serialize)]
struct ProbeJson {
    eta: Vec<Num>,
    margin: Num,
    certified: bool,
}

#[derive(Serialize)]
struct NeighborhoodJson {
    pair: PairJson,
    i: usize,
    a_i: Vec<Num>,
    probes: Vec<ProbeJson>,
}

/// Certify every `eta` against `probe` and emit the neighborhood report.
pub fn neighborhood_json(probe: &mut NeighborhoodProbe, etas: &[Vec<f64>]) -> Result<String> {
    let mut probes = Vec::with_capacity(etas.len());
    for eta in etas {
        let certified = probe.certify(eta)?;
        probes.push(ProbeJson {
            eta: nums(eta),
            margin: Num(probe.certificate_margin.unwrap_or(f64::NAN)),
            certified,
        });
    }
    let pair = &probe.pair;
    to_json(&NeighborhoodJson {
        pair: PairJson {
            a: nums(pair.a()),
            b: nums(pair.b()),
            theta: pair.theta().map(Num),
            a_inf: nums(pair.a_inf()),
        },
        i: probe.index,
        a_i: nums(&probe.a_i),
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [2f64.ln(), 1.0 / 3.0, -1.25, 1e-300, 6.02e23] {
            let s = sig17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17);
        }
    }

    #[test]
    fn json_numbers_are_raw_tokens() {
        let s = serde_json::to_string(&vec![Num(0.5), Num(f64::NAN)]).unwrap();
        assert_eq!(s, "[5.0000000000000000e-1,null]");
        let back: Vec<Option<f64>> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![Some(0.5), None]);
    }
}
