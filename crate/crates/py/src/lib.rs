//! Python bindings for `coxlimits`.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ::coxlimits as core;
use ::coxlimits::dihedral::Side;
use ::coxlimits::render::{Layers, RenderSpec};

create_exception!(coxlimits, CoxError, PyValueError);

fn err(e: core::Error) -> PyErr {
    CoxError::new_err(e.to_string())
}

fn side(s: &str) -> PyResult<Side> {
    match s {
        "a" | "A" => Ok(Side::A),
        "b" | "B" => Ok(Side::B),
        _ => Err(PyValueError::new_err("side must be 'a' or 'b'")),
    }
}

/// Free Coxeter datum given by its Gram matrix.
#[pyclass(name = "CoxeterDatum", module = "coxlimits", frozen)]
struct PyDatum(core::CoxeterDatum);

#[pymethods]
impl PyDatum {
    #[new]
    fn new(gram: Vec<Vec<f64>>) -> PyResult<Self> {
        core::CoxeterDatum::from_gram(gram).map(PyDatum).map_err(err)
    }

    /// Parse a Gram-matrix document.
    #[staticmethod]
    fn parse_gram(text: &str) -> PyResult<Self> {
        core::parse_gram_matrix(text).map(PyDatum).map_err(err)
    }

    /// Parse a Coxeter-matrix document; `0` entries take `infinity_bond`.
    #[staticmethod]
    #[pyo3(signature = (text, infinity_bond = -1.0, overrides = None))]
    fn parse_coxeter(text: &str, infinity_bond: f64, overrides: Option<&str>) -> PyResult<Self> {
        let ov = match overrides {
            Some(t) => core::parse_overrides(t).map_err(err)?,
            None => Vec::new(),
        };
        core::parse_coxeter_matrix(text, infinity_bond, &ov)
            .map(PyDatum)
            .map_err(err)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn gram(&self) -> Vec<Vec<f64>> {
        self.0.gram().to_vec()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels().to_vec()
    }

    fn bilinear(&self, x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
        self.0.bilinear(&x, &y).map_err(err)
    }

    fn reflect(&self, s: usize, v: Vec<f64>) -> PyResult<Vec<f64>> {
        self.0.reflect(s, &v).map(|v| v.0).map_err(err)
    }

    fn apply_word(&self, word: Vec<usize>, v: Vec<f64>) -> PyResult<Vec<f64>> {
        core::apply_word(&self.0, &word, &v).map(|v| v.0).map_err(err)
    }

    fn isotropy(&self, p: Vec<f64>) -> PyResult<f64> {
        core::isotropy(&self.0, &p).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("CoxeterDatum(rank={})", self.0.rank())
    }
}

/// Positive roots in canonical order.
#[pyclass(name = "RootTable", module = "coxlimits", frozen)]
struct PyRootTable(core::RootTable);

#[pymethods]
impl PyRootTable {
    #[new]
    #[pyo3(signature = (datum, max_depth, cap = core::rootgen::DEFAULT_ROOT_CAP))]
    fn new(py: Python<'_>, datum: &PyDatum, max_depth: usize, cap: usize) -> PyResult<Self> {
        let d = datum.0.clone();
        py.detach(|| core::rootgen::generate_positive_roots_capped(&d, max_depth, cap))
            .map(PyRootTable)
            .map_err(err)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn max_depth(&self) -> usize {
        self.0.max_depth()
    }

    /// `(coords, depth, word, base)` tuples with 0-based word letters.
    fn roots(&self) -> Vec<(Vec<f64>, usize, Vec<usize>, usize)> {
        self.0
            .roots()
            .iter()
            .map(|r| (r.coords.0.clone(), r.depth, r.word.clone(), r.base))
            .collect()
    }

    fn normalized(&self) -> Vec<Vec<f64>> {
        self.0
            .roots()
            .iter()
            .map(|r| r.normalized().into_vector().0)
            .collect()
    }

    fn to_csv(&self) -> String {
        core::format::roots_csv(&self.0)
    }

    fn to_json(&self) -> PyResult<String> {
        core::format::roots_json(&self.0).map_err(err)
    }
}

/// Dihedral reflection subgroup generated by two roots with `B(a,b) <= -1`.
#[pyclass(name = "DihedralPair", module = "coxlimits", frozen)]
struct PyDihedralPair(core::DihedralPair);

#[pymethods]
impl PyDihedralPair {
    #[new]
    fn new(datum: &PyDatum, a: Vec<f64>, b: Vec<f64>) -> PyResult<Self> {
        core::make_dihedral_pair(&datum.0, &a, &b)
            .map(PyDihedralPair)
            .map_err(err)
    }

    #[getter]
    fn theta(&self) -> Option<f64> {
        self.0.theta()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.0.kind() {
            core::PairKind::Hyperbolic => "hyperbolic",
            core::PairKind::Affine => "affine",
        }
    }

    #[getter]
    fn a_inf(&self) -> Vec<f64> {
        self.0.a_inf().to_vec()
    }

    #[getter]
    fn b_inf(&self) -> Vec<f64> {
        self.0.b_inf().to_vec()
    }

    fn limit_pairings(&self) -> PyResult<[f64; 4]> {
        self.0.limit_pairings().map_err(err)
    }

    #[pyo3(signature = (i, side = "a"))]
    fn sequence_root(&self, i: usize, side: &str) -> PyResult<Vec<f64>> {
        self.0.sequence_root(i, self::side(side)?).map(|v| v.0).map_err(err)
    }

    fn rotation_matrix_power(&self, i: usize) -> PyResult<[[f64; 2]; 2]> {
        self.0.rotation_matrix_power(i).map_err(err)
    }

    fn periodic_limit(&self, c: Vec<f64>) -> PyResult<Vec<f64>> {
        self.0.periodic_limit(&c).map(|p| p.to_vec()).map_err(err)
    }

    /// `B(a_i, eta)` for the dominance cone over `a_i = (r_a r_b)^i a`.
    fn neighborhood_margin(&self, i: usize, eta: Vec<f64>) -> PyResult<f64> {
        core::limits::neighborhood_margin(&self.0, i, &eta).map_err(err)
    }

    fn certify(&self, i: usize, eta: Vec<f64>) -> PyResult<bool> {
        let mut probe = core::NeighborhoodProbe::new(&self.0, i).map_err(err)?;
        core::certify_neighborhood(&mut probe, &eta).map_err(err)
    }

    fn shrink_witness(&self, eta: Vec<f64>, i_max: usize) -> PyResult<Option<usize>> {
        core::shrink_witness(&self.0, &eta, i_max).map_err(err)
    }
}

#[pyfunction]
fn normalize(v: Vec<f64>) -> PyResult<Vec<f64>> {
    core::normalize(&v).map(|p| p.to_vec()).map_err(err)
}

/// `(present, direction, method)` for the pair `(x, y)`.
#[pyfunction]
#[pyo3(signature = (datum, x, y, fallback_len = core::dominance::DEFAULT_FALLBACK_LEN))]
fn dominance_verdict(
    datum: &PyDatum,
    x: Vec<f64>,
    y: Vec<f64>,
    fallback_len: usize,
) -> PyResult<(bool, String, String)> {
    let v = core::dominance_verdict(&datum.0, &x, &y, fallback_len).map_err(err)?;
    Ok((v.present, v.direction.to_string(), v.method.to_string()))
}

#[pyfunction]
fn dominates_oracle(datum: &PyDatum, x: Vec<f64>, y: Vec<f64>, max_len: usize) -> PyResult<bool> {
    core::dominates_oracle(&datum.0, &x, &y, max_len).map_err(err)
}

#[pyfunction]
fn line_isotropic_intersections(datum: &PyDatum, p: Vec<f64>, q: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
    core::line_isotropic_intersections(&datum.0, &p, &q)
        .map(|v| v.into_iter().map(|p| p.to_vec()).collect())
        .map_err(err)
}

#[pyfunction]
fn dot_action(datum: &PyDatum, word: Vec<usize>, p: Vec<f64>) -> PyResult<Vec<f64>> {
    core::dot_action(&datum.0, &word, &p).map(|p| p.to_vec()).map_err(err)
}

type CloudTuple = (Vec<Vec<f64>>, Vec<f64>, Vec<String>);

fn cloud(c: core::LimitCloud) -> CloudTuple {
    (
        c.points.iter().map(|p| p.to_vec()).collect(),
        c.residuals,
        c.provenance.iter().map(|p| p.to_string()).collect(),
    )
}

/// `(points, residuals, provenance)` of the deep-root estimate.
#[pyfunction]
fn estimate_limit_cloud(
    py: Python<'_>,
    table: &PyRootTable,
    min_depth: usize,
    cluster_tol: f64,
) -> PyResult<CloudTuple> {
    let t = &table.0;
    py.detach(|| core::estimate_limit_cloud(t.datum(), t, min_depth, cluster_tol))
        .map(cloud)
        .map_err(err)
}

/// `(points, residuals, provenance)` of exact dihedral limit points.
#[pyfunction]
#[pyo3(signature = (table, pair_budget = 200, word_budget = 4))]
fn sample_e2(py: Python<'_>, table: &PyRootTable, pair_budget: usize, word_budget: usize) -> PyResult<CloudTuple> {
    let t = &table.0;
    py.detach(|| core::sample_e2(t.datum(), t, pair_budget, word_budget))
        .map(cloud)
        .map_err(err)
}

/// SVG picture of `table`; `layers` is a comma-separated subset of
/// `roots,conic,limits,labels`.
#[pyfunction]
#[pyo3(signature = (table, limits = Vec::new(), layers = "roots", width = 800, height = 800))]
fn render_svg(
    table: &PyRootTable,
    limits: Vec<Vec<f64>>,
    layers: &str,
    width: u32,
    height: u32,
) -> PyResult<String> {
    let t = &table.0;
    let spec = RenderSpec::new(t.datum().rank(), width, height, Layers::parse(layers).map_err(err)?)
        .map_err(err)?;
    let pts = limits
        .iter()
        .map(|p| core::normalize(p))
        .collect::<core::Result<Vec<_>>>()
        .map_err(err)?;
    core::render::render_svg(t, &pts, &spec).map_err(err)
}

#[pymodule]
fn coxlimits(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CoxError", m.py().get_type::<CoxError>())?;
    m.add_class::<PyDatum>()?;
    m.add_class::<PyRootTable>()?;
    m.add_class::<PyDihedralPair>()?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(dominance_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(dominates_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(line_isotropic_intersections, m)?)?;
    m.add_function(wrap_pyfunction!(dot_action, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_limit_cloud, m)?)?;
    m.add_function(wrap_pyfunction!(sample_e2, m)?)?;
    m.add_function(wrap_pyfunction!(render_svg, m)?)?;
    Ok(())
}
