//! Python bindings. Exact rationals come back as `fractions.Fraction`,
//! structured results as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use prodvc_core::classes::classify;
use prodvc_core::density::{self, forest_decomposition};
use prodvc_core::graph::{degeneracy, parse_edge_list, write_edge_list};
use prodvc_core::harness::{self, Family, GeneratorSpec, Suite, SuiteConfig};
use prodvc_core::labeling::{self, LabelScheme};
use prodvc_core::product::{self, InstanceFile};
use prodvc_core::reduction;
use prodvc_core::vc::{self, VcOptions};
use prodvc_core::{rational, Rational};

fn err(e: prodvc_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((*r.numer(), *r.denom()))
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.getattr("loads")?.call1((text,))
}

fn parse_rational(s: &str) -> PyResult<Rational> {
    rational::parse(s).ok_or_else(|| PyValueError::new_err(format!("not a rational: {s:?}")))
}

/// A simple undirected graph on vertices `0..n`.
#[pyclass(name = "Graph", module = "prodvc", frozen, from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: prodvc_core::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges=Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph { inner: prodvc_core::Graph::new(n, edges).map_err(err)? })
    }

    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        Ok(PyGraph { inner: parse_edge_list(text).map_err(err)? })
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        PyGraph { inner: prodvc_core::Graph::path(n) }
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        Ok(PyGraph { inner: prodvc_core::Graph::cycle(n).map_err(err)? })
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        PyGraph { inner: prodvc_core::Graph::complete(n) }
    }

    #[staticmethod]
    fn octahedron(d: usize) -> PyResult<Self> {
        Ok(PyGraph { inner: product::octahedron(d).map_err(err)? })
    }

    fn to_edge_list(&self) -> String {
        write_edge_list(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.inner.has_edge(u, v)
    }

    /// `(density, witness)` of a densest subgraph.
    fn density<'py>(&self, py: Python<'py>) -> PyResult<(Bound<'py, PyAny>, Vec<usize>)> {
        let d = density::densest_subgraph(&self.inner).map_err(err)?;
        Ok((fraction(py, &d.density)?, d.witness))
    }

    fn mad<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &density::mad(&self.inner).map_err(err)?)
    }

    fn arboricity(&self) -> usize {
        density::arboricity(&self.inner)
    }

    fn degeneracy(&self) -> usize {
        degeneracy(&self.inner)
    }

    /// `(tail, head)` arcs with every outdegree at most `d`.
    fn orient(&self, d: usize) -> PyResult<Vec<(usize, usize)>> {
        Ok(density::bounded_outdegree_orientation(&self.inner, d).map_err(err)?.arcs)
    }

    /// Edge lists of `k` forests covering the graph (`k` defaults to the
    /// degeneracy).
    #[pyo3(signature = (k=None))]
    fn forests(&self, k: Option<usize>) -> PyResult<Vec<Vec<(usize, usize)>>> {
        let k = k.unwrap_or_else(|| degeneracy(&self.inner));
        let fd = forest_decomposition(&self.inner, k).map_err(err)?;
        Ok((0..k).map(|c| fd.forest(c).collect()).collect())
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &classify(&self.inner))
    }

    /// Label file text: header `n k w`, then `id hex` per vertex.
    #[pyo3(signature = (k=None))]
    fn labels(&self, k: Option<usize>) -> PyResult<String> {
        let k = k.unwrap_or_else(|| degeneracy(&self.inner));
        let fd = forest_decomposition(&self.inner, k).map_err(err)?;
        Ok(labeling::encode(&self.inner, &fd).map_err(err)?.to_text())
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.n(), self.m())
    }
}

/// Adjacency of `x` and `y` read off a label file.
#[pyfunction]
fn decode_labels(text: &str, x: usize, y: usize) -> PyResult<bool> {
    let scheme = LabelScheme::parse(text).map_err(err)?;
    if x >= scheme.n || y >= scheme.n {
        return Err(PyValueError::new_err("vertex out of range"));
    }
    scheme.adjacent(x, y).map_err(err)
}

/// A subgraph of a Cartesian product of connected factors.
#[pyclass(name = "ProductSubgraph", module = "prodvc", frozen)]
struct PySubgraph {
    inner: prodvc_core::ProductSubgraph,
}

#[pymethods]
impl PySubgraph {
    /// Induced by `vertices` unless `edges` (pairs of vertex positions) is given.
    #[new]
    #[pyo3(signature = (factors, vertices, edges=None))]
    fn new(factors: Vec<PyGraph>, vertices: Vec<Vec<usize>>, edges: Option<Vec<(usize, usize)>>) -> PyResult<Self> {
        let space = prodvc_core::ProductSpace::new(factors.into_iter().map(|f| f.inner).collect()).map_err(err)?;
        let inner = match edges {
            Some(e) => prodvc_core::ProductSubgraph::with_edges(space, vertices, e),
            None => prodvc_core::ProductSubgraph::induced(space, vertices),
        }
        .map_err(err)?;
        Ok(PySubgraph { inner })
    }

    /// The whole product.
    #[staticmethod]
    fn full(factors: Vec<PyGraph>) -> PyResult<Self> {
        let space = prodvc_core::ProductSpace::new(factors.into_iter().map(|f| f.inner).collect()).map_err(err)?;
        Ok(PySubgraph { inner: prodvc_core::ProductSubgraph::full(space, product::DEFAULT_MATERIALIZE_CAP).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = InstanceFile::parse(text).map_err(err)?;
        Ok(PySubgraph { inner: file.to_subgraph().map_err(err)? })
    }

    fn to_json(&self) -> String {
        InstanceFile::from_subgraph(&self.inner).to_json()
    }

    fn digest(&self) -> String {
        harness::digest(&self.inner)
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.space().dimension()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.edge_count()
    }

    fn vertices(&self) -> Vec<Vec<usize>> {
        self.inner.vertices().to_vec()
    }

    fn factors(&self) -> Vec<PyGraph> {
        self.inner.space().factors().iter().map(|f| PyGraph { inner: f.clone() }).collect()
    }

    fn graph(&self) -> PyGraph {
        PyGraph { inner: self.inner.graph() }
    }

    /// `|E| / |V|`.
    fn edge_ratio<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.edge_ratio().map_err(err)?)
    }

    fn projection(&self, i: usize) -> PyResult<PyGraph> {
        if i >= self.dimension() {
            return Err(PyValueError::new_err(format!("no factor {i}")));
        }
        Ok(PyGraph { inner: self.inner.projection_on_factor(i).0 })
    }

    fn vcd(&self) -> PyResult<usize> {
        Ok(vc::vcd_induced(&self.inner).map_err(err)?.value)
    }

    /// `vcd`, `vcdens`, `vcd*`, `vcdens*` with witnesses and exactness flags.
    /// Densities are `"p/q"` strings.
    #[pyo3(signature = (budget=None, f_max=None, m_max=None, seed=0))]
    fn vc_report<'py>(
        &self,
        py: Python<'py>,
        budget: Option<u64>,
        f_max: Option<usize>,
        m_max: Option<usize>,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let d = VcOptions::default();
        let opts =
            VcOptions { budget: budget.unwrap_or(d.budget), f_max: f_max.unwrap_or(d.f_max), m_max: m_max.unwrap_or(d.m_max), seed, ..d };
        to_py(py, &vc::vc_report(&self.inner, &opts).map_err(err)?)
    }

    /// Contracts the edge `uv` of factor `factor`.
    fn reduce<'py>(&self, py: Python<'py>, factor: usize, u: usize, v: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &reduction::reduce(&self.inner, factor, u, v).map_err(err)?.to_json())
    }

    /// Identifies `e` with its opposite vertex in an octahedral factor.
    fn reduce_octahedron<'py>(&self, py: Python<'py>, factor: usize, e: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &reduction::reduce_octahedron(&self.inner, factor, e).map_err(err)?.to_json())
    }

    fn induction_bound<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &reduction::induction_edge_bound(&self.inner).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("ProductSubgraph(dimension={}, n={}, m={})", self.dimension(), self.n(), self.m())
    }
}

#[pyfunction]
fn hypercube(m: usize) -> PyResult<PySubgraph> {
    let space = product::hypercube(m).map_err(err)?;
    Ok(PySubgraph { inner: prodvc_core::ProductSubgraph::full(space, product::DEFAULT_MATERIALIZE_CAP).map_err(err)? })
}

#[pyfunction]
#[pyo3(signature = (family, sizes, m, seed=0, fraction=0.5, max_vertices=None, induced=true))]
fn generate(
    family: &str,
    sizes: Vec<usize>,
    m: usize,
    seed: u64,
    fraction: f64,
    max_vertices: Option<usize>,
    induced: bool,
) -> PyResult<PySubgraph> {
    let mut spec = GeneratorSpec::new(Family::parse(family).map_err(err)?, sizes, m, seed);
    spec.vertex_fraction = fraction;
    spec.induced = induced;
    if let Some(k) = max_vertices {
        spec.max_vertices = k;
    }
    Ok(PySubgraph { inner: harness::generate(&spec).map_err(err)? })
}

/// Runs a verification suite; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (suite="all", trials=100, seed=0, mu=None, threads=None))]
fn verify<'py>(
    py: Python<'py>,
    suite: &str,
    trials: usize,
    seed: u64,
    mu: Option<&str>,
    threads: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = SuiteConfig::new(Suite::parse(suite).map_err(err)?, trials, seed);
    cfg.mu = mu.map(parse_rational).transpose()?;
    cfg.threads = threads;
    let report = py.detach(|| harness::run_suite(&cfg)).map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (family="path", sizes=vec![3, 3], m=2, trials=1000, seed=0, fraction=0.5))]
fn fuzz_conj3<'py>(
    py: Python<'py>,
    family: &str,
    sizes: Vec<usize>,
    m: usize,
    trials: usize,
    seed: u64,
    fraction: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let mut spec = GeneratorSpec::new(Family::parse(family).map_err(err)?, sizes, m, seed);
    spec.vertex_fraction = fraction;
    let cfg = SuiteConfig::new(Suite::Conj3, trials, seed);
    let report = py.detach(|| harness::fuzz_conjecture3(&spec, trials, &cfg)).map_err(err)?;
    to_py(py, &report)
}

#[pymodule]
fn prodvc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PySubgraph>()?;
    m.add_function(wrap_pyfunction!(decode_labels, m)?)?;
    m.add_function(wrap_pyfunction!(hypercube, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(fuzz_conj3, m)?)?;
    m.add("REPORT_SCHEMA", harness::REPORT_SCHEMA)?;
    Ok(())
}
