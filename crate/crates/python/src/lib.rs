//! Python bindings. Structured results (decisions, pipeline reports,
//! certificates) are returned as plain dicts decoded from the JSON reports.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use hypermatch::decision::{self, DecideConfig, Method};
use hypermatch::generators;
use hypermatch::lattice::{CosetOrder, IndexVector};
use hypermatch::oracle;
use hypermatch::reachability::run_pipeline;
use hypermatch::report::{to_json, AnalysisReport, DecisionReport, MethodOutcome};
use hypermatch::{EdgeLattice, Outcome, Partition, VertexSet};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn edge_lists(edges: &[VertexSet]) -> Vec<Vec<usize>> {
    edges.iter().map(|e| e.to_vec()).collect()
}

fn partition_from(n: usize, parts: Vec<Vec<usize>>) -> PyResult<Partition> {
    let sets = parts
        .into_iter()
        .map(|p| {
            p.into_iter().try_fold(VertexSet::EMPTY, |s, v| {
                if v < n {
                    Ok(s.with(v))
                } else {
                    Err(value_err(format!("vertex {v} out of range for n = {n}")))
                }
            })
        })
        .collect::<PyResult<Vec<_>>>()?;
    Partition::new(n, sets).map_err(value_err)
}

#[pyclass(name = "Hypergraph", module = "pyhypermatch", frozen)]
pub struct PyHypergraph {
    inner: hypermatch::Hypergraph,
}

#[pymethods]
impl PyHypergraph {
    #[new]
    fn new(n: usize, k: usize, edges: Vec<Vec<usize>>) -> PyResult<Self> {
        let inner = hypermatch::Hypergraph::build(n, k, edges).map_err(value_err)?;
        Ok(PyHypergraph { inner })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner = hypermatch::Hypergraph::parse(text).map_err(value_err)?;
        Ok(PyHypergraph { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (kind, n, k = 3, s = None, x = None, seed = 0, codegree = None, density = generators::DEFAULT_DENSITY))]
    #[allow(clippy::too_many_arguments)]
    fn generate(
        kind: &str,
        n: usize,
        k: usize,
        s: Option<usize>,
        x: Option<usize>,
        seed: u64,
        codegree: Option<usize>,
        density: f64,
    ) -> PyResult<Self> {
        let need = |v: Option<usize>, name: &str| {
            v.ok_or_else(|| value_err(format!("'{name}' is required for {kind}")))
        };
        let inner = match kind {
            "space" => generators::space_barrier(n, k, need(s, "s")?),
            "parity-even" => generators::parity_barrier_even(n, k, need(x, "x")?),
            "parity-odd" => generators::parity_barrier_odd(n, k, need(x, "x")?),
            "kkm" => generators::kkm_construction(n),
            "complete" => generators::complete(n, k),
            "random" => generators::random_dense_with_density(n, k, codegree.unwrap_or(n.div_ceil(k.max(1))), density, seed),
            _ => return Err(value_err(format!("unknown kind '{kind}'"))),
        }
        .map_err(value_err)?;
        Ok(PyHypergraph { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn edges(&self) -> Vec<Vec<usize>> {
        edge_lists(self.inner.edges())
    }

    fn __len__(&self) -> usize {
        self.inner.edge_count()
    }

    fn __repr__(&self) -> String {
        format!("Hypergraph(n={}, k={}, edges={})", self.inner.n(), self.inner.k(), self.inner.edge_count())
    }

    fn has_edge(&self, edge: Vec<usize>) -> bool {
        let e = edge.into_iter().fold(VertexSet::EMPTY, |s, v| if v < 64 { s.with(v) } else { s });
        self.inner.has_edge(e)
    }

    fn min_codegree(&self) -> PyResult<usize> {
        self.inner.min_codegree().map_err(value_err)
    }

    fn serialize(&self) -> String {
        self.inner.serialize()
    }

    /// A perfect matching as a list of edges, or None.
    fn perfect_matching(&self) -> PyResult<Option<Vec<Vec<usize>>>> {
        match oracle::has_perfect_matching(&self.inner) {
            Outcome::Yes(m) => Ok(Some(edge_lists(&m.edges))),
            Outcome::No => Ok(None),
            Outcome::Unknown(e) => Err(PyRuntimeError::new_err(e.to_string())),
        }
    }

    fn max_matching_size(&self) -> PyResult<usize> {
        oracle::max_matching_size(&self.inner).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }
}

#[pyclass(name = "Lattice", module = "pyhypermatch", frozen)]
pub struct PyLattice {
    inner: EdgeLattice,
}

#[pymethods]
impl PyLattice {
    #[new]
    fn new(dim: usize, generators: Vec<Vec<i64>>) -> PyResult<Self> {
        let inner =
            EdgeLattice::from_generators(dim, generators.into_iter().map(IndexVector)).map_err(value_err)?;
        Ok(PyLattice { inner })
    }

    #[staticmethod]
    fn max(dim: usize, k: usize) -> Self {
        PyLattice { inner: EdgeLattice::max(dim, k) }
    }

    #[staticmethod]
    fn odd(k: usize) -> Self {
        PyLattice { inner: EdgeLattice::odd(k) }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn basis(&self) -> Vec<Vec<i64>> {
        self.inner.basis().to_vec()
    }

    fn contains(&self, v: Vec<i64>) -> PyResult<bool> {
        self.inner.contains(&IndexVector(v)).map_err(value_err)
    }

    fn residue(&self, v: Vec<i64>) -> PyResult<Vec<i64>> {
        Ok(self.inner.residue(&IndexVector(v)).map_err(value_err)?.0)
    }

    fn is_transferral_free(&self) -> bool {
        self.inner.is_transferral_free()
    }

    /// Coset-group order, or None when infinite.
    fn coset_order(&self, k: usize) -> PyResult<Option<u64>> {
        match self.inner.coset_group_order(k).map_err(value_err)? {
            CosetOrder::Finite(m) => Ok(Some(m)),
            CosetOrder::Infinite => Ok(None),
        }
    }

    fn __repr__(&self) -> String {
        format!("Lattice(dim={}, basis={:?})", self.inner.dim(), self.inner.basis())
    }
}

fn config(budget: Option<u64>, certificate_size: Option<usize>) -> DecideConfig {
    let mut cfg = DecideConfig::default();
    if let Some(b) = budget {
        cfg.pipeline.oracle.node_budget = b;
        cfg.certificate.node_budget = b;
    }
    cfg.certificate.s = certificate_size;
    cfg
}

/// Decision report as a dict; `method` is brute, slow, fast or all.
#[pyfunction]
#[pyo3(signature = (h, method = "fast", budget = None, certificate_size = None))]
fn decide<'py>(
    py: Python<'py>,
    h: &PyHypergraph,
    method: &str,
    budget: Option<u64>,
    certificate_size: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let methods = if method == "all" {
        vec![Method::Brute, Method::Slow, Method::Fast]
    } else {
        vec![method.parse::<Method>().map_err(value_err)?]
    };
    let cfg = config(budget, certificate_size);
    let results = methods
        .into_iter()
        .map(|m| match decision::decide(&h.inner, m, &cfg) {
            Ok(d) => MethodOutcome::Decided(Box::new(d)),
            Err(e) => MethodOutcome::Failed {
                method: m,
                verdict: decision::Verdict::Unknown,
                error: e.to_string(),
            },
        })
        .collect();
    to_py(py, &DecisionReport::new(&h.inner, &cfg, results))
}

#[pyfunction]
fn analyze<'py>(py: Python<'py>, h: &PyHypergraph) -> PyResult<Bound<'py, PyAny>> {
    let cfg = DecideConfig::default();
    let r = run_pipeline(&h.inner, &cfg.pipeline).map_err(value_err)?;
    let text = to_json(&AnalysisReport::new(&h.inner, r));
    py.import("json")?.call_method1("loads", (text,))
}

/// A certificate of no perfect matching as a dict, or None.
#[pyfunction]
#[pyo3(signature = (h, s = None))]
fn find_certificate<'py>(py: Python<'py>, h: &PyHypergraph, s: Option<usize>) -> PyResult<Option<Bound<'py, PyAny>>> {
    let cfg = config(None, s).certificate;
    match decision::has_certificate(&h.inner, &cfg) {
        Outcome::Yes(c) => {
            debug_assert!(decision::verify_certificate(&h.inner, &c));
            Ok(Some(to_py(py, &c)?))
        }
        Outcome::No => Ok(None),
        Outcome::Unknown(e) => Err(PyRuntimeError::new_err(e.to_string())),
    }
}

/// Parity bipartition `[X, Y]`, or None.
#[pyfunction]
fn parity_bipartition(h: &PyHypergraph) -> PyResult<Option<Vec<Vec<usize>>>> {
    let p = decision::in_hnk(&h.inner).map_err(value_err)?;
    Ok(p.map(|p| p.parts().iter().map(|s| s.to_vec()).collect()))
}

/// Matching with fewer than `len(parts)` edges solving the pair, or None.
#[pyfunction]
fn soluble(h: &PyHypergraph, parts: Vec<Vec<usize>>, lattice: &PyLattice) -> PyResult<Option<Vec<Vec<usize>>>> {
    let p = partition_from(h.inner.n(), parts)?;
    let m = decision::is_soluble(&h.inner, &p, &lattice.inner).map_err(value_err)?;
    Ok(m.map(|m| edge_lists(&m.edges)))
}

#[pyfunction]
fn list_partitions(h: &PyHypergraph, d: usize, lattice: &PyLattice) -> PyResult<Vec<Vec<Vec<usize>>>> {
    let listing = decision::list_partitions(&h.inner, d, &lattice.inner).map_err(value_err)?;
    if !listing.complete {
        return Err(PyRuntimeError::new_err("partition listing ran out of budget"));
    }
    Ok(listing
        .partitions
        .iter()
        .map(|p| p.parts().iter().map(|s| s.to_vec()).collect())
        .collect())
}

#[pyfunction]
fn full_lattices(d: usize, k: usize) -> Vec<PyLattice> {
    decision::enumerate_full_lattices(d, k)
        .lattices
        .into_iter()
        .map(|inner| PyLattice { inner })
        .collect()
}

#[pymodule]
fn pyhypermatch(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHypergraph>()?;
    m.add_class::<PyLattice>()?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(find_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(parity_bipartition, m)?)?;
    m.add_function(wrap_pyfunction!(soluble, m)?)?;
    m.add_function(wrap_pyfunction!(list_partitions, m)?)?;
    m.add_function(wrap_pyfunction!(full_lattices, m)?)?;
    m.add("SCHEMA_VERSION", hypermatch::report::SCHEMA_VERSION)?;
    Ok(())
}
