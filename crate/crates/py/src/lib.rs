//! Python bindings for `tie_entropy`.
//!
//! Graphs are wrapped in an opaque `Graph` class; everything else crosses the
//! boundary as plain Python values (ints, floats, tuples, dicts).

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tie_entropy::experiments::{self, CurveSpec};
use tie_entropy::{generators, io, Error};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        Error::Invariant(m) => PyRuntimeError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

#[pyclass(name = "Graph", module = "tie_entropy_py", skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: tie_entropy::Graph,
}

impl From<tie_entropy::Graph> for PyGraph {
    fn from(inner: tie_entropy::Graph) -> Self {
        PyGraph { inner }
    }
}

#[pymethods]
impl PyGraph {
    /// Simple undirected graph on `n` nodes. Duplicate or self-loop edges raise ValueError.
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        tie_entropy::Graph::from_edges(n, edges).map(Into::into).map_err(to_py)
    }

    /// Reads a SNAP-style edge list; node labels are densified.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let loaded = io::load_edge_list(&io::EdgeListFile::snap(path)).map_err(to_py)?;
        Ok(loaded.graph.into())
    }

    fn save(&self, path: PathBuf) -> PyResult<()> {
        io::save_edge_list(&self.inner, &path).map_err(to_py)
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        self.inner.degree(v).map_err(to_py)
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        self.inner.degree(v).map_err(to_py)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn has_edge(&self, i: usize, j: usize) -> bool {
        self.inner.has_edge(i, j)
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().map(|e| (e.i, e.j)).collect()
    }

    fn add_edge(&mut self, i: usize, j: usize) -> PyResult<()> {
        self.inner.add_edge(i, j).map_err(to_py)
    }

    fn remove_edge(&mut self, i: usize, j: usize) -> PyResult<()> {
        self.inner.remove_edge(i, j).map_err(to_py)
    }

    fn common_neighbors(&self, i: usize, j: usize) -> PyResult<Vec<usize>> {
        self.inner.common_neighbors(i, j).map_err(to_py)
    }

    fn tie_strength(&self, i: usize, j: usize) -> PyResult<f64> {
        self.inner.tie_strength(i, j).map_err(to_py)
    }

    fn local_clustering(&self, v: usize) -> PyResult<f64> {
        self.inner.local_clustering(v).map_err(to_py)
    }

    fn avg_clustering(&self) -> f64 {
        self.inner.avg_clustering()
    }

    fn copy(&self) -> Self {
        self.clone()
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }

    fn __repr__(&self) -> String {
        format!("Graph(nodes={}, edges={})", self.inner.node_count(), self.inner.edge_count())
    }
}

fn delta_dict<'py>(py: Python<'py>, d: &tie_entropy::EntropyDelta) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("i", d.edge.i)?;
    out.set_item("j", d.edge.j)?;
    out.set_item("c_ij", d.c_ij)?;
    out.set_item("delta_i", d.delta_i)?;
    out.set_item("delta_j", d.delta_j)?;
    out.set_item("delta_pair", d.delta_pair)?;
    Ok(out)
}

#[pyfunction]
fn entropy(g: &PyGraph, v: usize) -> PyResult<f64> {
    tie_entropy::entropy(&g.inner, v).map_err(to_py)
}

/// Counts of each node in the information sequence of `v`.
#[pyfunction]
fn info_sequence(g: &PyGraph, v: usize) -> PyResult<Vec<(usize, u64)>> {
    let seq = tie_entropy::info_sequence(&g.inner, v).map_err(to_py)?;
    Ok(seq.counts.into_iter().collect())
}

/// Entropy change of both endpoints if the absent tie `(i, j)` were added.
#[pyfunction]
#[pyo3(signature = (g, i, j, exact = false))]
fn delta_on_add<'py>(py: Python<'py>, g: &PyGraph, i: usize, j: usize, exact: bool) -> PyResult<Bound<'py, PyDict>> {
    let d = if exact {
        tie_entropy::delta_on_add_exact(&g.inner, i, j)
    } else {
        tie_entropy::delta_on_add_incremental(&g.inner, i, j)
    }
    .map_err(to_py)?;
    delta_dict(py, &d)
}

/// Entropy with the existing tie `(i, j)` minus entropy without it.
#[pyfunction]
fn delta_on_remove<'py>(py: Python<'py>, g: &PyGraph, i: usize, j: usize) -> PyResult<Bound<'py, PyDict>> {
    let d = tie_entropy::delta_on_remove(&g.inner, i, j).map_err(to_py)?;
    delta_dict(py, &d)
}

#[pyfunction]
fn delta_taylor_approx(g: &PyGraph, i: usize, j: usize) -> PyResult<f64> {
    tie_entropy::delta_taylor_approx(&g.inner, i, j).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, m, seed = 0))]
fn gen_ba(n: usize, m: usize, seed: u64) -> PyResult<PyGraph> {
    generators::gen_ba(n, m, seed).map(Into::into).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, k, p, seed = 0))]
fn gen_sw(n: usize, k: usize, p: f64, seed: u64) -> PyResult<PyGraph> {
    generators::gen_sw(n, k, p, seed).map(Into::into).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, u, r, seed = 0))]
fn gen_cnnr(n: usize, u: f64, r: f64, seed: u64) -> PyResult<PyGraph> {
    generators::gen_cnnr(n, u, r, seed).map(Into::into).map_err(to_py)
}

/// Degree-preserving rewiring toward a target clustering. Returns the new
/// graph and a dict with the achieved clustering and swap counts.
#[pyfunction]
#[pyo3(signature = (g, target, tolerance = 0.02, max_swaps = 2_000_000, seed = 0))]
fn tune_clustering<'py>(
    py: Python<'py>,
    g: &PyGraph,
    target: f64,
    tolerance: f64,
    max_swaps: usize,
    seed: u64,
) -> PyResult<(PyGraph, Bound<'py, PyDict>)> {
    let params = generators::TuneParams {
        target_clustering: target,
        max_swaps,
        tolerance,
    };
    let out = py
        .detach(|| generators::tune_clustering(&g.inner, &params, seed))
        .map_err(to_py)?;
    let info = PyDict::new(py);
    info.set_item("clustering", out.clustering)?;
    info.set_item("accepted_swaps", out.accepted_swaps)?;
    info.set_item("proposals", out.proposals)?;
    info.set_item("best_effort", out.best_effort)?;
    Ok((out.graph.into(), info))
}

/// `(i, j, c_ij, delta_pair)` for every tie, in canonical edge order.
#[pyfunction]
#[pyo3(signature = (g, workers = 1))]
fn edge_sweep(py: Python<'_>, g: &PyGraph, workers: usize) -> PyResult<Vec<(usize, usize, usize, f64)>> {
    let records = py.detach(|| experiments::edge_sweep(&g.inner, workers)).map_err(to_py)?;
    Ok(records.into_iter().map(|r| (r.edge.i, r.edge.j, r.c_ij, r.delta_pair)).collect())
}

/// `(c_ij, count, min, mean, max)` per common-friend count.
#[pyfunction]
#[pyo3(signature = (g, workers = 1))]
fn sweep_aggregate(py: Python<'_>, g: &PyGraph, workers: usize) -> PyResult<Vec<(usize, usize, f64, f64, f64)>> {
    let agg = py
        .detach(|| experiments::edge_sweep(&g.inner, workers).and_then(|r| experiments::aggregate_sweep(&r)))
        .map_err(to_py)?;
    Ok(agg.buckets.into_iter().map(|b| (b.c_ij, b.count, b.min, b.mean, b.max)).collect())
}

#[pyfunction]
#[pyo3(signature = (g, workers = 1))]
fn positiveness<'py>(py: Python<'py>, g: &PyGraph, workers: usize) -> PyResult<Bound<'py, PyDict>> {
    let report = py.detach(|| experiments::positiveness(&g.inner, workers)).map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("tau", report.tau)?;
    out.set_item("positive", report.positive_count)?;
    out.set_item("total", report.total())?;
    out.set_item("clustering", report.clustering)?;
    Ok(out)
}

/// Empirical CDF of tie strength as `(w, cumulative fraction)` steps.
#[pyfunction]
fn strength_cdf(g: &PyGraph) -> PyResult<Vec<(f64, f64)>> {
    experiments::strength_cdf(&g.inner).map(|c| c.points).map_err(to_py)
}

/// `(p, clustering, tau)` for small world graphs at each rewiring probability, sorted by clustering.
#[pyfunction]
#[pyo3(signature = (n, k, ps, seed = 0, workers = 1))]
fn small_world_curve(
    py: Python<'_>,
    n: usize,
    k: usize,
    ps: Vec<f64>,
    seed: u64,
    workers: usize,
) -> PyResult<Vec<(f64, f64, f64)>> {
    let spec = CurveSpec::SmallWorld { n, k, seed };
    let points = py
        .detach(|| experiments::tau_vs_clustering_curve(&spec, &ps, workers))
        .map_err(to_py)?;
    Ok(points.into_iter().map(|p| (p.knob, p.clustering, p.tau)).collect())
}

#[pymodule]
fn tie_entropy_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(info_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(delta_on_add, m)?)?;
    m.add_function(wrap_pyfunction!(delta_on_remove, m)?)?;
    m.add_function(wrap_pyfunction!(delta_taylor_approx, m)?)?;
    m.add_function(wrap_pyfunction!(gen_ba, m)?)?;
    m.add_function(wrap_pyfunction!(gen_sw, m)?)?;
    m.add_function(wrap_pyfunction!(gen_cnnr, m)?)?;
    m.add_function(wrap_pyfunction!(tune_clustering, m)?)?;
    m.add_function(wrap_pyfunction!(edge_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_aggregate, m)?)?;
    m.add_function(wrap_pyfunction!(positiveness, m)?)?;
    m.add_function(wrap_pyfunction!(strength_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(small_world_curve, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
