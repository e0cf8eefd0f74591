//! Python bindings: graphs, detection-pair verification, brute-force
//! oracles, the set-cover approximation, the tree algorithms and the
//! instance generators, with plain lists and tuples at the boundary.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use detpair::detection::DetectionPair;
use detpair::graph::Vertex;
use detpair::tree_fpt::{fpt_decide as fpt_decide_rs, FptConfig, FptOutcome};
use detpair::{instances, VerifyOutcome};

fn err(e: detpair::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pair_to_py(dp: &DetectionPair) -> (Vec<Vertex>, Vec<Vertex>) {
    (
        dp.watchers.iter().copied().collect(),
        dp.listeners.iter().copied().collect(),
    )
}

/// An undirected simple graph on vertices `0..n`.
#[pyclass(name = "Graph")]
#[derive(Clone)]
struct PyGraph {
    inner: detpair::Graph,
}

impl PyGraph {
    fn check_vertex(&self, v: Vertex) -> PyResult<()> {
        if v < self.inner.n() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!(
                "vertex {v} out of range for a graph on {} vertices",
                self.inner.n()
            )))
        }
    }
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges=None))]
    fn new(n: usize, edges: Option<Vec<(Vertex, Vertex)>>) -> PyResult<Self> {
        let inner = match edges {
            Some(e) => detpair::Graph::from_edges(n, &e).map_err(err)?,
            None => detpair::Graph::new(n),
        };
        Ok(Self { inner })
    }

    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.inner.edges()
    }

    fn add_edge(&mut self, u: Vertex, v: Vertex) -> PyResult<()> {
        self.inner.add_edge(u, v).map_err(err)
    }

    fn degree(&self, v: Vertex) -> PyResult<usize> {
        self.check_vertex(v)?;
        Ok(self.inner.degree(v))
    }

    fn neighbors(&self, v: Vertex) -> PyResult<Vec<Vertex>> {
        self.check_vertex(v)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn has_edge(&self, u: Vertex, v: Vertex) -> PyResult<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.inner.has_edge(u, v))
    }

    /// Hop distances from `source`; unreachable vertices get None.
    fn bfs_distances(&self, source: Vertex) -> PyResult<Vec<Option<usize>>> {
        self.check_vertex(source)?;
        Ok(self
            .inner
            .bfs_distances(source)
            .into_iter()
            .map(|d| (d != detpair::graph::INFINITE).then_some(d))
            .collect())
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn is_tree(&self) -> bool {
        self.inner.is_tree()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, edges={})",
            self.inner.n(),
            self.inner.edge_count()
        )
    }
}

/// Checks whether `(watchers, listeners)` is a detection pair of `g`.
/// Returns None when it is, and the first violating vertex pair when not.
#[pyfunction]
fn verify(
    g: &PyGraph,
    watchers: Vec<Vertex>,
    listeners: Vec<Vertex>,
) -> PyResult<Option<(Vertex, Vertex)>> {
    let dp = DetectionPair::new(watchers, listeners);
    match detpair::verify(&g.inner, &dp).map_err(err)? {
        VerifyOutcome::Valid => Ok(None),
        VerifyOutcome::Invalid { witness } => Ok(Some(witness)),
    }
}

/// Brute-force optimum DP(G) with its witness, as
/// `(value, watchers, listeners)`. Searches sizes up to `k_max`.
#[pyfunction]
fn dp_oracle(g: &PyGraph, k_max: usize) -> PyResult<(usize, Vec<Vertex>, Vec<Vertex>)> {
    let out = detpair::dp_oracle(&g.inner, k_max).map_err(err)?;
    let (w, l) = pair_to_py(&out.witness);
    Ok((out.value, w, l))
}

/// Brute-force minimum dominating set, as `(value, vertices)`.
#[pyfunction]
fn gamma_oracle(g: &PyGraph) -> PyResult<(usize, Vec<Vertex>)> {
    let out = detpair::gamma_oracle(&g.inner).map_err(err)?;
    Ok((out.value, out.witness.into_iter().collect()))
}

/// Brute-force minimum resolving set (metric dimension), as
/// `(value, vertices)`.
#[pyfunction]
fn md_oracle(g: &PyGraph) -> PyResult<(usize, Vec<Vertex>)> {
    let out = detpair::md_oracle(&g.inner).map_err(err)?;
    Ok((out.value, out.witness.into_iter().collect()))
}

/// Greedy set-cover approximation of a detection pair on a general graph,
/// within factor 2 ln n + 1, as `(watchers, listeners)`.
#[pyfunction]
fn approx_detection_pair(g: &PyGraph) -> PyResult<(Vec<Vertex>, Vec<Vertex>)> {
    let dp = detpair::approx_detection_pair(&g.inner).map_err(err)?;
    Ok(pair_to_py(&dp))
}

/// Linear-time 2-approximation of a detection pair on a tree, as
/// `(watchers, listeners)`.
#[pyfunction]
fn approx2_detection_pair(t: &PyGraph) -> PyResult<(Vec<Vertex>, Vec<Vertex>)> {
    let out = detpair::approx2_detection_pair(&t.inner).map_err(err)?;
    Ok(pair_to_py(&out.pair))
}

/// Optimal resolving set of a tree (Slater's rule).
#[pyfunction]
fn slater_resolving_set(t: &PyGraph) -> PyResult<Vec<Vertex>> {
    detpair::slater_resolving_set(&t.inner).map_err(err)
}

/// Minimum dominating set of a tree.
#[pyfunction]
fn min_dominating_set_tree(t: &PyGraph) -> PyResult<Vec<Vertex>> {
    detpair::min_dominating_set_tree(&t.inner).map_err(err)
}

/// Decides whether the tree has a detection pair of size at most `k`.
/// Returns a witness `(watchers, listeners)` when it does, None when not.
#[pyfunction]
fn fpt_decide(t: &PyGraph, k: usize) -> PyResult<Option<(Vec<Vertex>, Vec<Vertex>)>> {
    match fpt_decide_rs(&t.inner, k, FptConfig::default()).map_err(err)? {
        FptOutcome::Yes(dp) => Ok(Some(pair_to_py(&dp))),
        FptOutcome::No => Ok(None),
    }
}

#[pyfunction]
fn gen_path(n: usize) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: instances::gen_path(n).map_err(err)?,
    })
}

#[pyfunction]
fn gen_complete(n: usize) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: instances::gen_complete(n).map_err(err)?,
    })
}

#[pyfunction]
fn gen_star(leaves: usize) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: instances::gen_star(leaves).map_err(err)?,
    })
}

#[pyfunction]
fn gen_spider(leg_lengths: Vec<usize>) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: instances::gen_spider(&leg_lengths).map_err(err)?,
    })
}

#[pyfunction]
fn gen_t1(l: usize, star_size: usize) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: instances::gen_t1(l, star_size).map_err(err)?,
    })
}

#[pyfunction]
fn gen_t2(l: usize) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: instances::gen_t2(l).map_err(err)?,
    })
}

#[pyfunction]
fn gen_random_tree(n: usize, seed: u64) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: instances::gen_random_tree(n, seed).map_err(err)?,
    })
}

#[pyfunction]
fn gen_random_graph(n: usize, p: f64, seed: u64) -> PyResult<PyGraph> {
    Ok(PyGraph {
        inner: instances::gen_random_graph(n, p, seed).map_err(err)?,
    })
}

#[pymodule]
fn detpair_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(dp_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(md_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(approx_detection_pair, m)?)?;
    m.add_function(wrap_pyfunction!(approx2_detection_pair, m)?)?;
    m.add_function(wrap_pyfunction!(slater_resolving_set, m)?)?;
    m.add_function(wrap_pyfunction!(min_dominating_set_tree, m)?)?;
    m.add_function(wrap_pyfunction!(fpt_decide, m)?)?;
    m.add_function(wrap_pyfunction!(gen_path, m)?)?;
    m.add_function(wrap_pyfunction!(gen_complete, m)?)?;
    m.add_function(wrap_pyfunction!(gen_star, m)?)?;
    m.add_function(wrap_pyfunction!(gen_spider, m)?)?;
    m.add_function(wrap_pyfunction!(gen_t1, m)?)?;
    m.add_function(wrap_pyfunction!(gen_t2, m)?)?;
    m.add_function(wrap_pyfunction!(gen_random_tree, m)?)?;
    m.add_function(wrap_pyfunction!(gen_random_graph, m)?)?;
    Ok(())
}
