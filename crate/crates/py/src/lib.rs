//! Python module `lcl`. Reports come back as plain dicts and lists.

use std::sync::Arc;

use lcl_core::harness::{
    self, estimate_failure, AlgorithmKind, Labeling, Locality, ScheduleSource, Setup,
};
use lcl_core::instances::{self, ChunkChoice, CompleteKind};
use lcl_core::problem::serialize_problem;
use lcl_core::{automaton, certificate, depth, SearchBounds};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (v.to_string(),))?.unbind())
}

fn from_py(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let text: String = obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(err)
}

fn parse_locality(obj: &Bound<'_, PyAny>) -> PyResult<Locality> {
    if let Ok(r) = obj.extract::<usize>() {
        return Ok(Locality::Radius(r));
    }
    obj.extract::<String>()?.parse().map_err(err)
}

/// An LCL problem, rooted or unrooted.
#[pyclass(frozen, skip_from_py_object, module = "lcl")]
#[derive(Clone)]
struct Problem {
    inner: Arc<lcl_core::Problem>,
}

#[pymethods]
impl Problem {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let p = lcl_core::parse_problem(text).map_err(err)?;
        Ok(Problem { inner: Arc::new(p) })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Self::from_json(&std::fs::read_to_string(path).map_err(err)?)
    }

    fn to_json(&self) -> String {
        serialize_problem(&self.inner)
    }

    #[getter]
    fn delta(&self) -> usize {
        self.inner.delta()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn is_rooted(&self) -> bool {
        self.inner.is_rooted()
    }

    /// "0", a positive integer, or "inf".
    fn depth(&self) -> String {
        depth::depth(&self.inner).value.as_text()
    }

    #[pyo3(signature = (max_depth=6, max_sigma=None, expansion_cap=10_000_000))]
    fn classify(&self, py: Python<'_>, max_depth: usize, max_sigma: Option<usize>, expansion_cap: u64) -> PyResult<Py<PyAny>> {
        let bounds = SearchBounds { max_depth, max_sigma, expansion_cap };
        let report = depth::classify(&self.inner, bounds).map_err(err)?;
        to_py(py, &report.to_json(&self.inner))
    }

    /// The certificate as a dict, or None when the bounded search finds none.
    #[pyo3(signature = (max_depth=6, max_sigma=None, expansion_cap=10_000_000))]
    fn certificate(&self, py: Python<'_>, max_depth: usize, max_sigma: Option<usize>, expansion_cap: u64) -> PyResult<Option<Py<PyAny>>> {
        let lcl_core::Problem::Rooted(p) = self.inner.as_ref() else {
            return Err(PyValueError::new_err("certificates need a rooted problem"));
        };
        let bounds = SearchBounds { max_depth, max_sigma, expansion_cap };
        match certificate::search_certificate(p, bounds).certificate() {
            Some(c) => Ok(Some(to_py(py, &c.to_json(p))?)),
            None => Ok(None),
        }
    }

    /// Violations found in a certificate dict; empty when it is valid.
    fn verify_certificate(&self, cert: &Bound<'_, PyAny>) -> PyResult<Vec<String>> {
        let lcl_core::Problem::Rooted(p) = self.inner.as_ref() else {
            return Err(PyValueError::new_err("certificates need a rooted problem"));
        };
        let c = certificate::Certificate::from_json(&from_py(cert)?, p).map_err(err)?;
        Ok(certificate::verify_certificate(p, &c).iter().map(|v| v.to_string()).collect())
    }

    fn automaton_dot(&self) -> String {
        match self.inner.as_ref() {
            lcl_core::Problem::Rooted(p) => automaton::build_automaton_rooted(p, p.all_labels()).to_dot(p.labels()),
            lcl_core::Problem::Unrooted(p) => automaton::build_automaton_unrooted(p, &p.all_configs()).to_dot(p.labels()),
        }
    }

    fn __repr__(&self) -> String {
        let kind = if self.inner.is_rooted() { "rooted" } else { "unrooted" };
        format!("Problem({kind}, delta={}, labels={:?})", self.inner.delta(), self.inner.labels())
    }
}

/// A tree instance with its annotations.
#[pyclass(frozen, skip_from_py_object, module = "lcl")]
#[derive(Clone)]
struct Tree {
    inner: Arc<instances::Tree>,
}

impl Tree {
    fn wrap(t: instances::Tree) -> Self {
        Tree { inner: Arc::new(t) }
    }
}

#[pymethods]
impl Tree {
    #[staticmethod]
    fn rooted_lb(delta: usize, beta: usize, k: usize, t: usize) -> PyResult<Self> {
        instances::build_lb_rooted(delta, beta, k, t).map(Self::wrap).map_err(err)
    }

    #[staticmethod]
    fn unrooted_lb(delta: usize, gamma: usize, k: usize, t: usize) -> PyResult<Self> {
        instances::build_lb_unrooted(delta, gamma, k, t).map(Self::wrap).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (sigma, delta, d, b, u, chunk, unchecked=false))]
    fn chunks(sigma: usize, delta: usize, d: usize, b: u8, u: usize, chunk: usize, unchecked: bool) -> PyResult<Self> {
        let choice = ChunkChoice { b, u, chunk };
        let inst = if unchecked {
            instances::build_chunk_instance_unchecked(sigma, delta, d, choice)
        } else {
            instances::build_chunk_instance(sigma, delta, d, choice)
        };
        Ok(Self::wrap(inst.map_err(err)?.tree()))
    }

    /// kind is "delta-ary", "t" or "t-star".
    #[staticmethod]
    #[pyo3(signature = (delta, depth, kind="delta-ary"))]
    fn complete(delta: usize, depth: usize, kind: &str) -> PyResult<Self> {
        let kind = match kind {
            "delta-ary" => CompleteKind::DeltaAry,
            "t" => CompleteKind::T,
            "t-star" => CompleteKind::TStar,
            other => return Err(PyValueError::new_err(format!("unknown tree kind `{other}`"))),
        };
        instances::complete_tree(delta, depth, kind).map(Self::wrap).map_err(err)
    }

    #[staticmethod]
    fn from_edges(n: usize, edges: Vec<[usize; 2]>) -> PyResult<Self> {
        instances::Tree::from_edges(n, &edges).map(Self::wrap).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: Value = serde_json::from_str(text).map_err(err)?;
        instances::Tree::from_json(&v).map(Self::wrap).map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn is_rooted(&self) -> bool {
        self.inner.is_rooted()
    }

    #[getter]
    fn parents(&self) -> Vec<Option<usize>> {
        self.inner.parents().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<[usize; 2]> {
        self.inner.edges().to_vec()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        if v >= self.inner.len() {
            return Err(PyValueError::new_err(format!("node {v} out of range")));
        }
        Ok(self.inner.degree(v))
    }

    /// Layer name ("R1", "C2", ...) per node, None outside all layers.
    #[getter]
    fn layers(&self) -> Vec<Option<String>> {
        self.inner.ann.layer.iter().map(|l| l.map(|l| l.to_string())).collect()
    }

    fn __repr__(&self) -> String {
        format!("Tree({}, n={})", self.inner.kind().as_str(), self.inner.len())
    }
}

/// A reveal order, possibly with the sampled u-nodes of an adversarial run.
#[pyclass(frozen, skip_from_py_object, module = "lcl")]
#[derive(Clone)]
struct Schedule {
    inner: instances::Schedule,
}

#[pymethods]
impl Schedule {
    #[staticmethod]
    fn sample(tree: &Tree, t: usize, seed: u64) -> PyResult<Self> {
        let inner = instances::sample_schedule(&tree.inner, t, seed).map_err(err)?;
        Ok(Schedule { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (order, seed=0))]
    fn from_order(order: Vec<usize>, seed: u64) -> Self {
        Schedule { inner: instances::Schedule::from_order(order, seed) }
    }

    #[getter]
    fn order(&self) -> Vec<usize> {
        self.inner.order.clone()
    }

    #[getter]
    fn u_nodes(&self) -> Vec<Vec<usize>> {
        self.inner.u_nodes.clone()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }
}

/// A correct labeling as a dict, or None when the tree admits none.
#[pyfunction]
fn solve(py: Python<'_>, problem: &Problem, tree: &Tree) -> PyResult<Option<Py<PyAny>>> {
    match harness::solve_offline(&tree.inner, &problem.inner) {
        Some(l) => Ok(Some(to_py(py, &l.to_json(problem.inner.labels()))?)),
        None => Ok(None),
    }
}

/// Verdict dict for a labeling given as {"labels": [...]} or
/// {"half_edges": [[a, b], ...]}.
#[pyfunction]
fn check(py: Python<'_>, problem: &Problem, tree: &Tree, labeling: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
    let l = Labeling::from_json(&from_py(labeling)?, &problem.inner).map_err(err)?;
    to_py(py, &harness::check(&tree.inner, &l, &problem.inner).to_json())
}

/// Failure estimate dict. Without a schedule every trial samples an
/// adversarial one for `t` (default: the t the instance was built for).
#[pyfunction]
#[pyo3(signature = (problem, tree, algorithm, locality, trials, seed, t=None, schedule=None))]
#[allow(clippy::too_many_arguments)]
fn estimate(
    py: Python<'_>,
    problem: &Problem,
    tree: &Tree,
    algorithm: &str,
    locality: &Bound<'_, PyAny>,
    trials: usize,
    seed: u64,
    t: Option<usize>,
    schedule: Option<&Schedule>,
) -> PyResult<Py<PyAny>> {
    if trials == 0 {
        return Err(PyValueError::new_err("trials must be at least 1"));
    }
    let algorithm = AlgorithmKind::from_name(algorithm)
        .ok_or_else(|| PyValueError::new_err(format!("unknown algorithm `{algorithm}`")))?;
    let source = match (schedule, t, tree.inner.ann.lower_bound) {
        (Some(s), _, _) => ScheduleSource::Fixed(s.inner.clone()),
        (None, Some(t), _) => ScheduleSource::Adversarial { t },
        (None, None, Some(meta)) => ScheduleSource::Adversarial { t: meta.t },
        (None, None, None) => return Err(PyValueError::new_err("need t or a schedule")),
    };
    let setup = Setup {
        problem: problem.inner.clone(),
        tree: tree.inner.clone(),
        schedule: source,
        algorithm,
        locality: parse_locality(locality)?,
    };
    let est = py.detach(|| estimate_failure(&setup, trials, seed)).map_err(err)?;
    to_py(py, &est.to_json())
}

/// Nodes left after `tau` rounds of leaf removal.
#[pyfunction]
fn skeleton(tree: &Tree, tau: usize) -> Vec<usize> {
    instances::skeleton_tree(&tree.inner, tau).1
}

/// (ruling nodes, segments) on the degree-at-most-2 paths.
#[pyfunction]
fn ruling_set(tree: &Tree, c: usize) -> (Vec<usize>, Vec<Vec<usize>>) {
    let r = instances::path_ruling_set(&tree.inner, c);
    (r.ruling, r.segments)
}

#[pyfunction]
fn chunk_node_count(sigma: usize, delta: usize, d: usize) -> u128 {
    instances::chunk_node_count(sigma, delta, d)
}

#[pymodule]
pub fn lcl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Problem>()?;
    m.add_class::<Tree>()?;
    m.add_class::<Schedule>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(skeleton, m)?)?;
    m.add_function(wrap_pyfunction!(ruling_set, m)?)?;
    m.add_function(wrap_pyfunction!(chunk_node_count, m)?)?;
    m.add("ALGORITHMS", AlgorithmKind::ALL.iter().map(|a| a.name()).collect::<Vec<_>>())?;
    Ok(())
}
