//! Python bindings for `dyncolor`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dyncolor::degeneracy::smallest_last_dense;
use dyncolor::harness::{self, Family, GeneratorKind, RunConfig, Workload};
use dyncolor::partition::{choose_k, PartitionConfig, UpdateOp};
use dyncolor::{
    ColorParams, NodeId, OrientationStrategy, PartitionedColorer, PolicyKind, RecursionPolicy,
    StrategyKind,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_policy(s: &str) -> PyResult<PolicyKind> {
    match s {
        "det" | "deterministic" => Ok(PolicyKind::Deterministic),
        "rand" | "randomized" => Ok(PolicyKind::Randomized),
        _ => Err(value_err(format!("unknown policy `{s}`"))),
    }
}

fn parse_orientation(s: &str) -> PyResult<StrategyKind> {
    match s {
        "static" => Ok(StrategyKind::StaticRecompute),
        "amortized" => Ok(StrategyKind::AmortizedFlip),
        _ => Err(value_err(format!("unknown orientation `{s}`"))),
    }
}

fn ids(edges: &[(u32, u32)]) -> Vec<(NodeId, NodeId)> {
    edges.iter().map(|&(a, b)| (NodeId(a), NodeId(b))).collect()
}

/// Dynamic graph answering color queries; colors between two updates form a
/// proper coloring.
#[pyclass(module = "dyncolor_py")]
struct Colorer {
    inner: PartitionedColorer,
}

#[pymethods]
impl Colorer {
    #[new]
    #[pyo3(signature = (n, k=1, seed=0, policy="det", orientation="amortized", cap_multiplier=4.0, rebuild_interval=1))]
    fn new(
        n: usize,
        k: usize,
        seed: u64,
        policy: &str,
        orientation: &str,
        cap_multiplier: f64,
        rebuild_interval: usize,
    ) -> PyResult<Self> {
        let policy = match parse_policy(policy)? {
            PolicyKind::Deterministic => RecursionPolicy::deterministic(),
            PolicyKind::Randomized => RecursionPolicy::randomized(seed),
        };
        let strategy = OrientationStrategy {
            cap_multiplier,
            rebuild_interval,
            ..OrientationStrategy::of_kind(parse_orientation(orientation)?)
        };
        let config = PartitionConfig {
            k,
            seed,
            strategy,
            policy,
            params: ColorParams::default(),
        };
        let inner = PartitionedColorer::new(n, config).map_err(value_err)?;
        Ok(Colorer { inner })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn range_width(&self) -> usize {
        self.inner.range_width()
    }

    /// Insert `{u, v}`; returns the arcs `(tail, head)` whose orientation changed.
    fn insert(&mut self, u: u32, v: u32) -> PyResult<Vec<(u32, u32)>> {
        let flips = self
            .inner
            .route_update(UpdateOp::Insert, NodeId(u), NodeId(v))
            .map_err(value_err)?;
        Ok(flips.into_iter().map(|a| (a.tail.0, a.head.0)).collect())
    }

    fn delete(&mut self, u: u32, v: u32) -> PyResult<()> {
        self.inner
            .route_update(UpdateOp::Delete, NodeId(u), NodeId(v))
            .map(drop)
            .map_err(value_err)
    }

    /// Global color of `u`.
    fn color(&mut self, u: u32) -> PyResult<u32> {
        Ok(self
            .inner
            .query_color_global(NodeId(u))
            .map_err(value_err)?
            .color)
    }

    /// Color of `u` with query diagnostics.
    fn query<'py>(&mut self, py: Python<'py>, u: u32) -> PyResult<Bound<'py, PyDict>> {
        let q = self
            .inner
            .query_color_global(NodeId(u))
            .map_err(value_err)?;
        let d = PyDict::new(py);
        d.set_item("node", u)?;
        d.set_item("color", q.color)?;
        d.set_item("part", q.part)?;
        d.set_item("local_color", q.local.color)?;
        d.set_item("vstar_size", q.local.vstar_size)?;
        d.set_item("triggers", q.local.trigger_arcs.len())?;
        d.set_item("colored", q.local.colored_total)?;
        Ok(d)
    }

    /// Colors assigned so far in the current epoch (`None` if not yet queried).
    fn colors(&self) -> Vec<Option<u32>> {
        self.inner.global_colors()
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        self.inner
            .edges()
            .into_iter()
            .map(|(a, b)| (a.0, b.0))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Colorer(n={}, m={}, k={})",
            self.inner.node_count(),
            self.inner.edge_count(),
            self.inner.k()
        )
    }
}

/// Smallest-last order and degeneracy of the graph on `0..n`.
#[pyfunction]
fn degeneracy(n: usize, edges: Vec<(u32, u32)>) -> PyResult<(Vec<u32>, usize)> {
    if let Some(&(a, b)) = edges
        .iter()
        .find(|&&(a, b)| a as usize >= n || b as usize >= n)
    {
        return Err(value_err(format!(
            "edge ({a}, {b}) out of range for n = {n}"
        )));
    }
    let order = smallest_last_dense(n, &ids(&edges));
    Ok((order.order.iter().map(|v| v.0).collect(), order.degeneracy))
}

/// Edges whose endpoints share a color.
#[pyfunction]
fn verify_proper(edges: Vec<(u32, u32)>, colors: Vec<Option<u32>>) -> PyResult<Vec<(u32, u32)>> {
    if let Some(&(a, b)) = edges
        .iter()
        .find(|&&(a, b)| a as usize >= colors.len() || b as usize >= colors.len())
    {
        return Err(value_err(format!("edge ({a}, {b}) has no color entry")));
    }
    Ok(dyncolor::oracle::verify_proper(&ids(&edges), &colors)
        .into_iter()
        .map(|(a, b)| (a.0, b.0))
        .collect())
}

/// Per-position frequency of the first randomized recursion on one node.
#[pyfunction]
#[pyo3(signature = (d, trials=1_000_000, seed=0))]
fn coin_experiment<'py>(
    py: Python<'py>,
    d: usize,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let exp = harness::coin_experiment(d, trials, seed).map_err(value_err)?;
    let out = PyDict::new(py);
    out.set_item("d", exp.d)?;
    out.set_item("trials", exp.trials)?;
    out.set_item("counts", exp.counts)?;
    out.set_item("empirical", exp.empirical)?;
    out.set_item("analytic", exp.analytic)?;
    out.set_item("max_abs_deviation", exp.max_abs_deviation)?;
    Ok(out)
}

/// Workload text for `kind` in {"gnm", "churn", "stress", "vstar"}.
#[pyfunction]
#[pyo3(signature = (kind, n, seed=0, m=None, ops=None, target_m=None, family=None, d=2, fan_in=11))]
#[allow(clippy::too_many_arguments)]
fn generate(
    kind: &str,
    n: usize,
    seed: u64,
    m: Option<usize>,
    ops: Option<usize>,
    target_m: Option<usize>,
    family: Option<&str>,
    d: usize,
    fan_in: usize,
) -> PyResult<String> {
    let missing = |name: &str| value_err(format!("`{kind}` needs `{name}`"));
    let kind = match kind {
        "gnm" => GeneratorKind::GnmSweep {
            n,
            m: m.ok_or_else(|| missing("m"))?,
        },
        "churn" => GeneratorKind::Churn {
            n,
            ops: ops.ok_or_else(|| missing("ops"))?,
            target_m: target_m.ok_or_else(|| missing("target_m"))?,
        },
        "stress" => GeneratorKind::AmortizedStress {
            n,
            family: family
                .ok_or_else(|| missing("family"))?
                .parse::<Family>()
                .map_err(value_err)?,
        },
        "vstar" => GeneratorKind::VstarStress { n, d, fan_in },
        other => return Err(value_err(format!("unknown generator `{other}`"))),
    };
    Ok(harness::generate(kind, seed).map_err(value_err)?.to_text())
}

/// Replay workload text; returns the JSONL report.
#[pyfunction]
#[pyo3(signature = (text, policy="det", orientation="amortized", partition=1, seed=0, strict=false))]
fn run_workload(
    text: &str,
    policy: &str,
    orientation: &str,
    partition: usize,
    seed: u64,
    strict: bool,
) -> PyResult<String> {
    let workload = Workload::parse(text).map_err(value_err)?;
    let config = RunConfig {
        policy: parse_policy(policy)?,
        orientation: parse_orientation(orientation)?,
        partition_k: partition,
        seed,
        strict,
        ..RunConfig::default()
    };
    Ok(harness::run(&workload, &config)
        .map_err(value_err)?
        .to_jsonl())
}

#[pyfunction(name = "choose_k")]
fn choose_k_py(alpha: usize, n: usize) -> PyResult<usize> {
    choose_k(alpha, n).map_err(value_err)
}

#[pymodule]
fn dyncolor_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Colorer>()?;
    m.add_function(wrap_pyfunction!(degeneracy, m)?)?;
    m.add_function(wrap_pyfunction!(verify_proper, m)?)?;
    m.add_function(wrap_pyfunction!(coin_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(run_workload, m)?)?;
    m.add_function(wrap_pyfunction!(choose_k_py, m)?)?;
    Ok(())
}
