//! Python bindings: instances, route sets, the four flow problems and the
//! LP solver. Solutions come back as plain dicts.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use feeder_core::lp::{self, LpError, Tolerances};
use feeder_core::oracle::{self, InstanceRecipe};
use feeder_core::routes::DEFAULT_ROUTE_CEILING;
use feeder_core::problems::Diagnostics;
use feeder_core::{FeederError, FlowSolution, Form, PriceTable, ProblemKind, RouteSet};

fn err(e: FeederError) -> PyErr {
    match e {
        FeederError::NotOptimal(_) | FeederError::Lp(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn lp_err(e: LpError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_form(form: &str) -> PyResult<Form> {
    form.parse().map_err(|e: FeederError| err(e))
}

/// A validated problem instance.
#[pyclass(module = "feeder", frozen)]
struct Instance {
    inner: feeder_core::Instance,
}

#[pymethods]
impl Instance {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Instance { inner: feeder_core::load_instance(text).map_err(err)? })
    }

    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path).map_err(|e| PyValueError::new_err(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Random instance; `recipe` is an optional JSON recipe whose seed and
    /// node count are overridden by the keyword arguments when given.
    #[staticmethod]
    #[pyo3(signature = (seed, nodes=None, recipe=None))]
    fn generate(seed: u64, nodes: Option<usize>, recipe: Option<&str>) -> PyResult<Self> {
        let mut r: InstanceRecipe = match recipe {
            Some(t) => serde_json::from_str(t).map_err(|e| PyValueError::new_err(e.to_string()))?,
            None => InstanceRecipe::default(),
        };
        r.seed = seed;
        if let Some(n) = nodes {
            r.nodes = n;
        }
        Ok(Instance { inner: oracle::generate(&r).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner.to_document()).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn with_cost_factor(&self, b: f64) -> Self {
        Instance { inner: self.inner.with_cost_factor(b) }
    }

    #[getter]
    fn nodes(&self) -> Vec<String> {
        self.inner.network.names().to_vec()
    }

    #[getter]
    fn interchange(&self) -> String {
        let net = &self.inner.network;
        net.name(net.interchange()).to_string()
    }

    #[getter]
    fn time_window(&self) -> f64 {
        self.inner.time_window
    }

    #[getter]
    fn value_of_time(&self) -> f64 {
        self.inner.value_of_time
    }

    #[getter]
    fn cost_factor(&self) -> Option<f64> {
        self.inner.cost_factor()
    }

    #[getter]
    fn total_supply(&self) -> f64 {
        self.inner.total_supply()
    }

    #[getter]
    fn total_demand(&self) -> f64 {
        self.inner.network.demand().iter().sum()
    }

    fn __repr__(&self) -> String {
        format!("Instance(nodes={}, T={}, alpha={})", self.inner.network.node_count(), self.inner.time_window, self.inner.value_of_time)
    }
}

fn route_labels(set: &RouteSet, net: &feeder_core::Network) -> Vec<String> {
    set.iter().map(|(_, r)| r.label(net)).collect()
}

fn solution_dict<'py>(
    py: Python<'py>,
    sol: &FlowSolution,
    routes: &RouteSet,
    prices: &PriceTable,
    net: &feeder_core::Network,
    diag: Option<&Diagnostics>,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kind", sol.kind.as_str())?;
    d.set_item("form", sol.form.to_string())?;
    d.set_item("status", sol.lp.status.to_string())?;
    d.set_item("objective", sol.objective)?;
    d.set_item("total_supply", sol.total_supply)?;
    d.set_item("iterations", sol.lp.iterations)?;
    d.set_item("routes_in_model", sol.routes_in_model.len())?;
    let flows = PyDict::new(py);
    for (id, r) in routes.iter() {
        if sol.flows[id] > 0.0 {
            flows.set_item(r.label(net), sol.flows[id])?;
        }
    }
    d.set_item("flows", flows)?;
    let mut allocations = Vec::new();
    for (k, t) in prices.tuples().iter().enumerate() {
        if sol.allocations[k] > 0.0 {
            allocations.push((routes.get(t.route).label(net), t.leg, net.name(t.node).to_string(), sol.allocations[k]));
        }
    }
    d.set_item("allocations", allocations)?;
    let by_node = |v: &[f64]| -> PyResult<Bound<'py, PyDict>> {
        let m = PyDict::new(py);
        for l in net.nodes() {
            m.set_item(net.name(l), v[l.0])?;
        }
        Ok(m)
    };
    d.set_item("node_totals", by_node(&sol.node_totals)?)?;
    d.set_item("supply", by_node(&sol.supply)?)?;
    if let Some(diag) = diag {
        let checks = PyDict::new(py);
        for c in &diag.checks {
            checks.set_item(c.name, c.passed)?;
        }
        d.set_item("checks", checks)?;
        d.set_item("all_passed", diag.all_passed())?;
    }
    Ok(d)
}

fn stats_dict<'py>(py: Python<'py>, s: feeder_core::reduction::PruningStats) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("total", s.total)?;
    d.set_item("reduced", s.reduced)?;
    d.set_item("simple", s.simple)?;
    d.set_item("multi_leg", s.multi_leg)?;
    d.set_item("supply_opt", s.supply_opt)?;
    Ok(d)
}

/// Feed-in scenario: route enumeration, prices, pruning, and the feed-in
/// and supply-optimization problems.
#[pyclass(module = "feeder", frozen)]
struct FeedIn {
    inner: feeder_core::FeedInScenario,
}

#[pymethods]
impl FeedIn {
    #[new]
    #[pyo3(signature = (instance, ceiling=DEFAULT_ROUTE_CEILING))]
    fn new(instance: &Instance, ceiling: usize) -> PyResult<Self> {
        Ok(FeedIn { inner: feeder_core::FeedInScenario::new(&instance.inner, ceiling).map_err(err)? })
    }

    fn routes(&self) -> Vec<String> {
        route_labels(&self.inner.routes, self.inner.network())
    }

    fn pruning_stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        stats_dict(py, self.inner.pruning_stats())
    }

    fn absolute_max_profit(&self) -> f64 {
        self.inner.absolute_max_profit()
    }

    #[pyo3(signature = (form="reduced"))]
    fn solve<'py>(&self, py: Python<'py>, form: &str) -> PyResult<Bound<'py, PyDict>> {
        let sc = &self.inner;
        let sol = sc.solve_feedin(parse_form(form)?).map_err(err)?;
        let diag = sc.verify(&sol).map_err(err)?;
        solution_dict(py, &sol, &sc.routes, &sc.prices, sc.network(), Some(&diag))
    }

    #[pyo3(signature = (total_supply, form="reduced", pin_interchange=false))]
    fn solve_supply_opt<'py>(&self, py: Python<'py>, total_supply: f64, form: &str, pin_interchange: bool) -> PyResult<Bound<'py, PyDict>> {
        let sc = &self.inner;
        let sol = sc.solve_supply_opt(total_supply, parse_form(form)?, pin_interchange).map_err(err)?;
        let diag = sc.verify(&sol).map_err(err)?;
        solution_dict(py, &sol, &sc.routes, &sc.prices, sc.network(), Some(&diag))
    }
}

/// Feed-out scenario, solved directly or through the equivalent feed-in
/// problem on the reversed network.
#[pyclass(module = "feeder", frozen)]
struct FeedOut {
    inner: feeder_core::FeedOutScenario,
}

#[pymethods]
impl FeedOut {
    #[new]
    #[pyo3(signature = (instance, ceiling=DEFAULT_ROUTE_CEILING))]
    fn new(instance: &Instance, ceiling: usize) -> PyResult<Self> {
        Ok(FeedOut { inner: feeder_core::FeedOutScenario::new(&instance.inner, ceiling).map_err(err)? })
    }

    fn routes(&self) -> Vec<String> {
        route_labels(&self.inner.routes, self.inner.network())
    }

    fn absolute_max_profit(&self) -> f64 {
        self.inner.absolute_max_profit()
    }

    #[pyo3(signature = (total_supply, form="reduced", via_equivalence=false))]
    fn solve<'py>(&self, py: Python<'py>, total_supply: f64, form: &str, via_equivalence: bool) -> PyResult<Bound<'py, PyDict>> {
        let sc = &self.inner;
        let sol = if via_equivalence {
            sc.solve_via_equivalence(total_supply)
        } else {
            sc.solve(total_supply, parse_form(form)?)
        }
        .map_err(err)?;
        let diag = sc.verify(&sol).map_err(err)?;
        solution_dict(py, &sol, &sc.routes, &sc.prices, sc.network(), Some(&diag))
    }
}

/// Solve an LP-format model. Returns status, objective and named values.
#[pyfunction]
fn solve_lp<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyDict>> {
    let parsed = lp::parse_lp(text).map_err(lp_err)?;
    let sol = lp::solve(&parsed.lp, &Tolerances::default()).map_err(lp_err)?;
    let d = PyDict::new(py);
    d.set_item("status", sol.status.to_string())?;
    let obj = if parsed.minimize { -sol.objective } else { sol.objective };
    d.set_item("objective", obj)?;
    let values = PyDict::new(py);
    if sol.is_optimal() {
        for (name, x) in parsed.lp.var_names.iter().zip(&sol.x) {
            values.set_item(name, x)?;
        }
    }
    d.set_item("values", values)?;
    Ok(d)
}

/// Objective of the exact rational reference model, as a float.
#[pyfunction]
#[pyo3(signature = (instance, kind, total_supply=None))]
fn reference_objective(instance: &Instance, kind: &str, total_supply: Option<f64>) -> PyResult<f64> {
    let kind: ProblemKind = kind.parse().map_err(err)?;
    Ok(oracle::reference_solve(&instance.inner, kind, total_supply).map_err(err)?.objective_f64())
}

#[pymodule]
fn feeder(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Instance>()?;
    m.add_class::<FeedIn>()?;
    m.add_class::<FeedOut>()?;
    m.add_function(wrap_pyfunction!(solve_lp, m)?)?;
    m.add_function(wrap_pyfunction!(reference_objective, m)?)?;
    Ok(())
}
