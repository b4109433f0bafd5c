//! Python extension module exposing the main types and operations: signed
//! graphs, exact flow counts, polytope volumes by all three routes, and the
//! constant-term identities.  Counts come back as Python ints and rationals
//! as `fractions.Fraction`.

use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cryvol_core::ct;
use cryvol_core::dynflow;
use cryvol_core::exact::{self, MorrisParams, Rational};
use cryvol_core::graphs::{self, LoopRange, SignedGraph};
use cryvol_core::kostant;
use cryvol_core::reduce;

fn value_error(e: cryvol_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction(py: Python<'_>, q: &Rational) -> PyResult<Py<PyAny>> {
    let ctor = py.import("fractions")?.getattr("Fraction")?;
    Ok(ctor.call1((q.numer().clone(), q.denom().clone()))?.unbind())
}

/// A signed multigraph with loops, edges in canonical order.
#[pyclass(frozen, name = "Graph")]
struct PyGraph {
    inner: SignedGraph,
}

#[pymethods]
impl PyGraph {
    /// Complete graph on `m` vertices with all edges negative.
    #[staticmethod]
    fn complete(m: usize) -> PyResult<Self> {
        Ok(PyGraph {
            inner: graphs::complete_type_a(m).map_err(value_error)?,
        })
    }

    /// Complete signed graph on `m` vertices: negative and positive edges,
    /// no loops.
    #[staticmethod]
    fn complete_signed(m: usize) -> PyResult<Self> {
        Ok(PyGraph {
            inner: graphs::complete_type_d(m).map_err(value_error)?,
        })
    }

    /// Complete signed graph with loops; `all_vertices=False` drops the loop
    /// at the last vertex.
    #[staticmethod]
    #[pyo3(signature = (m, all_vertices = true))]
    fn complete_signed_with_loops(m: usize, all_vertices: bool) -> PyResult<Self> {
        let range = if all_vertices {
            LoopRange::AllVertices
        } else {
            LoopRange::FirstN
        };
        Ok(PyGraph {
            inner: graphs::complete_type_c(m, range).map_err(value_error)?,
        })
    }

    /// Family graph determined by the vector `(0, a_2, ..., a_{n+1})` with
    /// `0 <= a_v <= v - 2`.
    #[staticmethod]
    fn family(a: Vec<i64>) -> PyResult<Self> {
        Ok(PyGraph {
            inner: graphs::family_graph(&a).map_err(value_error)?,
        })
    }

    /// The five-edge demonstration graph (`fig1` on the command line).
    #[staticmethod]
    fn fig1() -> Self {
        PyGraph {
            inner: graphs::demo_mixed_graph(),
        }
    }

    /// The dynamic-flow demonstration graph (`fig2` on the command line).
    #[staticmethod]
    fn fig2() -> Self {
        PyGraph {
            inner: graphs::demo_dynamic_graph(),
        }
    }

    /// The loop graph whose volume and dynamic count disagree.
    #[staticmethod]
    fn loop_counterexample() -> Self {
        PyGraph {
            inner: graphs::loop_counterexample_graph(),
        }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: SignedGraph::from_json_str(text).map_err(value_error)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    /// Edges as `(lo, hi, sign, tag)` tuples in canonical order.
    fn edges(&self) -> Vec<(usize, usize, String, usize)> {
        self.inner
            .edges()
            .iter()
            .map(|e| (e.lo, e.hi, e.sign.symbol().to_string(), e.tag))
            .collect()
    }

    fn indegree(&self, v: usize) -> usize {
        self.inner.indegree(v)
    }

    /// Incidence matrix columns (one type C root per edge).
    fn incidence_matrix(&self) -> Vec<Vec<i64>> {
        self.inner.incidence_matrix()
    }

    fn __repr__(&self) -> String {
        format!("Graph({})", self.inner)
    }
}

fn check_len(g: &PyGraph, a: &[i64]) -> PyResult<()> {
    if a.len() != g.inner.vertex_count() {
        Err(PyValueError::new_err(format!(
            "netflow length {} does not match vertex count {}",
            a.len(),
            g.inner.vertex_count()
        )))
    } else {
        Ok(())
    }
}

/// Number of integer flows with the given netflow.
#[pyfunction]
fn kpf(g: &PyGraph, netflow: Vec<i64>) -> PyResult<BigUint> {
    check_len(g, &netflow)?;
    Ok(kostant::kpf(&g.inner, &netflow))
}

/// All integer flows, as vectors over the canonical edge order.
#[pyfunction]
fn enumerate_flows(g: &PyGraph, netflow: Vec<i64>) -> PyResult<Vec<Vec<u64>>> {
    check_len(g, &netflow)?;
    Ok(kostant::enumerate_flows(&g.inner, &netflow)
        .into_iter()
        .map(|f| f.0)
        .collect())
}

/// Dimension of the flow polytope; raises on an empty polytope.
#[pyfunction]
fn polytope_dimension(g: &PyGraph, netflow: Vec<i64>) -> PyResult<usize> {
    kostant::polytope_dimension(&g.inner, &netflow).map_err(value_error)
}

/// Dimension of the flow solution space (edge count minus incidence rank).
#[pyfunction]
fn generic_dimension(g: &PyGraph) -> usize {
    kostant::generic_dimension(&g.inner)
}

/// Lattice-point counts of the dilations `t * netflow` for `t = 0..=t_max`.
#[pyfunction]
fn ehrhart_values(g: &PyGraph, netflow: Vec<i64>, t_max: u64) -> PyResult<Vec<(u64, BigUint)>> {
    Ok(kostant::ehrhart_values(&g.inner, &netflow, t_max)
        .map_err(value_error)?
        .0)
}

/// Normalized volume by Ehrhart interpolation.
#[pyfunction]
fn normalized_volume_ehrhart(g: &PyGraph, netflow: Vec<i64>) -> PyResult<BigUint> {
    kostant::normalized_volume_ehrhart(&g.inner, &netflow).map_err(value_error)
}

/// Normalized volume at `(2, 0, ..., 0)` by recursive reduction.
#[pyfunction]
fn volume_via_reduction(g: &PyGraph, netflow: Vec<i64>) -> PyResult<BigUint> {
    reduce::volume_via_reduction(&g.inner, &netflow).map_err(value_error)
}

/// Number of integer dynamic flows.
#[pyfunction]
fn kdyn(g: &PyGraph, netflow: Vec<i64>) -> PyResult<BigUint> {
    check_len(g, &netflow)?;
    Ok(dynflow::kdyn(&g.inner, &netflow))
}

/// The same count as a generating-series coefficient.
#[pyfunction]
fn kdyn_via_series(g: &PyGraph, netflow: Vec<i64>) -> PyResult<BigUint> {
    check_len(g, &netflow)?;
    Ok(dynflow::kdyn_via_series(&g.inner, &netflow))
}

/// Normalized volume at `(2, 0, ..., 0)` as a dynamic count; loopless
/// connected full-dimensional graphs only.
#[pyfunction]
fn volume_via_dynamic_kpf(g: &PyGraph) -> PyResult<BigUint> {
    dynflow::volume_via_dynamic_kpf(&g.inner).map_err(value_error)
}

/// Checks the family correspondence on fully enumerated domains and returns
/// `(family side total, complete side total)`.
#[pyfunction]
fn bijection_totals(m: usize) -> PyResult<(BigUint, BigUint)> {
    dynflow::bijection_totals(m).map_err(value_error)
}

#[pyfunction]
fn catalan(k: u64) -> BigInt {
    exact::catalan(k)
}

/// `vol(CRY_n) = Cat(1) ... Cat(n-2)`.
#[pyfunction]
fn cry_volume_formula(n: u64) -> PyResult<BigInt> {
    exact::cry_volume_formula(n).map_err(value_error)
}

/// `vol(CRYD_{n+1}) = 2^{(n-1)^2} Cat(0) ... Cat(n-1)`.
#[pyfunction]
fn cryd_volume_formula(n: u64) -> PyResult<BigInt> {
    exact::cryd_volume_formula(n).map_err(value_error)
}

/// `vol(CRYC_{n+1}) = 2^{n(n-1)} Cat(0) ... Cat(n-1)`.
#[pyfunction]
fn cryc_volume_formula(n: u64) -> PyResult<BigInt> {
    exact::cryc_volume_formula(n).map_err(value_error)
}

/// Gamma-product side of the Morris identity, `c` passed as `two_c = 2c`.
#[pyfunction]
fn morris_rhs(py: Python<'_>, n: usize, a: i64, b: i64, two_c: i64) -> PyResult<Py<PyAny>> {
    let p = MorrisParams::new(n, a, b, two_c).map_err(value_error)?;
    fraction(py, &exact::morris_rhs(&p).map_err(value_error)?)
}

/// Gamma-product side of the type C Morris identity.
#[pyfunction]
fn morris_c_rhs(py: Python<'_>, n: usize, a: i64, b: i64, two_c: i64) -> PyResult<Py<PyAny>> {
    let p = MorrisParams::new(n, a, b, two_c).map_err(value_error)?;
    fraction(py, &exact::morris_c_rhs(&p).map_err(value_error)?)
}

/// Evaluates a constant-term expression like
/// `CT[x2,x1] x1^-1 * (1 - x1)^-2 * (x2 - x1)^-1` exactly.
#[pyfunction]
fn ct_eval(py: Python<'_>, expr: &str) -> PyResult<Py<PyAny>> {
    let parsed = ct::parse_ct_expression(expr).map_err(value_error)?;
    fraction(py, &ct::iterated_ct(&parsed).map_err(value_error)?)
}

/// Checks one named identity; returns `(lhs, rhs, equal)`.
#[pyfunction]
#[pyo3(signature = (name, n, a = None, b = None, two_c = None))]
fn verify_identity(
    py: Python<'_>,
    name: &str,
    n: usize,
    a: Option<i64>,
    b: Option<i64>,
    two_c: Option<i64>,
) -> PyResult<(Py<PyAny>, Py<PyAny>, bool)> {
    let identity = match name {
        "cry" => ct::Identity::Cry { n },
        "cryd" => ct::Identity::Cryd { n },
        "cryc" => ct::Identity::Cryc { n },
        "morris" | "thmC" => {
            let p = MorrisParams::new(
                n,
                a.unwrap_or(2),
                b.unwrap_or(0),
                two_c.unwrap_or(1),
            )
            .map_err(value_error)?;
            if name == "morris" {
                ct::Identity::Morris(p)
            } else {
                ct::Identity::MorrisC(p)
            }
        }
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown identity {other:?}: expected cry, cryd, cryc, morris, or thmC"
            )))
        }
    };
    let report = ct::verify_identity(&identity).map_err(value_error)?;
    Ok((
        fraction(py, &report.lhs)?,
        fraction(py, &report.rhs)?,
        report.equal,
    ))
}

#[pymodule]
fn cryvol(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(kpf, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_flows, m)?)?;
    m.add_function(wrap_pyfunction!(polytope_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(generic_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(ehrhart_values, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_volume_ehrhart, m)?)?;
    m.add_function(wrap_pyfunction!(volume_via_reduction, m)?)?;
    m.add_function(wrap_pyfunction!(kdyn, m)?)?;
    m.add_function(wrap_pyfunction!(kdyn_via_series, m)?)?;
    m.add_function(wrap_pyfunction!(volume_via_dynamic_kpf, m)?)?;
    m.add_function(wrap_pyfunction!(bijection_totals, m)?)?;
    m.add_function(wrap_pyfunction!(catalan, m)?)?;
    m.add_function(wrap_pyfunction!(cry_volume_formula, m)?)?;
    m.add_function(wrap_pyfunction!(cryd_volume_formula, m)?)?;
    m.add_function(wrap_pyfunction!(cryc_volume_formula, m)?)?;
    m.add_function(wrap_pyfunction!(morris_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(morris_c_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(ct_eval, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    Ok(())
}
