//! Python bindings: signatures, formulas, minimal reparameterizations,
//! growth, witnesses, monoids and interpretation reduction.
//!
//! Structured results (provenance trees, reports) are returned as plain
//! dicts and lists converted from their JSON form.

use chainrep::growth::{self, WitnessStructure};
use chainrep::interp::{self, ElementMap, InterpretationSpec};
use chainrep::monoid;
use chainrep::oracle::{self, Assignment, RepCandidate};
use chainrep::reparam::{self, NormalForm};
use chainrep::{compiler, Error, Limits};
use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

create_exception!(chainrep, ResourceLimitError, PyRuntimeError, "A configured budget was exhausted.");

fn py_err(e: Error) -> PyErr {
    if e.is_resource_limit() {
        ResourceLimitError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for chainrep::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else if let Ok(big) = n.to_string().parse::<BigUint>() {
                big.into_pyobject(py)?.into_any()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list: Vec<Bound<'py, PyAny>> = items.iter().map(|x| to_py(py, x)).collect::<PyResult<_>>()?;
            PyList::new(py, list)?.into_any()
        }
        Value::Object(map) => {
            let d = PyDict::new(py);
            for (k, x) in map {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn serialized<'py, T: serde::Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(x).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    to_py(py, &v)
}

/// Budgets shared by every operation.
#[pyclass(name = "Limits", module = "chainrep", from_py_object)]
#[derive(Clone)]
struct PyLimits {
    inner: Limits,
}

#[pymethods]
impl PyLimits {
    #[new]
    #[pyo3(signature = (states=None, monoid=None))]
    fn new(states: Option<usize>, monoid: Option<usize>) -> PyResult<Self> {
        let mut inner = Limits::default();
        if let Some(s) = states {
            inner.dfa.max_states = s;
        }
        if let Some(m) = monoid {
            inner.monoid_elements = m;
        }
        if inner.dfa.max_states == 0 || inner.monoid_elements == 0 {
            return Err(PyValueError::new_err("budgets must be positive"));
        }
        Ok(PyLimits { inner })
    }

    #[getter]
    fn states(&self) -> usize {
        self.inner.dfa.max_states
    }

    #[getter]
    fn monoid(&self) -> usize {
        self.inner.monoid_elements
    }

    fn __repr__(&self) -> String {
        format!("Limits(states={}, monoid={})", self.states(), self.monoid())
    }
}

fn limits(l: Option<PyRef<'_, PyLimits>>) -> Limits {
    l.map(|l| l.inner.clone()).unwrap_or_default()
}

/// Predicate names `P1..Pk` or custom.
#[pyclass(name = "Signature", module = "chainrep", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PySignature {
    inner: chainrep::Signature,
}

#[pymethods]
impl PySignature {
    #[new]
    fn new(names: Vec<String>) -> PyResult<Self> {
        Ok(PySignature {
            inner: chainrep::Signature::new(names).py()?,
        })
    }

    #[staticmethod]
    fn standard(k: usize) -> PyResult<Self> {
        Self::new((1..=k).map(|i| format!("P{i}")).collect())
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Signature({:?})", self.inner.names())
    }
}

/// A parsed formula together with the signature it was read against.
#[pyclass(name = "Formula", module = "chainrep", frozen)]
struct PyFormula {
    formula: chainrep::Formula,
    sig: chainrep::Signature,
}

#[pymethods]
impl PyFormula {
    #[new]
    fn new(text: &str, sig: PyRef<'_, PySignature>) -> PyResult<Self> {
        Ok(PyFormula {
            formula: chainrep::Formula::parse(text, &sig.inner).py()?,
            sig: sig.inner.clone(),
        })
    }

    #[getter]
    fn signature(&self) -> PySignature {
        PySignature { inner: self.sig.clone() }
    }

    #[getter]
    fn free_variables(&self) -> Vec<String> {
        self.formula.free_fo()
    }

    #[getter]
    fn quantifier_rank(&self) -> usize {
        self.formula.quantifier_rank()
    }

    /// Truth on `word` (e.g. `"[P1, ., P1+P2]"`) with free variables bound
    /// to 0-based positions.
    #[pyo3(signature = (word, assignment=None))]
    fn evaluate(&self, word: &str, assignment: Option<std::collections::BTreeMap<String, usize>>) -> PyResult<bool> {
        let w = self.sig.parse_word(word).py()?;
        let a = Assignment {
            fo: assignment.unwrap_or_default(),
            ..Assignment::default()
        };
        oracle::evaluate(&self.formula, &w, &a).py()
    }

    /// Satisfying tuples over the free variables, in lexicographic order.
    fn satisfying_tuples(&self, word: &str) -> PyResult<Vec<Vec<usize>>> {
        let w = self.sig.parse_word(word).py()?;
        oracle::satisfying_tuples(&self.formula, &w, None).py()
    }

    /// Whether the compiled automaton accepts `word` with the free
    /// variables placed at `positions`, in variable order.
    fn accepts(&self, word: &str, positions: Vec<usize>) -> PyResult<bool> {
        let w = self.sig.parse_word(word).py()?;
        let vars = self.formula.free_fo();
        if positions.len() != vars.len() || positions.windows(2).any(|p| p[0] >= p[1]) {
            return Err(PyValueError::new_err("positions must be strictly increasing, one per free variable"));
        }
        let dfa = compiler::compile(&self.formula, &vars, &self.sig).py()?;
        let marked = chainrep::MarkedWord::new(w, &positions).py()?;
        dfa.run(&marked).py()
    }

    fn __str__(&self) -> String {
        self.formula.render(&self.sig)
    }

    fn __repr__(&self) -> String {
        format!("Formula({:?})", self.__str__())
    }
}

/// A functional formula `G(domain, image)` with bounded preimages.
#[pyclass(name = "Reparameterization", module = "chainrep", frozen)]
struct PyReparameterization {
    inner: reparam::Reparameterization,
    sig: chainrep::Signature,
}

#[pymethods]
impl PyReparameterization {
    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn bound(&self) -> BigUint {
        self.inner.bound.clone()
    }

    #[getter]
    fn domain(&self) -> Vec<String> {
        self.inner.domain.clone()
    }

    #[getter]
    fn image(&self) -> Vec<String> {
        self.inner.image.clone()
    }

    #[getter]
    fn graph(&self) -> String {
        self.inner.graph.render(&self.sig)
    }

    #[getter]
    fn provenance<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        serialized(py, &self.inner.provenance)
    }

    #[getter]
    fn erratum_notes(&self) -> Vec<String> {
        self.inner.erratum_notes()
    }

    /// Oracle sweep of functionality, same domain, preimage bound and
    /// canonical form on all words up to `max_len`.
    #[pyo3(signature = (max_len=6))]
    fn check<'py>(&self, py: Python<'py>, max_len: usize) -> PyResult<Bound<'py, PyAny>> {
        let r = &self.inner;
        let report = py
            .detach(|| {
                oracle::check_reparameterization(
                    &RepCandidate {
                        source: &r.source,
                        graph: &r.graph,
                        domain: &r.domain,
                        image: &r.image,
                        bound: &r.bound,
                    },
                    &self.sig,
                    max_len,
                )
            })
            .py()?;
        serialized(py, &report)
    }

    fn __repr__(&self) -> String {
        format!(
            "Reparameterization(dimension={}, bound={}, graph={:?})",
            self.dimension(),
            self.inner.bound,
            self.graph()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (formula, limits=None))]
fn minimal_reparameterization(
    py: Python<'_>,
    formula: PyRef<'_, PyFormula>,
    limits: Option<PyRef<'_, PyLimits>>,
) -> PyResult<PyReparameterization> {
    let l = self::limits(limits);
    let (f, sig) = (&formula.formula, &formula.sig);
    let inner = py.detach(|| reparam::minimal_reparameterization(f, sig, &l)).py()?;
    Ok(PyReparameterization { inner, sig: sig.clone() })
}

/// Whether a reparameterization of dimension at most `m` exists.
#[pyfunction]
#[pyo3(signature = (formula, m, limits=None))]
fn decide_dimension(
    py: Python<'_>,
    formula: PyRef<'_, PyFormula>,
    m: usize,
    limits: Option<PyRef<'_, PyLimits>>,
) -> PyResult<bool> {
    let l = self::limits(limits);
    let (f, sig) = (&formula.formula, &formula.sig);
    py.detach(|| reparam::decide_dimension(f, m, sig, &l)).py()
}

/// Largest number of satisfying tuples drawn from `n` positions, over
/// words up to `max_len`.
#[pyfunction]
#[pyo3(signature = (formula, n, max_len=8))]
fn brute_growth(py: Python<'_>, formula: PyRef<'_, PyFormula>, n: usize, max_len: usize) -> PyResult<usize> {
    let (f, sig) = (&formula.formula, &formula.sig);
    py.detach(|| growth::brute_growth(f, sig, n, max_len)).py()
}

/// Degree, preimage bound and sandwich samples for `n` in `1..=max_n`.
#[pyfunction]
#[pyo3(signature = (formula, max_n=4, max_len=8, limits=None))]
fn growth_report<'py>(
    py: Python<'py>,
    formula: PyRef<'_, PyFormula>,
    max_n: usize,
    max_len: usize,
    limits: Option<PyRef<'_, PyLimits>>,
) -> PyResult<Bound<'py, PyAny>> {
    let l = self::limits(limits);
    let (f, sig) = (&formula.formula, &formula.sig);
    let report = py.detach(|| growth::growth_report(f, sig, max_n, max_len, &l)).py()?;
    serialized(py, &report)
}

fn witness_dict<'py>(py: Python<'py>, w: &WitnessStructure, sig: &chainrep::Signature) -> PyResult<Bound<'py, PyAny>> {
    let d = serialized(py, w)?;
    d.set_item("word", sig.render_word(&w.word))?;
    d.set_item("dump", w.dump(sig))?;
    Ok(d)
}

/// Witness structure of the given kind: `"pump"`, `"no_decrement"` or
/// `"growth_lower"`.
#[pyfunction]
#[pyo3(signature = (formula, n, kind="growth_lower", limits=None))]
fn witness<'py>(
    py: Python<'py>,
    formula: PyRef<'_, PyFormula>,
    n: usize,
    kind: &str,
    limits: Option<PyRef<'_, PyLimits>>,
) -> PyResult<Bound<'py, PyAny>> {
    let l = self::limits(limits);
    let (f, sig) = (&formula.formula, &formula.sig);
    let build = match kind {
        "pump" => growth::pump_witness,
        "no_decrement" => growth::no_decrement_witness,
        "growth_lower" => growth::growth_lower_witness,
        other => return Err(PyValueError::new_err(format!("unknown witness kind `{other}`"))),
    };
    let w = py.detach(|| build(f, sig, n, &l)).py()?;
    witness_dict(py, &w, sig)
}

/// Interval (default) or transition monoid of the formula's automaton
/// over its free variables, as a dict with elements and table.
#[pyfunction]
#[pyo3(signature = (formula, kind="interval", limits=None))]
fn type_monoid<'py>(
    py: Python<'py>,
    formula: PyRef<'_, PyFormula>,
    kind: &str,
    limits: Option<PyRef<'_, PyLimits>>,
) -> PyResult<Bound<'py, PyAny>> {
    let l = self::limits(limits);
    let vars = formula.formula.free_fo();
    let dfa = compiler::compile_with(&formula.formula, &vars, &formula.sig, &l.dfa).py()?;
    let m = match kind {
        "interval" => monoid::interval_monoid_with(&dfa, l.monoid_elements),
        "transition" => monoid::transition_monoid_with(&dfa, l.monoid_elements),
        other => return Err(PyValueError::new_err(format!("unknown monoid kind `{other}`"))),
    }
    .py()?;
    let out = PyDict::new(py);
    out.set_item("size", m.size())?;
    out.set_item("identity", m.identity().0)?;
    let mut elements = Vec::new();
    let mut table = Vec::new();
    for e in m.elements() {
        let d = PyDict::new(py);
        d.set_item("witness", m.render_witness(e).py()?)?;
        d.set_item("idempotent", m.is_idempotent(e).py()?)?;
        d.set_item("nonempty", m.nonempty_realizable(e).py()?)?;
        elements.push(d);
        let row: Vec<usize> = m
            .elements()
            .map(|b| m.multiply(e, b).map(|c| c.0))
            .collect::<chainrep::Result<_>>()
            .py()?;
        table.push(row);
    }
    out.set_item("elements", elements)?;
    out.set_item("table", table)?;
    Ok(out.into_any())
}

/// Normal-form summary for ascending placements of the free variables.
#[pyfunction]
#[pyo3(signature = (formula, max_disjuncts=1000, limits=None))]
fn normal_form<'py>(
    py: Python<'py>,
    formula: PyRef<'_, PyFormula>,
    max_disjuncts: usize,
    limits: Option<PyRef<'_, PyLimits>>,
) -> PyResult<Bound<'py, PyAny>> {
    let l = self::limits(limits);
    let vars = formula.formula.free_fo();
    let nf = NormalForm::new(&formula.formula, &vars, &formula.sig, &l).py()?;
    let out = PyDict::new(py);
    out.set_item("count", nf.count())?;
    let listed: Vec<Vec<usize>> = nf
        .disjuncts(max_disjuncts)
        .py()?
        .iter()
        .map(|d| d.types.iter().map(|t| t.0).collect())
        .collect();
    out.set_item("disjuncts", listed)?;
    out.set_item("universally_eliminable", nf.universally_eliminable())?;
    out.set_item("first_blocking_indices", nf.first_blocking_indices())?;
    Ok(out.into_any())
}

/// Ramsey bound for `colors` colors.
#[pyfunction]
fn ramsey_bound(colors: u64) -> PyResult<BigUint> {
    monoid::ramsey_bound_big(colors).py()
}

/// Parses an interpretation spec, reduces it to dimension `dim` and
/// checks equivalence on all words up to `max_len`.
#[pyfunction]
#[pyo3(signature = (spec, dim, max_len=6, sig=None, limits=None))]
fn reduce_interpretation<'py>(
    py: Python<'py>,
    spec: &str,
    dim: usize,
    max_len: usize,
    sig: Option<PyRef<'_, PySignature>>,
    limits: Option<PyRef<'_, PyLimits>>,
) -> PyResult<Bound<'py, PyAny>> {
    let l = self::limits(limits);
    let sig = sig.map(|s| s.inner.clone()).unwrap_or_else(|| chainrep::Signature::standard(0));
    let spec = InterpretationSpec::parse(spec, &sig).py()?;
    let (reduction, report) = py
        .detach(|| -> chainrep::Result<_> {
            let r = interp::reduce_interpretation(&spec, dim, &l)?;
            let eq = interp::check_equivalence(&spec, &r.spec, ElementMap::Reduction(&r), max_len)?;
            Ok((r, eq))
        })
        .py()?;
    let out = PyDict::new(py);
    out.set_item("reduced_spec", reduction.spec.to_text())?;
    out.set_item("dimension", reduction.spec.dimension())?;
    out.set_item("components", serialized(py, &reduction.components)?)?;
    out.set_item("equivalence", serialized(py, &report)?)?;
    Ok(out.into_any())
}

#[pymodule]
#[pyo3(name = "chainrep")]
fn chainrep_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("ResourceLimitError", m.py().get_type::<ResourceLimitError>())?;
    m.add_class::<PyLimits>()?;
    m.add_class::<PySignature>()?;
    m.add_class::<PyFormula>()?;
    m.add_class::<PyReparameterization>()?;
    m.add_function(wrap_pyfunction!(minimal_reparameterization, m)?)?;
    m.add_function(wrap_pyfunction!(decide_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(brute_growth, m)?)?;
    m.add_function(wrap_pyfunction!(growth_report, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(type_monoid, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(ramsey_bound, m)?)?;
    m.add_function(wrap_pyfunction!(reduce_interpretation, m)?)?;
    Ok(())
}
