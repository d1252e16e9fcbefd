//! Python bindings. Labels are Python `int` or `str`.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use cyclord::cop::cop_check as core_cop_check;
use cyclord::ellis::{qi_sign as core_qi_sign, sturmian_compose, sturmian_etriple, QuadIrr, Sign, SturmianElt};
use cyclord::groups::{finite_lcord_decide, GroupTable, LcordDecision};
use cyclord::inverse_limit::{build_cycle_cover, build_tower};
use cyclord::io::{parse_document, Lbl, Resolver};
use cyclord::lex::{lex_circ_lin, FiberedLift};
use cyclord::orders::{circularize as core_circularize, cut_order, interval, is_convex, AxiomVerdict, IntervalKind};
use cyclord::{Bounds, CircOrder, LinOrder, TernaryRelation};

fn err(e: cyclord::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn lbl(obj: &Bound<'_, PyAny>) -> PyResult<Lbl> {
    if let Ok(n) = obj.extract::<i64>() {
        return Ok(Lbl::Int(n));
    }
    if let Ok(s) = obj.extract::<String>() {
        return Ok(Lbl::Str(s));
    }
    Err(PyValueError::new_err("labels must be int or str"))
}

fn lbls(seq: &Bound<'_, PyAny>) -> PyResult<Vec<Lbl>> {
    seq.try_iter()?.map(|x| lbl(&x?)).collect()
}

fn py_lbl(py: Python<'_>, l: &Lbl) -> PyResult<Py<PyAny>> {
    Ok(match l {
        Lbl::Int(n) => n.into_pyobject(py)?.into_any().unbind(),
        Lbl::Str(s) => s.into_pyobject(py)?.into_any().unbind(),
    })
}

fn py_lbls<'a>(py: Python<'_>, it: impl IntoIterator<Item = &'a Lbl>) -> PyResult<Vec<Py<PyAny>>> {
    it.into_iter().map(|l| py_lbl(py, l)).collect()
}

fn text_labels(c: &CircOrder<impl std::fmt::Display + Ord + Clone + std::fmt::Debug>) -> PyResult<CircOrder<Lbl>> {
    CircOrder::from_cycle(c.labels().iter().map(|x| Lbl::Str(x.to_string())).collect()).map_err(err)
}

/// A finite circular order in canonical form.
#[pyclass(name = "CircOrder", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyCircOrder {
    inner: CircOrder<Lbl>,
}

#[pymethods]
impl PyCircOrder {
    #[new]
    fn new(cycle: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyCircOrder {
            inner: CircOrder::from_cycle(lbls(cycle)?).map_err(err)?,
        })
    }

    fn labels(&self, py: Python<'_>) -> PyResult<Vec<Py<PyAny>>> {
        py_lbls(py, self.inner.labels())
    }

    fn holds(&self, a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>, c: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.inner.holds(&lbl(a)?, &lbl(b)?, &lbl(c)?))
    }

    /// The linear order obtained by cutting at `z`.
    fn cut(&self, py: Python<'_>, z: &Bound<'_, PyAny>) -> PyResult<Vec<Py<PyAny>>> {
        let l = cut_order(&self.inner, &lbl(z)?).map_err(err)?;
        py_lbls(py, l.labels())
    }

    /// `kind` is one of "open", "closed", "left_closed", "right_closed".
    #[pyo3(signature = (a, b, kind = "open"))]
    fn interval(
        &self,
        py: Python<'_>,
        a: &Bound<'_, PyAny>,
        b: &Bound<'_, PyAny>,
        kind: &str,
    ) -> PyResult<Vec<Py<PyAny>>> {
        let kind = match kind {
            "open" => IntervalKind::Open,
            "closed" => IntervalKind::Closed,
            "left_closed" => IntervalKind::LeftClosed,
            "right_closed" => IntervalKind::RightClosed,
            other => return Err(PyValueError::new_err(format!("unknown interval kind {other}"))),
        };
        let set = interval(&self.inner, &lbl(a)?, &lbl(b)?, kind).map_err(err)?;
        py_lbls(py, &set)
    }

    fn is_convex(&self, subset: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(is_convex(&self.inner, &lbls(subset)?.into_iter().collect()))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("CircOrder({:?})", self.inner.labels())
    }
}

/// Checks the circular-order axioms. Returns a dict with `valid` and either
/// `canonical` or `axiom` and `witness`.
#[pyfunction]
fn verify_axioms<'py>(
    py: Python<'py>,
    points: &Bound<'py, PyAny>,
    triples: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut ts = Vec::new();
    for t in triples.try_iter()? {
        let v = lbls(&t?)?;
        let [a, b, c]: [Lbl; 3] = v.try_into().map_err(|_| PyValueError::new_err("triples have three entries"))?;
        ts.push((a, b, c));
    }
    let rel = TernaryRelation::new(lbls(points)?, ts).map_err(err)?;
    let out = PyDict::new(py);
    match cyclord::orders::verify_circular_axioms_bounded(&rel, &Bounds::from_env()).map_err(err)? {
        AxiomVerdict::Valid(c) => {
            out.set_item("valid", true)?;
            out.set_item("canonical", py_lbls(py, c.labels())?)?;
        }
        AxiomVerdict::Violation(v) => {
            out.set_item("valid", false)?;
            out.set_item("axiom", format!("{:?}", v.axiom))?;
            out.set_item("witness", py_lbls(py, &v.witness)?)?;
        }
    }
    Ok(out)
}

#[pyfunction]
fn circularize(order: &Bound<'_, PyAny>) -> PyResult<PyCircOrder> {
    let l = LinOrder::new(lbls(order)?).map_err(err)?;
    Ok(PyCircOrder {
        inner: core_circularize(&l),
    })
}

/// COP check of a map given as a dict; returns `(is_cop, witness)`.
#[pyfunction]
fn cop_check(
    domain: &PyCircOrder,
    codomain: &PyCircOrder,
    table: &Bound<'_, PyDict>,
) -> PyResult<(bool, Option<String>)> {
    let mut f = BTreeMap::new();
    for (k, v) in table.iter() {
        f.insert(lbl(&k)?, lbl(&v)?);
    }
    let v = core_cop_check(&f, &domain.inner, &codomain.inner).map_err(err)?;
    Ok((v.is_cop(), (!v.is_cop()).then(|| format!("{v:?}"))))
}

/// Lexicographic product with a linear order; labels render as "(a,x)".
#[pyfunction]
fn lex_product(circ: &PyCircOrder, lin: &Bound<'_, PyAny>) -> PyResult<PyCircOrder> {
    let l = LinOrder::new(lbls(lin)?).map_err(err)?;
    let prod = lex_circ_lin(&circ.inner, &l).map_err(err)?;
    let labels = prod.labels().iter().map(|(a, x)| Lbl::Str(format!("({a},{x})"))).collect();
    Ok(PyCircOrder {
        inner: CircOrder::from_cycle(labels).map_err(err)?,
    })
}

/// Fibered lift over `base`; `fibers` maps base points to ordered lists.
#[pyfunction]
fn lift(base: &PyCircOrder, fibers: &Bound<'_, PyDict>) -> PyResult<PyCircOrder> {
    let mut fs = BTreeMap::new();
    for (k, v) in fibers.iter() {
        fs.insert(lbl(&k)?, LinOrder::new(lbls(&v)?).map_err(err)?);
    }
    let l = FiberedLift::from_fibers(base.inner.clone(), fs).map_err(err)?;
    Ok(PyCircOrder {
        inner: l.to_circ_order().map_err(err)?,
    })
}

/// Decides left circular orderability of a finite group table.
#[pyfunction]
fn lcord_decide<'py>(
    py: Python<'py>,
    elements: &Bound<'py, PyAny>,
    table: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyDict>> {
    let rows: Vec<Vec<Lbl>> = table.try_iter()?.map(|r| lbls(&r?)).collect::<PyResult<_>>()?;
    let g = GroupTable::new(lbls(elements)?, rows).map_err(err)?;
    let out = PyDict::new(py);
    match finite_lcord_decide(&g).map_err(err)? {
        LcordDecision::Cyclic { generator, certificate } => {
            out.set_item("cyclic", true)?;
            out.set_item("generator", py_lbl(py, &generator)?)?;
            out.set_item("certificate", py_lbls(py, certificate.labels())?)?;
        }
        LcordDecision::NotCyclic { element_orders } => {
            out.set_item("cyclic", false)?;
            let orders = PyList::empty(py);
            for (x, k) in &element_orders {
                orders.append((py_lbl(py, x)?, *k))?;
            }
            out.set_item("element_orders", orders)?;
        }
    }
    Ok(out)
}

/// Cycle cover of `host` by `cycle`: blocks, their members and the
/// quotient order on rendered block names.
#[pyfunction]
fn cycle_cover<'py>(py: Python<'py>, host: &PyCircOrder, cycle: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
    let c = build_cycle_cover(&host.inner, &lbls(cycle)?).map_err(err)?;
    let name = |b: &cyclord::inverse_limit::Block<Lbl>| cyclord::cli::block_label(b).to_string();
    let out = PyDict::new(py);
    out.set_item("blocks", c.blocks().iter().map(name).collect::<Vec<_>>())?;
    let members: Vec<Vec<Py<PyAny>>> = c
        .blocks()
        .iter()
        .map(|b| py_lbls(py, c.members(b).unwrap_or(&[])))
        .collect::<PyResult<_>>()?;
    out.set_item("members", members)?;
    let q = CircOrder::from_cycle(c.quotient().labels().iter().map(name).collect::<Vec<_>>()).map_err(err)?;
    out.set_item("quotient", PyCircOrder { inner: text_labels(&q)? })?;
    Ok(out)
}

/// Graphviz rendering of the join-closed tower generated by `cycles`.
#[pyfunction]
#[pyo3(signature = (host, cycles, budget = 64))]
fn tower_dot(host: &PyCircOrder, cycles: &Bound<'_, PyAny>, budget: usize) -> PyResult<String> {
    let cs: Vec<Vec<Lbl>> = cycles.try_iter()?.map(|c| lbls(&c?)).collect::<PyResult<_>>()?;
    let t = build_tower(&host.inner, &cs, budget).map_err(err)?;
    t.verify().map_err(err)?;
    Ok(t.to_dot())
}

/// Exact sign of `p + qα` for rationals `p = pn/pd`, `q = qn/qd`.
#[pyfunction]
#[pyo3(signature = (pn, qn, pd = 1, qd = 1))]
fn qi_sign(pn: i64, qn: i64, pd: i64, qd: i64) -> PyResult<i8> {
    if pd == 0 || qd == 0 {
        return Err(PyValueError::new_err("zero denominator"));
    }
    Ok(core_qi_sign(&QuadIrr::from_fracs(pn, pd, qn, qd)))
}

/// An element of the Sturmian enveloping semigroup.
#[pyclass(name = "Sturmian", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PySturmian {
    inner: SturmianElt,
}

#[pymethods]
impl PySturmian {
    #[staticmethod]
    fn sigma(n: i64) -> Self {
        PySturmian {
            inner: SturmianElt::Sigma(n),
        }
    }

    /// `P(γ, sign)` with `γ = pn/pd + (qn/qd)α`.
    #[staticmethod]
    #[pyo3(signature = (pn, qn, plus, pd = 1, qd = 1))]
    fn p(pn: i64, qn: i64, plus: bool, pd: i64, qd: i64) -> PyResult<Self> {
        if pd == 0 || qd == 0 {
            return Err(PyValueError::new_err("zero denominator"));
        }
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        Ok(PySturmian {
            inner: SturmianElt::p(QuadIrr::from_fracs(pn, pd, qn, qd), sign),
        })
    }

    /// `self ∘ other`.
    fn compose(&self, other: &PySturmian) -> Self {
        PySturmian {
            inner: sturmian_compose(&self.inner, &other.inner),
        }
    }

    fn is_ideal(&self) -> bool {
        self.inner.is_ideal()
    }

    fn __repr__(&self) -> String {
        self.inner.to_string()
    }
}

/// Circular order of three distinct Sturmian elements.
#[pyfunction]
fn sturmian_triple(u: &PySturmian, v: &PySturmian, w: &PySturmian) -> PyResult<bool> {
    sturmian_etriple(&u.inner, &v.inner, &w.inner).map_err(err)
}

/// Verifies a JSON document; references resolve against `base_dir`.
/// Returns `(ok, report_json)`.
#[pyfunction]
#[pyo3(signature = (text, base_dir = "."))]
fn verify_json(text: &str, base_dir: &str) -> PyResult<(bool, String)> {
    let doc = parse_document(text).map_err(err)?;
    let r = cyclord::cli::verify_document(&doc, &Resolver::new(base_dir), &Bounds::from_env()).map_err(err)?;
    Ok((r.ok, r.to_json()))
}

/// Runs a self-test suite; returns `(ok, report_json)`.
#[pyfunction]
#[pyo3(signature = (suite = "all", seed = 42))]
fn selftest(py: Python<'_>, suite: &str, seed: u64) -> PyResult<(bool, String)> {
    let r = py
        .detach(|| cyclord::selftest::run(suite, seed, &Bounds::from_env()))
        .map_err(err)?;
    Ok((r.ok, r.to_json()))
}

#[pymodule]
fn cyclord_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCircOrder>()?;
    m.add_class::<PySturmian>()?;
    m.add_function(wrap_pyfunction!(verify_axioms, m)?)?;
    m.add_function(wrap_pyfunction!(circularize, m)?)?;
    m.add_function(wrap_pyfunction!(cop_check, m)?)?;
    m.add_function(wrap_pyfunction!(lex_product, m)?)?;
    m.add_function(wrap_pyfunction!(lift, m)?)?;
    m.add_function(wrap_pyfunction!(lcord_decide, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_cover, m)?)?;
    m.add_function(wrap_pyfunction!(tower_dot, m)?)?;
    m.add_function(wrap_pyfunction!(qi_sign, m)?)?;
    m.add_function(wrap_pyfunction!(sturmian_triple, m)?)?;
    m.add_function(wrap_pyfunction!(verify_json, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
