//! Python bindings: spaces, elements, the operations on them, and the screening and
//! certification reports (returned as plain dicts).

use std::sync::Arc;

use dlhom::bounds;
use dlhom::certify;
use dlhom::hopf;
use dlhom::seq::{lower_to_upper, upper_to_lower};
use dlhom::{BaseSteenrodAction, Cell, CellComplex, Element, LowerSeq, Space, UpperSeq};
use pyo3::create_exception;
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;

create_exception!(dlhom_py, DlhomError, PyValueError);

fn err(e: dlhom::Error) -> PyErr {
    DlhomError::new_err(e.to_string())
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Space", frozen)]
struct PySpace {
    inner: Arc<Space>,
}

#[pymethods]
impl PySpace {
    #[staticmethod]
    fn qs0() -> Self {
        PySpace { inner: Space::qs0() }
    }

    #[staticmethod]
    fn qsn(n: u32) -> PyResult<Self> {
        Ok(PySpace { inner: Space::qsn(n).map_err(err)? })
    }

    /// Double suspension of a complex given as `[(name, dim)]` and `[(r, from, [to])]`.
    #[staticmethod]
    #[pyo3(signature = (cells, sq_action = Vec::new()))]
    fn sigma2(cells: Vec<(String, u32)>, sq_action: Vec<(u32, String, Vec<String>)>) -> PyResult<Self> {
        let cells: Vec<Cell> = cells.into_iter().map(|(name, dim)| Cell { name, dim }).collect();
        let index = |n: &str| {
            cells
                .iter()
                .position(|c| c.name == n)
                .ok_or_else(|| DlhomError::new_err(format!("unknown cell {n}")))
        };
        let mut action = BaseSteenrodAction::default();
        for (r, from, to) in &sq_action {
            let to = to.iter().map(|t| index(t)).collect::<PyResult<Vec<_>>>()?;
            action.set(*r, index(from)?, to);
        }
        let complex = CellComplex::new(cells.clone(), action).map_err(err)?;
        Ok(PySpace { inner: Space::sigma2(complex) })
    }

    #[getter]
    fn id(&self) -> String {
        self.inner.id()
    }

    fn successor(&self) -> PyResult<Self> {
        Ok(PySpace { inner: self.inner.successor().map_err(err)? })
    }

    /// Basis monomials of the reduced homology in `degree`.
    #[pyo3(signature = (degree, charge = None))]
    fn basis(&self, degree: u32, charge: Option<i64>) -> Vec<PyElement> {
        dlhom::basis_enumerate(&self.inner, degree, charge)
            .into_iter()
            .map(|m| PyElement { inner: Element::from_monomial(&self.inner, m) })
            .collect()
    }

    /// `Q^I` applied to base class `base` (upper indices).
    #[pyo3(signature = (seq, base = 0))]
    fn generator(&self, seq: Vec<u32>, base: u32) -> PyResult<PyElement> {
        let e = Element::generator(&self.inner, base, UpperSeq::from(seq)).map_err(err)?;
        Ok(PyElement { inner: e })
    }

    /// `Q^I[1] * [-2^l(I)]` in the charge-graded model.
    fn normalized_generator(&self, seq: Vec<u32>) -> PyResult<PyElement> {
        let e = Element::normalized_generator(&self.inner, UpperSeq::from(seq)).map_err(err)?;
        Ok(PyElement { inner: e })
    }

    fn one(&self) -> PyElement {
        PyElement { inner: Element::one(&self.inner) }
    }

    fn primitives(&self, degree: u32) -> Vec<PyElement> {
        hopf::primitive_space(&self.inner, degree)
            .into_iter()
            .map(|e| PyElement { inner: e })
            .collect()
    }

    fn suspension_kernel(&self, degree: u32) -> PyResult<Vec<PyElement>> {
        Ok(dlhom::suspension_kernel_basis(&self.inner, degree)
            .map_err(err)?
            .into_iter()
            .map(|e| PyElement { inner: e })
            .collect())
    }

    /// Spherical-class screening report as a dict.
    #[pyo3(signature = (degree, loop_filtration = None))]
    fn screen<'py>(&self, py: Python<'py>, degree: u32, loop_filtration: Option<u32>) -> PyResult<Bound<'py, PyAny>> {
        let r = dlhom::spherical_candidates(&self.inner, degree, loop_filtration).map_err(err)?;
        to_py(py, &r)
    }

    fn __repr__(&self) -> String {
        format!("Space({})", self.inner.id())
    }
}

#[pyclass(name = "Element", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyElement {
    inner: Element,
}

impl PyElement {
    fn wrap(r: dlhom::Result<Element>) -> PyResult<Self> {
        r.map(|inner| PyElement { inner }).map_err(err)
    }
}

#[pymethods]
impl PyElement {
    fn __add__(&self, other: &PyElement) -> PyResult<Self> {
        Self::wrap(self.inner.add(&other.inner))
    }

    fn __mul__(&self, other: &PyElement) -> PyResult<Self> {
        Self::wrap(self.inner.multiply(&other.inner))
    }

    fn __bool__(&self) -> bool {
        !self.inner.is_zero()
    }

    fn __str__(&self) -> String {
        self.inner.render()
    }

    fn __repr__(&self) -> String {
        format!("Element({})", self.inner.render())
    }

    fn square(&self) -> Self {
        PyElement { inner: self.inner.square() }
    }

    fn sqrt(&self) -> PyResult<Self> {
        Self::wrap(self.inner.sqrt_of_square())
    }

    fn translate(&self, k: i64) -> Self {
        PyElement { inner: self.inner.translate(k) }
    }

    #[getter]
    fn dim(&self) -> PyResult<Option<u32>> {
        self.inner.dim().map_err(err)
    }

    #[getter]
    fn charge(&self) -> PyResult<Option<i64>> {
        self.inner.charge().map_err(err)
    }

    #[getter]
    fn terms(&self) -> Vec<String> {
        let s = self.inner.space();
        self.inner.terms().iter().map(|m| m.render(s)).collect()
    }

    /// Upper Dyer-Lashof operation `Q^a`.
    fn q(&self, a: u32) -> Self {
        PyElement { inner: dlhom::apply_q(a, &self.inner) }
    }

    /// Dual Steenrod operation `Sq^r_*`.
    fn sq(&self, r: u32) -> Self {
        PyElement { inner: dlhom::sq_lower(r, &self.inner) }
    }

    /// Coproduct as a list of `(left, right)` rendered pairs.
    fn coproduct(&self) -> Vec<(String, String)> {
        let s = self.inner.space();
        hopf::coproduct(&self.inner)
            .terms()
            .iter()
            .map(|(a, b)| (a.render(s), b.render(s)))
            .collect()
    }

    fn is_primitive(&self) -> PyResult<bool> {
        hopf::is_primitive(&self.inner).map_err(err)
    }

    fn is_annihilated(&self) -> bool {
        dlhom::is_A_annihilated(&self.inner)
    }

    fn suspend(&self) -> PyResult<Self> {
        Self::wrap(dlhom::suspend(&self.inner))
    }

    fn in_loop_filtration(&self, l: u32) -> bool {
        dlhom::loop_filtration_member(&self.inner, l)
    }
}

/// Admissible expansion of `Q^r Q^s` for `r > 2s`, as `(a, b)` pairs.
#[pyfunction]
fn adem(r: u32, s: u32) -> PyResult<Vec<(u32, u32)>> {
    dlhom::adem_normalize(r, s).map_err(err)
}

#[pyfunction]
fn to_upper(lower: Vec<u32>, base_dim: i64) -> Vec<u32> {
    lower_to_upper(&LowerSeq::from(lower), base_dim).entries().to_vec()
}

#[pyfunction]
fn to_lower(upper: Vec<u32>, base_dim: i64) -> PyResult<Vec<u32>> {
    Ok(upper_to_lower(&UpperSeq::from(upper), base_dim).map_err(err)?.entries().to_vec())
}

/// The primitive `p_I` with generator part `Q^I[1] * [-2^l(I)]`.
#[pyfunction]
fn primitive_p(space: &PySpace, seq: Vec<u32>) -> PyResult<PyElement> {
    let p = hopf::make_primitive_pi(&space.inner, &UpperSeq::from(seq)).map_err(err)?;
    Ok(PyElement { inner: p.value })
}

#[pyfunction]
fn kernel_of_r(space: &PySpace, degree: u32, length: usize) -> PyResult<Vec<PyElement>> {
    Ok(hopf::kernel_of_r(&space.inner, degree, length)
        .map_err(err)?
        .into_iter()
        .map(|e| PyElement { inner: e })
        .collect())
}

/// Bound report; `k = None` selects the `S^-1` case.
#[pyfunction]
#[pyo3(signature = (l, k = None))]
fn bound<'py>(py: Python<'py>, l: u32, k: Option<u32>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bounds::bound_report(l, k).map_err(err)?)
}

#[pyfunction]
fn immersion_threshold<'py>(py: Python<'py>, d: u32, k: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bounds::immersion_threshold(d, k).map_err(err)?)
}

#[pyfunction]
fn stable_range(d: i64, n: i64, l: i64) -> bool {
    bounds::stable_range_check(d, n, l)
}

#[pyfunction]
#[pyo3(signature = (suite, max_degree = None))]
fn verify<'py>(py: Python<'py>, suite: &str, max_degree: Option<u32>) -> PyResult<Bound<'py, PyAny>> {
    if !certify::SUITES.contains(&suite) {
        return Err(PyTypeError::new_err(format!("unknown suite {suite}")));
    }
    let r = py.detach(|| certify::run_suite(suite, max_degree)).map_err(err)?;
    to_py(py, &r)
}

#[pymodule]
fn dlhom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DlhomError", m.py().get_type::<DlhomError>())?;
    m.add("SUITES", certify::SUITES.to_vec())?;
    m.add_class::<PySpace>()?;
    m.add_class::<PyElement>()?;
    m.add_function(wrap_pyfunction!(adem, m)?)?;
    m.add_function(wrap_pyfunction!(to_upper, m)?)?;
    m.add_function(wrap_pyfunction!(to_lower, m)?)?;
    m.add_function(wrap_pyfunction!(primitive_p, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_of_r, m)?)?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(immersion_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(stable_range, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
