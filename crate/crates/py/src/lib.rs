//! Python bindings for the `fi_tails` library.

use fitails::catalan;
use fitails::combinatorics::{self, ballot};
use fitails::fj;
use fitails::linalg;
use fitails::tails::{self, DEFAULT_MAX_MATRIX_CELLS};
use fitails::xi;
use num_bigint::BigInt;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Injection", module = "fi_tails", frozen, skip_from_py_object, eq, hash)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyInjection(combinatorics::Injection);

#[pymethods]
impl PyInjection {
    #[new]
    fn new(images: Vec<usize>, codomain: usize) -> PyResult<Self> {
        combinatorics::Injection::new(images, codomain).map(Self).map_err(value_err)
    }

    #[staticmethod]
    fn parse(text: &str, codomain: usize) -> PyResult<Self> {
        combinatorics::Injection::parse(text, codomain).map(Self).map_err(value_err)
    }

    #[getter]
    fn images(&self) -> Vec<usize> {
        self.0.images().to_vec()
    }

    #[getter]
    fn domain_size(&self) -> usize {
        self.0.domain_size()
    }

    #[getter]
    fn codomain_size(&self) -> usize {
        self.0.codomain_size()
    }

    /// `f.then(g)` is the composite `g ∘ f`.
    fn then(&self, g: &PyInjection) -> PyResult<Self> {
        self.0.then(&g.0).map(Self).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("Injection({}, {})", self.0, self.0.codomain_size())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "AbelianGroup", module = "fi_tails", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq, Eq)]
struct PyAbelianGroup(linalg::AbelianGroup);

#[pymethods]
impl PyAbelianGroup {
    #[new]
    #[pyo3(signature = (free_rank=0, orders=Vec::new()))]
    fn new(free_rank: usize, orders: Vec<BigInt>) -> Self {
        Self(linalg::AbelianGroup::from_cyclic_orders(free_rank, orders))
    }

    #[getter]
    fn free_rank(&self) -> usize {
        self.0.free_rank()
    }

    #[getter]
    fn torsion(&self) -> Vec<BigInt> {
        self.0.invariant_factors().to_vec()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, other: &PyAbelianGroup) -> Self {
        Self(self.0.direct_sum(&other.0))
    }

    fn __repr__(&self) -> String {
        format!("AbelianGroup({})", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "XiVector", module = "fi_tails", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq, Eq)]
struct PyXiVector(xi::XiVector);

#[pymethods]
impl PyXiVector {
    #[new]
    fn new(ell: usize, n: usize, text: &str) -> PyResult<Self> {
        xi::XiVector::parse(ell, n, text).map(Self).map_err(value_err)
    }

    #[staticmethod]
    fn xi(n: usize, ell: usize) -> PyResult<Self> {
        xi::XiVector::xi(n, ell).map(Self).map_err(value_err)
    }

    #[getter]
    fn ell(&self) -> usize {
        self.0.ell()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn act(&self, f: &PyInjection) -> PyResult<Self> {
        self.0.act(&f.0).map(Self).map_err(value_err)
    }

    fn to_dense(&self) -> Vec<BigInt> {
        self.0.to_dense()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, other: &PyXiVector) -> Self {
        Self(self.0.plus(&other.0))
    }

    fn __sub__(&self, other: &PyXiVector) -> Self {
        Self(self.0.minus(&other.0))
    }

    fn __repr__(&self) -> String {
        format!("XiVector({}, {}, {:?})", self.0.ell(), self.0.n(), self.0.to_string())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "FIPresentation", module = "fi_tails", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq, Eq)]
struct PyFIPresentation(fitails::FIPresentation);

#[pymethods]
impl PyFIPresentation {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        fitails::FIPresentation::parse(text).map(Self).map_err(value_err)
    }

    #[staticmethod]
    fn free(generators: Vec<usize>) -> Self {
        Self(fitails::FIPresentation::free(generators))
    }

    #[getter]
    fn generator_degrees(&self) -> Vec<usize> {
        self.0.generator_degrees().to_vec()
    }

    #[getter]
    fn relation_degrees(&self) -> Vec<usize> {
        self.0.relation_degrees().to_vec()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    /// `(row_labels, col_labels, rows)` for Ξ(ℓ)_Z.
    fn evaluate_xi(&self, ell: usize) -> (Vec<String>, Vec<String>, Vec<Vec<BigInt>>) {
        let (rows, cols) = self.0.xi_labels(ell);
        (rows, cols, self.0.evaluate_xi(ell).row_vecs())
    }

    fn presentation_matrix(&self, n: usize) -> Vec<Vec<BigInt>> {
        self.0.presentation_matrix_at(n).row_vecs()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "TailProfile", module = "fi_tails", frozen)]
struct PyTailProfile(tails::TailProfile);

#[pymethods]
impl PyTailProfile {
    #[getter]
    fn degree(&self) -> usize {
        self.0.degree
    }

    #[getter]
    fn stable_from(&self) -> usize {
        self.0.stable_from
    }

    #[getter]
    fn invariants(&self) -> Vec<PyAbelianGroup> {
        self.0.invariants.iter().cloned().map(PyAbelianGroup).collect()
    }

    #[getter]
    fn poly_degree(&self) -> i64 {
        tails::effective_poly_degree(&self.0)
    }

    fn evaluate(&self, n: usize) -> PyResult<PyAbelianGroup> {
        tails::evaluate_tail(&self.0, n).map(PyAbelianGroup).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        let parts: Vec<String> = self.0.invariants.iter().map(|a| a.to_string()).collect();
        format!("TailProfile(d={}, invariants=[{}])", self.0.degree, parts.join(", "))
    }
}

#[pyclass(name = "OracleReport", module = "fi_tails", frozen, get_all)]
struct PyOracleReport {
    n: usize,
    stable_from: usize,
    predicted: Option<PyAbelianGroup>,
    actual: PyAbelianGroup,
    equal: Option<bool>,
}

#[pyfunction]
fn tail_invariants(z: &PyFIPresentation) -> PyTailProfile {
    PyTailProfile(tails::tail_invariants(&z.0))
}

#[pyfunction]
#[pyo3(signature = (z, n, max_cells=DEFAULT_MAX_MATRIX_CELLS))]
fn oracle_check(z: &PyFIPresentation, n: usize, max_cells: u64) -> PyResult<PyOracleReport> {
    let r = tails::oracle_check(&z.0, n, max_cells).map_err(|e| PyArithmeticError::new_err(e.to_string()))?;
    Ok(PyOracleReport {
        n: r.n,
        stable_from: r.stable_from,
        predicted: r.predicted.map(PyAbelianGroup),
        actual: PyAbelianGroup(r.actual),
        equal: r.equal,
    })
}

#[pyfunction]
fn cokernel(rows: Vec<Vec<BigInt>>) -> PyResult<PyAbelianGroup> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err("ragged matrix"));
    }
    Ok(PyAbelianGroup(linalg::cokernel(&linalg::IntMatrix::from_rows(rows, cols))))
}

#[pyfunction]
fn enumerate_injections(k: usize, n: usize) -> Vec<PyInjection> {
    combinatorics::enumerate_injections(k, n).into_iter().map(PyInjection).collect()
}

#[pyfunction]
fn multiplicity(n: usize, ell: usize) -> BigInt {
    ballot(n, ell)
}

#[pyfunction]
fn d_kernel_rank(n: usize) -> usize {
    xi::d_kernel(n).len()
}

#[pyfunction]
fn fj_basis(source: usize, target: usize, max_level: usize) -> Vec<String> {
    fj::fj_basis(source, target, max_level).iter().map(|b| b.to_string()).collect()
}

/// Ranks of the entries of Q_d, indexed `[ℓ][m]`.
#[pyfunction]
fn q_ring_ranks(d: usize) -> Vec<Vec<usize>> {
    fj::q_ring(d).entries.iter().map(|row| row.iter().map(|e| e.rank()).collect()).collect()
}

/// `(rows, cols, determinant)` of the matching pairing; the determinant is
/// `None` when the matrix is not square.
#[pyfunction]
fn pairing(k: usize, n: usize) -> (usize, usize, Option<BigInt>) {
    let p = catalan::Pairing::new(k, n);
    (p.matrix().rows(), p.matrix().cols(), p.determinant())
}

#[pymodule]
#[pyo3(name = "fi_tails")]
fn fi_tails_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInjection>()?;
    m.add_class::<PyAbelianGroup>()?;
    m.add_class::<PyXiVector>()?;
    m.add_class::<PyFIPresentation>()?;
    m.add_class::<PyTailProfile>()?;
    m.add_class::<PyOracleReport>()?;
    m.add_function(wrap_pyfunction!(tail_invariants, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_check, m)?)?;
    m.add_function(wrap_pyfunction!(cokernel, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_injections, m)?)?;
    m.add_function(wrap_pyfunction!(multiplicity, m)?)?;
    m.add_function(wrap_pyfunction!(d_kernel_rank, m)?)?;
    m.add_function(wrap_pyfunction!(fj_basis, m)?)?;
    m.add_function(wrap_pyfunction!(q_ring_ranks, m)?)?;
    m.add_function(wrap_pyfunction!(pairing, m)?)?;
    Ok(())
}
