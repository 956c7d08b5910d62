//! Python bindings for the core crate.

use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use compacta::asymptotics;
use compacta::compaction;
use compacta::dfinite;
use compacta::enumerate::{generate, GenFilter, DEFAULT_BUDGET};
use compacta::operator::{self, DiffOperator};
use compacta::recurrences::CountTable;
use compacta::tree::{self, RelaxedDag};
use compacta::{Error, Family};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Parse { .. } | Error::Invalid(_) | Error::Domain(_) | Error::OutOfRange { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn family(name: &str) -> PyResult<Family> {
    name.parse().map_err(to_py)
}

/// A relaxed or compacted dag in "@i" notation.
#[pyclass(name = "RelaxedDag", frozen)]
struct PyRelaxedDag {
    inner: RelaxedDag,
}

#[pymethods]
impl PyRelaxedDag {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyRelaxedDag { inner: tree::parse_dag(text).map_err(to_py)? })
    }

    fn size(&self) -> usize {
        self.inner.size()
    }

    fn right_height(&self) -> usize {
        self.inner.right_height()
    }

    fn is_compacted(&self) -> bool {
        compaction::is_compacted(&self.inner)
    }

    /// Post-order index of the first repeated node, if any.
    fn duplicate_node(&self) -> Option<usize> {
        compaction::duplicate_node(&self.inner).map(|i| i.get())
    }

    /// The full binary tree as an s-expression.
    fn unfold(&self) -> String {
        compaction::unfold_root(&self.inner).to_string()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RelaxedDag('{}')", self.inner)
    }
}

/// A differential operator `sum p_i(z) D^i`.
#[pyclass(name = "DiffOperator", frozen)]
struct PyDiffOperator {
    inner: DiffOperator,
}

#[pymethods]
impl PyDiffOperator {
    /// `L_k` for `family == "L"`, `M_k` for `family == "M"`.
    #[staticmethod]
    fn build(family: &str, k: usize) -> PyResult<Self> {
        let inner = match family {
            "L" => operator::build_l(k),
            "M" => operator::build_m(k),
            other => return Err(PyValueError::new_err(format!("unknown operator family '{other}'"))),
        };
        Ok(PyDiffOperator { inner })
    }

    fn order(&self) -> Option<usize> {
        self.inner.order()
    }

    /// Coefficient lists, ascending in the power of `D` and of `z`.
    fn coefficients(&self) -> Vec<Vec<BigInt>> {
        self.inner.coeffs().iter().map(|p| p.coeffs().to_vec()).collect()
    }

    fn compose(&self, other: &PyDiffOperator) -> PyDiffOperator {
        PyDiffOperator { inner: self.inner.compose(&other.inner) }
    }

    fn latex(&self) -> String {
        self.inner.to_latex()
    }

    /// Coefficient polynomials of the induced recurrence `sum_s q_s(n) a_(n-s) = 0`.
    fn recurrence(&self) -> PyResult<Vec<Vec<BigInt>>> {
        if self.inner.is_zero() {
            return Err(PyValueError::new_err("zero operator"));
        }
        let rec = dfinite::ode_to_recurrence(&self.inner);
        Ok(rec.coeffs().iter().map(|p| p.coeffs().to_vec()).collect())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// Two-parameter count table for one family.
#[pyclass(name = "CountTable", frozen)]
struct PyCountTable {
    inner: CountTable,
}

#[pymethods]
impl PyCountTable {
    #[new]
    fn new(kind: &str, nmax: usize) -> PyResult<Self> {
        Ok(PyCountTable { inner: CountTable::build(family(kind)?, nmax) })
    }

    fn get(&self, n: usize, p: usize) -> Option<BigUint> {
        self.inner.get(n, p).cloned()
    }

    fn count(&self, n: usize) -> PyResult<BigUint> {
        self.inner.count(n).map_err(to_py)
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }
}

/// Compacts an s-expression; returns the dag text and the uid rows.
#[pyfunction]
fn compact(text: &str) -> PyResult<(String, Vec<(Option<String>, u32, u32, u32)>)> {
    let t = tree::parse_tree(text).map_err(to_py)?;
    let (dag, table) = compaction::uid_compact(&t);
    let rows = table.rows().iter().map(|r| (r.label.clone(), r.left, r.right, r.uid)).collect();
    Ok((dag.to_string(), rows))
}

#[pyfunction]
fn count(kind: &str, n: usize) -> PyResult<BigUint> {
    CountTable::build(family(kind)?, n).count(n).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, kind = "relaxed", max_right_height = None))]
fn enumerate(n: usize, kind: &str, max_right_height: Option<usize>) -> PyResult<Vec<String>> {
    let f = GenFilter { n, max_right_height, kind: family(kind)? };
    Ok(generate(&f, DEFAULT_BUDGET).map_err(to_py)?.map(|d| d.to_string()).collect())
}

#[pyfunction]
fn sequence(kind: &str, k: usize, upto: usize) -> PyResult<Vec<BigInt>> {
    dfinite::sequence(family(kind)?, k, upto).map_err(to_py)
}

/// `(rho, growth, delta1, exponent)`.
#[pyfunction]
fn singularity(k: usize, kind: &str) -> PyResult<(f64, f64, f64, f64)> {
    let sd = asymptotics::singularity_data(k, family(kind)?);
    Ok((sd.rho, sd.growth, sd.delta1, sd.exponent))
}

/// `(k, growth, alpha, beta, pass)` rows.
#[pyfunction]
fn table1() -> Vec<(usize, f64, f64, f64, bool)> {
    asymptotics::table1().iter().map(|r| (r.k, r.growth, r.alpha, r.beta, r.pass())).collect()
}

/// `(estimate, ladder)` for the constant in front of `n! growth^n n^exponent`.
#[pyfunction]
fn fit_constant(k: usize, kind: &str, n_max: usize) -> PyResult<(f64, Vec<(usize, f64)>)> {
    let fit = asymptotics::fit_constant(k, family(kind)?, n_max).map_err(to_py)?;
    Ok((fit.estimate, fit.ladder))
}

#[pymodule]
fn compacta_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRelaxedDag>()?;
    m.add_class::<PyDiffOperator>()?;
    m.add_class::<PyCountTable>()?;
    m.add_function(wrap_pyfunction!(compact, m)?)?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(sequence, m)?)?;
    m.add_function(wrap_pyfunction!(singularity, m)?)?;
    m.add_function(wrap_pyfunction!(table1, m)?)?;
    m.add_function(wrap_pyfunction!(fit_constant, m)?)?;
    Ok(())
}
