//! Python bindings: the `zslab` extension module.

use pyo3::create_exception;
use pyo3::exceptions::{PyLookupError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use zslab::constants::{self, ConstantKind, ConstantResult, DEFAULT_BUDGET};
use zslab::gf2::{self, GF2Matrix, LBarCheck, SupportSelection, L_BAR_EXHAUSTIVE_MAX_N};
use zslab::solver::{self, pipelines, CertificateKind, ZeroSumCertificate};
use zslab::{Error, ResidueSequence, RingSpec, WeightSet, WeightSetSpec};

create_exception!(zslab, BudgetExceeded, PyRuntimeError, "Exhaustive search ran out of budget.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        Error::NoFormula(_) | Error::NoKernel => PyLookupError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn kind(s: &str) -> PyResult<ConstantKind> {
    s.parse().map_err(to_py)
}

fn spec(s: &str) -> PyResult<WeightSetSpec> {
    s.parse().map_err(to_py)
}

fn weight_set_of(spec_str: &str, n: u64) -> PyResult<WeightSet> {
    spec(spec_str)?.materialize(n).map_err(to_py)
}

fn sequence(n: u64, terms: Vec<i64>) -> PyResult<ResidueSequence> {
    ResidueSequence::new(n, terms).map_err(to_py)
}

fn cert_kind(s: &str) -> PyResult<CertificateKind> {
    match s {
        "any" => Ok(CertificateKind::AnySubsequence),
        "consecutive" => Ok(CertificateKind::ConsecutiveBlock),
        _ => s
            .strip_prefix("length:")
            .and_then(|l| l.parse().ok())
            .map(CertificateKind::FixedLength)
            .ok_or_else(|| PyValueError::new_err(format!("expected any, consecutive or length:L, got {s:?}"))),
    }
}

fn matrix(rows: Vec<String>) -> PyResult<GF2Matrix> {
    let rows: Vec<&str> = rows.iter().map(String::as_str).collect();
    GF2Matrix::from_rows(&rows).map_err(to_py)
}

/// A weighted zero-sum certificate. Indices are 1-based.
#[pyclass(name = "Certificate", module = "zslab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCertificate {
    inner: ZeroSumCertificate,
}

#[pymethods]
impl PyCertificate {
    #[getter]
    fn kind(&self) -> String {
        self.inner.kind.to_string()
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.modulus
    }

    #[getter]
    fn indices(&self) -> Vec<usize> {
        self.inner.one_based()
    }

    #[getter]
    fn weights(&self) -> Vec<u64> {
        self.inner.weights.clone()
    }

    /// Check against a sequence and weight spec.
    fn verify(&self, sequence: Vec<i64>, weights: &str) -> PyResult<bool> {
        let seq = self::sequence(self.inner.modulus, sequence)?;
        Ok(self.inner.verify(&seq, &weight_set_of(weights, self.inner.modulus)?))
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        ZeroSumCertificate::from_json(s).map(|inner| Self { inner }).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Certificate(kind={:?}, n={}, indices={:?}, weights={:?})",
            self.kind(),
            self.n(),
            self.indices(),
            self.inner.weights
        )
    }
}

/// Value of a constant and how it was obtained.
#[pyclass(name = "ConstantResult", module = "zslab", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyConstantResult {
    inner: ConstantResult,
}

#[pymethods]
impl PyConstantResult {
    #[getter]
    fn kind(&self) -> String {
        self.inner.kind.to_string()
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n
    }

    #[getter]
    fn weights(&self) -> String {
        self.inner.weights.to_string()
    }

    #[getter]
    fn value(&self) -> u64 {
        self.inner.value
    }

    #[getter]
    fn method(&self) -> String {
        self.inner.method.to_string()
    }

    #[getter]
    fn witness(&self) -> Option<Vec<u64>> {
        self.inner.witness.as_ref().map(|w| w.terms().to_vec())
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        ConstantResult::from_json(s).map(|inner| Self { inner }).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "ConstantResult({}_{{{}}}({}) = {}, method={:?})",
            self.kind(),
            self.weights(),
            self.n(),
            self.value(),
            self.method()
        )
    }
}

/// Ω(n), the number of prime factors counted with multiplicity.
#[pyfunction]
fn big_omega(n: u64) -> PyResult<u32> {
    Ok(RingSpec::new(n).map_err(to_py)?.big_omega())
}

/// Sorted elements of a weight set modulo `n`.
#[pyfunction]
fn weight_set(spec: &str, n: u64) -> PyResult<Vec<u64>> {
    Ok(weight_set_of(spec, n)?.values().to_vec())
}

/// Complete search for a weighted zero-sum certificate; `None` if there is none.
#[pyfunction]
#[pyo3(signature = (n, weights, sequence, kind = "any"))]
fn solve(n: u64, weights: &str, sequence: Vec<i64>, kind: &str) -> PyResult<Option<PyCertificate>> {
    let seq = self::sequence(n, sequence)?;
    let verdict = solver::solve(&seq, &weight_set_of(weights, n)?, cert_kind(kind)?).map_err(to_py)?;
    Ok(verdict.found().map(|c| PyCertificate { inner: c.clone() }))
}

/// Unit-weight certificate from the constructive pipelines.
#[pyfunction]
#[pyo3(signature = (n, sequence, kind = "any"))]
fn constructive(n: u64, sequence: Vec<i64>, kind: &str) -> PyResult<Option<PyCertificate>> {
    let seq = self::sequence(n, sequence)?;
    let verdict = pipelines::constructive(&seq, cert_kind(kind)?).map_err(to_py)?;
    Ok(verdict.found().map(|c| PyCertificate { inner: c.clone() }))
}

/// Certificate with weights in the k-th power residues modulo a prime `p`.
#[pyfunction]
fn kth_power_solve(p: u64, sequence: Vec<i64>, k: u64) -> PyResult<PyCertificate> {
    let seq = self::sequence(p, sequence)?;
    solver::cubp_solve(&seq, k).map(|inner| PyCertificate { inner }).map_err(to_py)
}

/// Exact value by exhaustive search.
#[pyfunction]
#[pyo3(signature = (kind, n, weights, budget = DEFAULT_BUDGET))]
fn constant(py: Python<'_>, kind: &str, n: u64, weights: &str, budget: u64) -> PyResult<PyConstantResult> {
    let (k, s) = (self::kind(kind)?, spec(weights)?);
    py.detach(|| constants::compute_exhaustive(k, n, &s, budget))
        .map(|inner| PyConstantResult { inner })
        .map_err(to_py)
}

/// Value from the closed forms; `LookupError` when none applies.
#[pyfunction]
fn predict(kind: &str, n: u64, weights: &str) -> PyResult<PyConstantResult> {
    constants::predict(self::kind(kind)?, n, &spec(weights)?)
        .map(|inner| PyConstantResult { inner })
        .map_err(to_py)
}

/// Extremal sequences, or one representative per equivalence class.
#[pyfunction]
#[pyo3(signature = (kind, n, weights, up_to_equivalence = false, budget = DEFAULT_BUDGET))]
fn enumerate_extremal(
    py: Python<'_>,
    kind: &str,
    n: u64,
    weights: &str,
    up_to_equivalence: bool,
    budget: u64,
) -> PyResult<Vec<Vec<u64>>> {
    let (k, s) = (self::kind(kind)?, spec(weights)?);
    let found = py
        .detach(|| constants::enumerate_extremal(k, n, &s, up_to_equivalence, budget))
        .map_err(to_py)?;
    Ok(found.into_iter().map(|s| s.terms().to_vec()).collect())
}

/// `(c, sigma, weights)`.
type Equivalence = (u64, Vec<usize>, Vec<u64>);

/// `(c, sigma, weights)` relating two sequences, `sigma` 0-based; `None` if
/// they are not equivalent.
#[pyfunction]
#[pyo3(signature = (n, s, t, weights = "units"))]
fn check_equivalence(
    n: u64,
    s: Vec<i64>,
    t: Vec<i64>,
    weights: &str,
) -> PyResult<Option<Equivalence>> {
    let w = constants::check_equivalence(&sequence(n, s)?, &sequence(n, t)?, &weight_set_of(weights, n)?)
        .map_err(to_py)?;
    Ok(w.map(|w| (w.c, w.sigma, w.weights)))
}

fn selection(found: zslab::Result<SupportSelection>) -> PyResult<Option<Vec<usize>>> {
    match found {
        Ok(sel) => Ok(Some(sel.one_based())),
        Err(Error::NoKernel) => Ok(None),
        Err(e) => Err(to_py(e)),
    }
}

/// Consecutive rows (bit strings) with zero XOR, 1-based.
#[pyfunction]
fn kernel_window(rows: Vec<String>) -> PyResult<Option<Vec<usize>>> {
    selection(gf2::kernel_window(&matrix(rows)?))
}

/// Rows with zero XOR, 1-based; `None` when the rows are independent.
#[pyfunction]
fn kernel_subset(rows: Vec<String>) -> PyResult<Option<Vec<usize>>> {
    selection(gf2::kernel_subset(&matrix(rows)?))
}

/// Exactly `m` rows with zero XOR, 1-based.
#[pyfunction]
fn kernel_fixed_weight(rows: Vec<String>, m: usize) -> PyResult<Option<Vec<usize>>> {
    selection(gf2::kernel_fixed_weight(&matrix(rows)?, m))
}

/// Largest dimension of a subspace of F_2^n without a weight-m vector.
#[pyfunction]
#[pyo3(signature = (n, m, exhaustive = false))]
fn l_bar(n: usize, m: usize, exhaustive: bool) -> PyResult<usize> {
    if exhaustive {
        if n > L_BAR_EXHAUSTIVE_MAX_N {
            return Err(PyValueError::new_err(format!(
                "exhaustive enumeration is limited to n <= {L_BAR_EXHAUSTIVE_MAX_N}"
            )));
        }
        return Ok(gf2::l_bar_exhaustive(n, m));
    }
    match gf2::check_l_bar(n, m) {
        LBarCheck::Guaranteed { value, .. } => Ok(value),
        LBarCheck::NotGuaranteed => Err(PyLookupError::new_err(format!("no closed form for l({n}, {m})"))),
    }
}

#[pymodule(name = "zslab")]
fn zslab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyConstantResult>()?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add_function(wrap_pyfunction!(big_omega, m)?)?;
    m.add_function(wrap_pyfunction!(weight_set, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(constructive, m)?)?;
    m.add_function(wrap_pyfunction!(kth_power_solve, m)?)?;
    m.add_function(wrap_pyfunction!(constant, m)?)?;
    m.add_function(wrap_pyfunction!(predict, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_extremal, m)?)?;
    m.add_function(wrap_pyfunction!(check_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_window, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_subset, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_fixed_weight, m)?)?;
    m.add_function(wrap_pyfunction!(l_bar, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_kinds() {
        assert_eq!(cert_kind("any").unwrap(), CertificateKind::AnySubsequence);
        assert_eq!(cert_kind("length:4").unwrap(), CertificateKind::FixedLength(4));
        assert!(cert_kind("length:").is_err());
    }

    #[test]
    fn solve_and_verify() {
        let c = solve(8, "units", vec![1, 2, 3, 4, 5, 6, 7, 0], "consecutive").unwrap().unwrap();
        assert!(c.verify(vec![1, 2, 3, 4, 5, 6, 7, 0], "units").unwrap());
        assert_eq!(c.indices(), vec![1, 2, 3]);
        assert!(solve(8, "units", vec![1, 2, 4], "any").unwrap().is_none());
    }

    #[test]
    fn constants_and_gf2() {
        Python::initialize();
        Python::attach(|py| {
            assert_eq!(constant(py, "C", 8, "units", DEFAULT_BUDGET).unwrap().value(), 8);
            assert_eq!(predict("E", 12, "units").unwrap().value(), 15);
            assert_eq!(enumerate_extremal(py, "E", 8, "units", true, DEFAULT_BUDGET).unwrap().len(), 4);
        });
        assert_eq!(kernel_subset(vec!["10".into(), "01".into()]).unwrap(), None);
        assert_eq!(kernel_window(vec!["01".into(), "10".into(), "11".into(), "00".into()]).unwrap(), Some(vec![1, 2, 3]));
        assert_eq!(l_bar(6, 4, false).unwrap(), 3);
    }
}
