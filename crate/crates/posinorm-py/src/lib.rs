//! Python bindings: matrices cross the boundary as lists of rows of
//! complex numbers, verdicts and certificates come back as dicts, and
//! banded operators are wrapped in a class that keeps their exact
//! symbol-plus-correction representation on the Rust side.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use posinorm::classify::{
    analyze, bouldin_angle, kernel_power_equal, posinormal_certificate, PosinormalCertificate,
};
use posinorm::matop::{
    family_of, jordan_block, random_ep, toeplitz_truncation, truncated_shift, FamilyKind,
    OperatorMatrix, TruncationFamily,
};
use posinorm::qtop::{
    qt_add, qt_adjoint, qt_bounded_below_probe, qt_from_symbol, qt_is_hyponormal, qt_multiply,
    qt_power, qt_scale, qt_truncate, qt_verify_equal, self_commutator, QuasiToeplitzOperator,
};
use posinorm::rangelab::power_range_report;
use posinorm::{CMatrix, Error, ToleranceConfig};

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn tolerance(rank_rtol: f64, psd_rtol: f64, residual_rtol: f64) -> PyResult<ToleranceConfig> {
    ToleranceConfig::new(rank_rtol, psd_rtol, residual_rtol).map_err(to_py_err)
}

fn matrix_from_rows(rows: &[Vec<Complex64>]) -> PyResult<CMatrix> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(PyValueError::new_err("matrix must be nonempty"));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(PyValueError::new_err("matrix rows must all have the same length"));
    }
    Ok(CMatrix::from_fn(rows.len(), ncols, |i, k| rows[i][k]))
}

fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|k| m[(i, k)]).collect())
        .collect()
}

fn operator_from_rows(rows: &[Vec<Complex64>]) -> PyResult<OperatorMatrix> {
    let m = matrix_from_rows(rows)?;
    if m.nrows() != m.ncols() {
        return Err(PyValueError::new_err(format!(
            "operator analysis needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    OperatorMatrix::new(m, "python matrix").map_err(to_py_err)
}

fn certificate_dict<'py>(
    py: Python<'py>,
    cert: &PosinormalCertificate,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("lambda_min", cert.lambda_min)?;
    d.set_item("lambda_bisect", cert.lambda_bisect)?;
    d.set_item("residual_factorization", cert.residual_factorization)?;
    d.set_item("residual_interrupter", cert.residual_interrupter)?;
    d.set_item("witness", matrix_to_rows(&cert.witness))?;
    d.set_item("interrupter", matrix_to_rows(&cert.interrupter))?;
    Ok(d)
}

/// Property verdicts and the posinormality certificate for a square
/// complex matrix given as a list of rows.
#[pyfunction]
#[pyo3(signature = (entries, rank_rtol=1e-10, psd_rtol=1e-10, residual_rtol=1e-10))]
fn analyze_matrix(
    py: Python<'_>,
    entries: Vec<Vec<Complex64>>,
    rank_rtol: f64,
    psd_rtol: f64,
    residual_rtol: f64,
) -> PyResult<Py<PyDict>> {
    let tol = tolerance(rank_rtol, psd_rtol, residual_rtol)?;
    let op = operator_from_rows(&entries)?;
    let rep = analyze(&op, &tol).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("normal", rep.normal)?;
    d.set_item("normal_defect", rep.normal_defect)?;
    d.set_item("hyponormal", rep.hyponormal)?;
    d.set_item("hyponormal_lambda_min", rep.hyponormal_lambda_min)?;
    d.set_item("posinormal", rep.posinormal)?;
    d.set_item("posinormal_defect", rep.posinormal_defect)?;
    d.set_item("coposinormal", rep.coposinormal)?;
    d.set_item("coposinormal_defect", rep.coposinormal_defect)?;
    d.set_item("ep", rep.ep)?;
    d.set_item("kernel_dim", rep.kernel_dim)?;
    d.set_item("kernel_sq_dim", rep.kernel_sq_dim)?;
    d.set_item("kernel_power_equal", rep.kernel_power_equal)?;
    match &rep.certificate {
        Some(cert) => d.set_item("certificate", certificate_dict(py, cert)?)?,
        None => d.set_item("certificate", py.None())?,
    }
    d.set_item("caveats", rep.caveats)?;
    Ok(d.into())
}

/// Witness, interrupter and minimal scaling constant for a posinormal
/// matrix; raises ValueError when the matrix is not posinormal.
#[pyfunction]
#[pyo3(signature = (entries, rank_rtol=1e-10, psd_rtol=1e-10, residual_rtol=1e-10))]
fn certificate(
    py: Python<'_>,
    entries: Vec<Vec<Complex64>>,
    rank_rtol: f64,
    psd_rtol: f64,
    residual_rtol: f64,
) -> PyResult<Py<PyDict>> {
    let tol = tolerance(rank_rtol, psd_rtol, residual_rtol)?;
    let m = matrix_from_rows(&entries)?;
    let cert = posinormal_certificate(&m, &tol).map_err(to_py_err)?;
    Ok(certificate_dict(py, &cert)?.into())
}

/// Kernel dimensions of A and A^2 with the equality verdict.
#[pyfunction]
#[pyo3(signature = (entries, rank_rtol=1e-10, psd_rtol=1e-10, residual_rtol=1e-10))]
fn kernel_dims_under_squaring(
    entries: Vec<Vec<Complex64>>,
    rank_rtol: f64,
    psd_rtol: f64,
    residual_rtol: f64,
) -> PyResult<(bool, usize, usize)> {
    let tol = tolerance(rank_rtol, psd_rtol, residual_rtol)?;
    let m = matrix_from_rows(&entries)?;
    kernel_power_equal(&m, &tol).map_err(to_py_err)
}

/// Angle between ran B and the complement of ker A inside it, with the
/// subspace dimensions that went into it.
#[pyfunction]
#[pyo3(signature = (a, b, rank_rtol=1e-10, psd_rtol=1e-10, residual_rtol=1e-10))]
fn range_angle(
    py: Python<'_>,
    a: Vec<Vec<Complex64>>,
    b: Vec<Vec<Complex64>>,
    rank_rtol: f64,
    psd_rtol: f64,
    residual_rtol: f64,
) -> PyResult<Py<PyDict>> {
    let tol = tolerance(rank_rtol, psd_rtol, residual_rtol)?;
    let ma = matrix_from_rows(&a)?;
    let mb = matrix_from_rows(&b)?;
    let angle = bouldin_angle(&ma, &mb, &tol).map_err(to_py_err)?;
    let d = PyDict::new(py);
    d.set_item("theta", angle.theta)?;
    d.set_item("dim_ran_b", angle.dim_ran_b)?;
    d.set_item("dim_ker_a", angle.dim_ker_a)?;
    d.set_item("dim_intersection", angle.dim_intersection)?;
    d.set_item("dim_n", angle.dim_n)?;
    Ok(d.into())
}

#[pyfunction]
#[pyo3(signature = (n, eigenvalue=None))]
fn jordan(n: usize, eigenvalue: Option<Complex64>) -> PyResult<Vec<Vec<Complex64>>> {
    let op = jordan_block(n, eigenvalue.unwrap_or(Complex64::new(0.0, 0.0))).map_err(to_py_err)?;
    Ok(matrix_to_rows(op.matrix()))
}

/// Random n x n EP matrix of the given rank, reproducible from the seed.
#[pyfunction]
fn random_ep_matrix(n: usize, rank: usize, seed: u64) -> PyResult<Vec<Vec<Complex64>>> {
    let op = random_ep(n, rank, seed).map_err(to_py_err)?;
    Ok(matrix_to_rows(op.matrix()))
}

#[pyfunction]
fn shift_truncation(n: usize) -> PyResult<Vec<Vec<Complex64>>> {
    let op = truncated_shift(n).map_err(to_py_err)?;
    Ok(matrix_to_rows(op.matrix()))
}

/// n x n corner of the Toeplitz operator with the given band
/// coefficients as (offset, value) pairs; offset +1 is the subdiagonal.
#[pyfunction]
fn toeplitz_corner(coeffs: Vec<(i64, Complex64)>, n: usize) -> PyResult<Vec<Vec<Complex64>>> {
    let op = toeplitz_truncation(&coeffs, n).map_err(to_py_err)?;
    Ok(matrix_to_rows(op.matrix()))
}

fn family_by_name(name: &str, symbol: Option<Vec<(i64, Complex64)>>) -> PyResult<TruncationFamily> {
    let kind = match (name, symbol) {
        ("example1" | "block", None) => FamilyKind::BlockHarmonic,
        ("shift", None) => FamilyKind::Shift,
        ("diag-inv-k" | "diag", None) => FamilyKind::DiagonalHarmonic,
        ("toeplitz", Some(coeffs)) => FamilyKind::Toeplitz(coeffs),
        ("toeplitz", None) => {
            return Err(PyValueError::new_err("the toeplitz family needs symbol coefficients"))
        }
        (other, Some(_)) => {
            return Err(PyValueError::new_err(format!(
                "symbol coefficients only apply to the toeplitz family, not '{other}'"
            )))
        }
        (other, None) => {
            return Err(PyValueError::new_err(format!(
                "unknown family '{other}'; known: example1, shift, diag-inv-k, toeplitz"
            )))
        }
    };
    family_of(kind).map_err(to_py_err)
}

/// Truncation of a registered family at size n.
#[pyfunction]
#[pyo3(signature = (name, n, symbol=None))]
fn family_truncation(
    name: &str,
    n: usize,
    symbol: Option<Vec<(i64, Complex64)>>,
) -> PyResult<Vec<Vec<Complex64>>> {
    let family = family_by_name(name, symbol)?;
    let op = family.generate(n).map_err(to_py_err)?;
    Ok(matrix_to_rows(op.matrix()))
}

/// Smallest nonzero singular values of a family's powers across
/// truncation sizes, with the stable/decaying classification per power.
#[pyfunction]
#[pyo3(signature = (name, k_max, sizes, symbol=None, rank_rtol=1e-10, psd_rtol=1e-10, residual_rtol=1e-10))]
#[allow(clippy::too_many_arguments)]
fn family_power_curves(
    py: Python<'_>,
    name: &str,
    k_max: usize,
    sizes: Vec<usize>,
    symbol: Option<Vec<(i64, Complex64)>>,
    rank_rtol: f64,
    psd_rtol: f64,
    residual_rtol: f64,
) -> PyResult<Py<PyList>> {
    let tol = tolerance(rank_rtol, psd_rtol, residual_rtol)?;
    let family = family_by_name(name, symbol)?;
    let report = power_range_report(&family, k_max, &sizes, &tol).map_err(to_py_err)?;
    let out = PyList::empty(py);
    for pd in &report {
        let d = PyDict::new(py);
        d.set_item("k", pd.k)?;
        d.set_item("classification", pd.diagnosis.classification.as_str())?;
        d.set_item("stable_floor", pd.diagnosis.stable_floor)?;
        d.set_item("fitted_decay_exponent", pd.diagnosis.fitted_decay_exponent)?;
        let curve: Vec<(usize, Option<f64>, usize)> = pd
            .diagnosis
            .curve
            .iter()
            .map(|p| (p.n, p.sigma, p.rank))
            .collect();
        d.set_item("curve", curve)?;
        out.append(d)?;
    }
    Ok(out.into())
}

/// Banded operator on one-sided l2 held exactly as a Laurent symbol
/// plus a finite corner correction.
#[pyclass(name = "BandedOperator")]
#[derive(Clone)]
struct PyBandedOperator {
    inner: QuasiToeplitzOperator,
}

#[pymethods]
impl PyBandedOperator {
    /// The unilateral shift U (ones on the subdiagonal).
    #[staticmethod]
    fn shift() -> Self {
        PyBandedOperator {
            inner: QuasiToeplitzOperator::shift(),
        }
    }

    #[staticmethod]
    fn identity() -> Self {
        PyBandedOperator {
            inner: QuasiToeplitzOperator::identity(),
        }
    }

    /// Builds a pure banded operator from (offset, value) pairs.
    #[staticmethod]
    fn from_symbol(coeffs: Vec<(i64, Complex64)>) -> PyResult<Self> {
        Ok(PyBandedOperator {
            inner: qt_from_symbol(&coeffs).map_err(to_py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("BandedOperator({})", self.inner)
    }

    fn __mul__(&self, other: &PyBandedOperator) -> Self {
        self.multiply(other)
    }

    fn __add__(&self, other: &PyBandedOperator) -> Self {
        self.add(other)
    }

    fn adjoint(&self) -> Self {
        PyBandedOperator {
            inner: qt_adjoint(&self.inner),
        }
    }

    fn multiply(&self, other: &PyBandedOperator) -> Self {
        PyBandedOperator {
            inner: qt_multiply(&self.inner, &other.inner),
        }
    }

    fn add(&self, other: &PyBandedOperator) -> Self {
        PyBandedOperator {
            inner: qt_add(&self.inner, &other.inner),
        }
    }

    fn scale(&self, c: Complex64) -> Self {
        PyBandedOperator {
            inner: qt_scale(c, &self.inner),
        }
    }

    fn power(&self, k: usize) -> Self {
        PyBandedOperator {
            inner: qt_power(&self.inner, k),
        }
    }

    /// Symbol as (offset, value) pairs, lowest offset first.
    fn symbol(&self) -> Vec<(i64, Complex64)> {
        self.inner.symbol().to_vec()
    }

    /// Side length of the corner correction window (0 for pure symbols).
    fn correction_window(&self) -> usize {
        self.inner.window()
    }

    /// X*X - XX* as a finite matrix on its correction window.
    fn self_commutator(&self) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(matrix_to_rows(&self_commutator(&self.inner).map_err(to_py_err)?))
    }

    #[pyo3(signature = (rank_rtol=1e-10, psd_rtol=1e-10, residual_rtol=1e-10))]
    fn is_hyponormal(
        &self,
        rank_rtol: f64,
        psd_rtol: f64,
        residual_rtol: f64,
    ) -> PyResult<(bool, f64)> {
        let tol = tolerance(rank_rtol, psd_rtol, residual_rtol)?;
        qt_is_hyponormal(&self.inner, &tol).map_err(to_py_err)
    }

    /// Exact equality check; returns (equal, symbol residual,
    /// correction residual).
    #[pyo3(signature = (other, rank_rtol=1e-10, psd_rtol=1e-10, residual_rtol=1e-10))]
    fn verify_equal(
        &self,
        other: &PyBandedOperator,
        rank_rtol: f64,
        psd_rtol: f64,
        residual_rtol: f64,
    ) -> PyResult<(bool, f64, f64)> {
        let tol = tolerance(rank_rtol, psd_rtol, residual_rtol)?;
        let out = qt_verify_equal(&self.inner, &other.inner, &tol);
        Ok((out.equal, out.symbol_residual, out.correction_residual))
    }

    /// n x n compression as a list of rows.
    fn truncate(&self, n: usize) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(matrix_to_rows(qt_truncate(&self.inner, n).map_err(to_py_err)?.matrix()))
    }

    /// Tries to falsify ||Xv|| >= c ||v|| on seeded random finitely
    /// supported vectors; returns (falsified, worst ratio, support of
    /// the worst sample).
    #[pyo3(signature = (c, trials=10_000, max_support=512, seed=0))]
    fn bounded_below_probe(
        &self,
        c: f64,
        trials: usize,
        max_support: usize,
        seed: u64,
    ) -> PyResult<(bool, f64, usize)> {
        let out = qt_bounded_below_probe(&self.inner, c, trials, max_support, seed)
            .map_err(to_py_err)?;
        Ok((out.falsified, out.worst_ratio, out.worst_support))
    }
}


#[pymodule]
fn posinorm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(analyze_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(certificate, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_dims_under_squaring, m)?)?;
    m.add_function(wrap_pyfunction!(range_angle, m)?)?;
    m.add_function(wrap_pyfunction!(jordan, m)?)?;
    m.add_function(wrap_pyfunction!(random_ep_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(shift_truncation, m)?)?;
    m.add_function(wrap_pyfunction!(toeplitz_corner, m)?)?;
    m.add_function(wrap_pyfunction!(family_truncation, m)?)?;
    m.add_function(wrap_pyfunction!(family_power_curves, m)?)?;
    m.add_class::<PyBandedOperator>()?;
    Ok(())
}
