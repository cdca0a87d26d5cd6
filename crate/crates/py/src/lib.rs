//! Python bindings: models, sequence generation, dimension estimates and the
//! series route to the codimension.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use slowfast::dimension::{default_snap_threshold, formula_estimate_by};
use slowfast::series::{self as ser, SeriesCodimension};
use slowfast::{
    ClassicalLienardModel, CodimensionVerdict, Error, FractalSequence, JIndex, Method, NormalFormModel,
    SequenceConfig, SlowFastModel, TruncatedSeries, TwoStrokeModel,
};

fn py_err(e: Error) -> PyErr {
    if e.is_model_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyArithmeticError::new_err(e.to_string())
    }
}

/// A slow-fast contact point family at the singular limit.
#[pyclass(name = "Model", module = "slowfast", frozen)]
pub struct PyModel {
    inner: Box<dyn SlowFastModel>,
}

#[pymethods]
impl PyModel {
    /// Classical Liénard model with `F(x) = x^2 + a x^(2j+3)`.
    #[staticmethod]
    #[pyo3(signature = (j, a=1.0))]
    fn lienard(j: u32, a: f64) -> PyResult<Self> {
        Ok(Self { inner: Box::new(ClassicalLienardModel::new(j, a).map_err(py_err)?) })
    }

    #[staticmethod]
    #[pyo3(signature = (n=2, m=1, j=0, alpha=1.0, beta=1.0))]
    fn normal_form(n: u32, m: u32, j: u32, alpha: f64, beta: f64) -> PyResult<Self> {
        Ok(Self { inner: Box::new(NormalFormModel::new(n, m, j, alpha, beta).map_err(py_err)?) })
    }

    #[staticmethod]
    #[pyo3(signature = (alpha=1.0, delta=1.0, gamma=1.0))]
    fn two_stroke(alpha: f64, delta: f64, gamma: f64) -> PyResult<Self> {
        Ok(Self { inner: Box::new(TwoStrokeModel::new(alpha, delta, gamma).map_err(py_err)?) })
    }

    #[getter]
    fn contact_order(&self) -> u32 {
        self.inner.contact_order()
    }

    #[getter]
    fn max_height(&self) -> f64 {
        self.inner.max_height()
    }

    fn omega_limit(&self, h: f64) -> PyResult<f64> {
        self.inner.omega_limit(h).map_err(py_err)
    }

    fn alpha_limit(&self, h: f64) -> PyResult<f64> {
        self.inner.alpha_limit(h).map_err(py_err)
    }

    /// Slow divergence integral from the entry height to the exit height.
    fn sdi(&self, h_entry: f64, h_exit: f64) -> PyResult<f64> {
        self.inner.sdi(h_entry, h_exit).map_err(py_err)
    }

    fn sdi_diagonal(&self, h: f64) -> PyResult<f64> {
        self.inner.sdi_diagonal(h).map_err(py_err)
    }

    /// `"entry-solved"` or `"exit-solved"`.
    fn orientation(&self, h: f64) -> PyResult<String> {
        slowfast::orientation(self.inner.as_ref(), h).map(|o| o.to_string()).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Model({})", self.inner.describe())
    }
}

/// A decreasing sequence of heights produced by the entry-exit relation.
#[pyclass(name = "Sequence", module = "slowfast", frozen)]
pub struct PySequence {
    inner: FractalSequence,
}

#[pymethods]
impl PySequence {
    #[new]
    fn new(heights: Vec<f64>) -> PyResult<Self> {
        Ok(Self { inner: FractalSequence::from_heights(heights).map_err(py_err)? })
    }

    #[getter]
    fn heights(&self) -> Vec<f64> {
        self.inner.heights().to_vec()
    }

    #[getter]
    fn gaps(&self) -> Vec<f64> {
        self.inner.gaps().to_vec()
    }

    #[getter]
    fn residuals(&self) -> Vec<f64> {
        self.inner.residuals().to_vec()
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.inner.iterations()
    }

    #[getter]
    fn truncated_early(&self) -> bool {
        self.inner.truncated_early()
    }

    #[getter]
    fn stop_reason(&self) -> Option<String> {
        self.inner.stop_reason().map(String::from)
    }

    #[getter]
    fn orientation(&self) -> Option<String> {
        self.inner.orientation().map(|o| o.to_string())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Dimension estimate by `"cahen"`, `"borel"` or `"tailnucleus"`.
    #[pyo3(signature = (method="tailnucleus"))]
    fn dimension(&self, method: &str) -> PyResult<f64> {
        Ok(self.estimate(method)?.0)
    }

    /// Final value and the per-index trace `[(k, value), ...]`.
    #[pyo3(signature = (method="tailnucleus"))]
    fn estimate(&self, method: &str) -> PyResult<(f64, Vec<(usize, f64)>)> {
        let method: Method = method.parse().map_err(py_err)?;
        if !Method::FORMULAS.contains(&method) {
            return Err(PyValueError::new_err(format!("'{method}' is not a formula estimator")));
        }
        let e = formula_estimate_by(&self.inner, method).map_err(py_err)?;
        Ok((e.final_value, e.per_k))
    }

    fn __repr__(&self) -> String {
        format!("Sequence(len={})", self.inner.len())
    }
}

#[pyfunction]
#[pyo3(signature = (model, h0, iterations, root_tol=None, min_height=None))]
fn generate_sequence(
    model: &PyModel,
    h0: f64,
    iterations: usize,
    root_tol: Option<f64>,
    min_height: Option<f64>,
) -> PyResult<PySequence> {
    let mut cfg = SequenceConfig::new(h0, iterations);
    if let Some(t) = root_tol {
        cfg.root_tol = t;
    }
    if let Some(m) = min_height {
        cfg.min_height = m;
    }
    let inner = slowfast::generate_sequence(model.inner.as_ref(), &cfg).map_err(py_err)?;
    Ok(PySequence { inner })
}

/// `(n + 2j) / (n + 2j + 1)`, or 1 for `j=None`.
#[pyfunction]
#[pyo3(signature = (n, j=None))]
fn theoretical_dimension(n: u32, j: Option<u32>) -> f64 {
    slowfast::theoretical_dimension(n, j.map_or(JIndex::Infinite, JIndex::Finite))
}

#[pyfunction]
fn chirp_theoretical_dimension(n: u32, j: u32) -> f64 {
    slowfast::chirp_theoretical_dimension(n, j)
}

/// Snaps a dimension estimate to the nearest admissible value for contact order `n`.
#[pyfunction]
#[pyo3(signature = (n, dimension, threshold=None))]
fn codimension_from_dimension<'py>(
    py: Python<'py>,
    n: u32,
    dimension: f64,
    threshold: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let r = slowfast::codimension_from_dimension(n, dimension, threshold.unwrap_or_else(|| default_snap_threshold(n)));
    let d = PyDict::new(py);
    match r.verdict {
        CodimensionVerdict::Finite { j, codimension } => {
            d.set_item("j", j)?;
            d.set_item("codimension", codimension)?;
        }
        CodimensionVerdict::Infinite => {
            d.set_item("j", py.None())?;
            d.set_item("codimension", "inf")?;
        }
        CodimensionVerdict::Unresolved { .. } => {
            d.set_item("j", py.None())?;
            d.set_item("codimension", "unresolved")?;
        }
    }
    d.set_item("snap_distance", r.snap_distance)?;
    Ok(d)
}

fn series(coeffs: &[f64], order: usize) -> TruncatedSeries {
    TruncatedSeries::new(coeffs, order)
}

/// Coefficients of `Psi(x) = x sqrt(1 - x h1(x))`.
#[pyfunction]
#[pyo3(signature = (h1, order=ser::DEFAULT_ORDER))]
fn psi_from_h1(h1: Vec<f64>, order: usize) -> PyResult<Vec<f64>> {
    Ok(ser::psi_from_h1(&series(&h1, order)).map_err(py_err)?.coeffs().to_vec())
}

/// Compositional inverse of `x + c2 x^2 + ...`.
#[pyfunction]
fn series_inverse(coeffs: Vec<f64>) -> PyResult<Vec<f64>> {
    if coeffs.is_empty() {
        return Err(PyValueError::new_err("empty coefficient list"));
    }
    let s = series(&coeffs, coeffs.len() - 1);
    Ok(ser::series_invert(&s).map_err(py_err)?.coeffs().to_vec())
}

/// Coefficients of the slow dynamics `g(X) = -Psi^-1(X) (Psi^-1)'(X)`.
#[pyfunction]
#[pyo3(signature = (h1, order=ser::DEFAULT_ORDER))]
fn slow_dynamics(h1: Vec<f64>, order: usize) -> PyResult<Vec<f64>> {
    Ok(ser::g_from_h1(&series(&h1, order)).map_err(py_err)?.coeffs().to_vec())
}

/// Codimension of the Liénard slow-fast Hopf point with the given `h1`.
#[pyfunction]
#[pyo3(signature = (h1, order=ser::DEFAULT_ORDER))]
fn codimension_from_h1<'py>(py: Python<'py>, h1: Vec<f64>, order: usize) -> PyResult<Bound<'py, PyDict>> {
    let g = ser::g_from_h1(&series(&h1, order)).map_err(py_err)?;
    let d = PyDict::new(py);
    match ser::codimension_from_series(&g).map_err(py_err)? {
        SeriesCodimension::Finite { j, alpha, codimension } => {
            d.set_item("j", j)?;
            d.set_item("codimension", codimension)?;
            d.set_item("alpha", alpha)?;
        }
        SeriesCodimension::InfiniteUpTo { order } => {
            d.set_item("j", py.None())?;
            d.set_item("codimension", "inf")?;
            d.set_item("checked_order", order)?;
        }
    }
    Ok(d)
}

#[pymodule]
#[pyo3(name = "slowfast")]
fn slowfast_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_class::<PySequence>()?;
    m.add_function(wrap_pyfunction!(generate_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(theoretical_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(chirp_theoretical_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(codimension_from_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(psi_from_h1, m)?)?;
    m.add_function(wrap_pyfunction!(series_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(slow_dynamics, m)?)?;
    m.add_function(wrap_pyfunction!(codimension_from_h1, m)?)?;
    Ok(())
}
