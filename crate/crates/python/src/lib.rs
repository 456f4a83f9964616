//! Python bindings. Matrices travel as lists of rows, vectors as lists.

// Keyword-argument signatures mirror the Python API.
#![allow(clippy::too_many_arguments)]

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use randrisk::baselines;
use randrisk::oracle::{self, TruthSpec};
use randrisk::rand_est::{self, NoiseLevel};
use randrisk::selection::{self, DEFAULT_ENUMERATION_CAP};
use randrisk::{DVector, DesignMatrix, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidInput(_) | Error::InvalidParameter(_) | Error::UnsupportedRegime(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn vector(v: Vec<f64>) -> DVector<f64> {
    DVector::from_vec(v)
}

fn noise(sigma2: f64) -> PyResult<NoiseLevel> {
    NoiseLevel::known(sigma2).map_err(py_err)
}

/// Dense design matrix with cached column norms and Gram matrix.
#[pyclass(name = "Design", frozen)]
struct PyDesign(DesignMatrix);

#[pymethods]
impl PyDesign {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        DesignMatrix::from_rows(&rows).map(PyDesign).map_err(py_err)
    }

    /// Equicorrelated Gaussian design with columns scaled to length sqrt(n).
    #[staticmethod]
    fn equicorrelated(n: usize, p: usize, rho: f64, seed: u64) -> PyResult<Self> {
        randrisk::harness::gen_design(n, p, rho, seed).map(PyDesign).map_err(py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.nrows()
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.ncols()
    }

    fn column_norms(&self) -> Vec<f64> {
        self.0.column_norms().to_vec()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.0.nrows()).map(|i| self.0.row(i).iter().copied().collect()).collect()
    }

    fn __repr__(&self) -> String {
        format!("Design(n={}, p={})", self.0.nrows(), self.0.ncols())
    }
}

/// Model-selection rule with all tuning fixed.
#[pyclass(name = "Selector", frozen)]
struct PySelector(selection::Selector);

#[pymethods]
impl PySelector {
    #[staticmethod]
    fn lasso(lam: f64) -> PyResult<Self> {
        if !(lam >= 0.0 && lam.is_finite()) {
            return Err(PyValueError::new_err(format!("lambda must be >= 0, got {lam}")));
        }
        Ok(PySelector(selection::Selector::Lasso { lambda: lam }))
    }

    #[staticmethod]
    #[pyo3(signature = (k, cap=None))]
    fn best_subset(k: usize, cap: Option<u128>) -> Self {
        PySelector(selection::Selector::BestSubset {
            k,
            cap: cap.unwrap_or(DEFAULT_ENUMERATION_CAP),
        })
    }

    #[staticmethod]
    fn stepwise(k: usize) -> Self {
        PySelector(selection::Selector::ForwardStepwise { k })
    }

    /// Constant selector returning `indices` whatever the response.
    #[staticmethod]
    fn fixed(indices: Vec<usize>, p: usize) -> PyResult<Self> {
        let m = selection::Support::from_unsorted(indices, p).map_err(py_err)?;
        Ok(PySelector(selection::Selector::Fixed(m)))
    }

    fn select(&self, design: &PyDesign, y: Vec<f64>) -> PyResult<Vec<usize>> {
        self.0
            .select(&design.0, &vector(y))
            .map(|m| m.indices().to_vec())
            .map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Selector({:?})", self.0)
    }
}

/// Averaged randomized estimate with its per-draw values.
#[pyclass(name = "EstimateReport", frozen, get_all)]
struct PyEstimateReport {
    estimate: f64,
    per_draw: Vec<f64>,
    supports: Vec<Vec<usize>>,
    mc_se: f64,
    alpha: f64,
    sigma2: f64,
    n_draws: usize,
}

impl From<rand_est::EstimateReport> for PyEstimateReport {
    fn from(r: rand_est::EstimateReport) -> Self {
        Self {
            estimate: r.estimate,
            supports: r.supports.iter().map(|m| m.indices().to_vec()).collect(),
            per_draw: r.per_draw,
            mc_se: r.mc_se,
            alpha: r.alpha,
            sigma2: r.sigma2,
            n_draws: r.n_draws,
        }
    }
}

#[pymethods]
impl PyEstimateReport {
    fn __repr__(&self) -> String {
        format!(
            "EstimateReport(estimate={}, mc_se={}, n_draws={})",
            self.estimate, self.mc_se, self.n_draws
        )
    }
}

#[pyfunction]
fn default_alpha(n: usize) -> f64 {
    rand_est::default_alpha(n)
}

/// Randomized prediction-error estimate averaged over `n_draws` draws.
#[pyfunction]
#[pyo3(signature = (design, y, selector, sigma2, alpha=None, n_draws=50, seed=0))]
fn err_alpha(
    py: Python<'_>,
    design: &PyDesign,
    y: Vec<f64>,
    selector: &PySelector,
    sigma2: f64,
    alpha: Option<f64>,
    n_draws: usize,
    seed: u64,
) -> PyResult<PyEstimateReport> {
    let noise = noise(sigma2)?;
    let alpha = alpha.unwrap_or_else(|| rand_est::default_alpha(design.0.nrows()));
    let y = vector(y);
    py.detach(|| rand_est::err_alpha_averaged(&design.0, &y, alpha, &selector.0, &noise, n_draws, seed))
        .map(Into::into)
        .map_err(py_err)
}

/// Search degrees of freedom; returns `(df, rss, naive_df, bic)`.
#[pyfunction]
#[pyo3(signature = (design, y, selector, sigma2, alpha=None, n_draws=50, seed=0))]
fn search_df(
    py: Python<'_>,
    design: &PyDesign,
    y: Vec<f64>,
    selector: &PySelector,
    sigma2: f64,
    alpha: Option<f64>,
    n_draws: usize,
    seed: u64,
) -> PyResult<(f64, f64, usize, f64)> {
    let noise = noise(sigma2)?;
    let alpha = alpha.unwrap_or_else(|| rand_est::default_alpha(design.0.nrows()));
    let y = vector(y);
    let est = py
        .detach(|| rand_est::search_df(&design.0, &y, alpha, &selector.0, &noise, n_draws, seed))
        .map_err(py_err)?;
    let bic = rand_est::bic_from_parts(est.rss, est.df, y.len(), sigma2);
    Ok((est.df, est.rss, est.naive_df(), bic))
}

/// Penalty minimizing the randomized estimate; returns `(lambda, index, estimates)`.
#[pyfunction]
#[pyo3(signature = (design, y, grid, sigma2, alpha=None, n_draws=50, seed=0))]
fn tune_lambda(
    py: Python<'_>,
    design: &PyDesign,
    y: Vec<f64>,
    grid: Vec<f64>,
    sigma2: f64,
    alpha: Option<f64>,
    n_draws: usize,
    seed: u64,
) -> PyResult<(f64, usize, Vec<f64>)> {
    let noise = noise(sigma2)?;
    let alpha = alpha.unwrap_or_else(|| rand_est::default_alpha(design.0.nrows()));
    let y = vector(y);
    let t = py
        .detach(|| rand_est::tune_lambda(&design.0, &y, alpha, &grid, &noise, n_draws, seed))
        .map_err(py_err)?;
    Ok((t.lambda_optimal, t.best_index, t.reports.iter().map(|r| r.estimate).collect()))
}

#[pyfunction]
#[pyo3(signature = (design, sigma, n_mc=1000, seed=0))]
fn lambda_min(design: &PyDesign, sigma: f64, n_mc: usize, seed: u64) -> PyResult<(f64, f64)> {
    selection::lambda_min(&design.0, sigma, n_mc, seed)
        .map(|l| (l.value, l.se))
        .map_err(py_err)
}

#[pyfunction]
fn cp_estimate(design: &PyDesign, y: Vec<f64>, selector: &PySelector, sigma2: f64) -> PyResult<f64> {
    let y = vector(y);
    let m = selector.0.select(&design.0, &y).map_err(py_err)?;
    baselines::cp_estimate(&design.0, &y, &m, &noise(sigma2)?).map_err(py_err)
}

#[pyfunction]
fn loo_cv(py: Python<'_>, design: &PyDesign, y: Vec<f64>, selector: &PySelector) -> PyResult<f64> {
    let y = vector(y);
    py.detach(|| baselines::loo_cv(&design.0, &y, &selector.0)).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (design, y, selector, sigma2, replicates=200, seed=0))]
fn parametric_bootstrap(
    py: Python<'_>,
    design: &PyDesign,
    y: Vec<f64>,
    selector: &PySelector,
    sigma2: f64,
    replicates: usize,
    seed: u64,
) -> PyResult<f64> {
    let noise = noise(sigma2)?;
    let y = vector(y);
    py.detach(|| baselines::parametric_bootstrap(&design.0, &y, &selector.0, &noise, replicates, seed))
        .map(|b| b.estimate)
        .map_err(py_err)
}

/// OLS residual variance RSS / (n - p).
#[pyfunction]
fn sigma_ols(design: &PyDesign, y: Vec<f64>) -> PyResult<f64> {
    baselines::sigma_ols(&design.0, &vector(y)).map(|s| s.sigma2()).map_err(py_err)
}

/// Monte-Carlo prediction error `(mean, se)` for a known mean vector.
#[pyfunction]
#[pyo3(signature = (design, mu, sigma2, selector, replications=10_000, seed=0, alpha=None))]
fn mc_true_err(
    py: Python<'_>,
    design: &PyDesign,
    mu: Vec<f64>,
    sigma2: f64,
    selector: &PySelector,
    replications: usize,
    seed: u64,
    alpha: Option<f64>,
) -> PyResult<(f64, f64)> {
    let truth = TruthSpec::new(vector(mu), sigma2, replications, seed).map_err(py_err)?;
    py.detach(|| match alpha {
        Some(a) => oracle::mc_true_err_alpha(&design.0, &truth, &selector.0, a),
        None => oracle::mc_true_err(&design.0, &truth, &selector.0),
    })
    .map(|e| (e.mean, e.se))
    .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (design, mu, sigma2, selector, replications=10_000, seed=0))]
fn mc_true_df(
    py: Python<'_>,
    design: &PyDesign,
    mu: Vec<f64>,
    sigma2: f64,
    selector: &PySelector,
    replications: usize,
    seed: u64,
) -> PyResult<(f64, f64)> {
    let truth = TruthSpec::new(vector(mu), sigma2, replications, seed).map_err(py_err)?;
    py.detach(|| oracle::mc_true_df(&design.0, &truth, &selector.0))
        .map(|e| (e.mean, e.se))
        .map_err(py_err)
}

#[pymodule(name = "randrisk")]
fn randrisk_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDesign>()?;
    m.add_class::<PySelector>()?;
    m.add_class::<PyEstimateReport>()?;
    m.add_function(wrap_pyfunction!(default_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(err_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(search_df, m)?)?;
    m.add_function(wrap_pyfunction!(tune_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_min, m)?)?;
    m.add_function(wrap_pyfunction!(cp_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(loo_cv, m)?)?;
    m.add_function(wrap_pyfunction!(parametric_bootstrap, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_ols, m)?)?;
    m.add_function(wrap_pyfunction!(mc_true_err, m)?)?;
    m.add_function(wrap_pyfunction!(mc_true_df, m)?)?;
    Ok(())
}
