//! Synthetic designs and responses for the simulation studies.

use nalgebra::{DMatrix, DVector};

use crate::baselines::sigma_ols;
use crate::error::{Error, Result};
use crate::linalg::{DesignMatrix, Projection};
use crate::rng;
use crate::selection::Support;

/// Rows i.i.d. N(0, S) with unit variances and common correlation `rho`,
/// before any column scaling.
pub fn equicorrelated_rows(n: usize, p: usize, rho: f64, seed: u64) -> Result<DMatrix<f64>> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!("rho must lie in [0, 1), got {rho}")));
    }
    if n == 0 || p == 0 {
        return Err(Error::InvalidParameter("design dimensions must be positive".into()));
    }
    let mut g = rng::stream(seed);
    let shared = rho.sqrt();
    let own = (1.0 - rho).sqrt();
    let mut x = DMatrix::zeros(n, p);
    for i in 0..n {
        let common = rng::standard_normal_vector(&mut g, 1)[0];
        let z = rng::standard_normal_vector(&mut g, p);
        for j in 0..p {
            x[(i, j)] = shared * common + own * z[j];
        }
    }
    Ok(x)
}

/// Scale every column to Euclidean length `sqrt(n)`.
pub fn normalize_columns(x: &mut DMatrix<f64>) -> Result<()> {
    let target = (x.nrows() as f64).sqrt();
    for (j, mut col) in x.column_iter_mut().enumerate() {
        let norm = col.norm();
        if norm == 0.0 {
            return Err(Error::InvalidInput(format!("column {j} is identically zero")));
        }
        col *= target / norm;
    }
    Ok(())
}

/// Equicorrelated Gaussian design with columns scaled to length `sqrt(n)`.
pub fn gen_design(n: usize, p: usize, rho: f64, seed: u64) -> Result<DesignMatrix> {
    let mut x = equicorrelated_rows(n, p, rho, seed)?;
    normalize_columns(&mut x)?;
    DesignMatrix::new(x)
}

/// Unscaled i.i.d. standard normal design.
pub fn iid_gaussian_design(n: usize, p: usize, seed: u64) -> Result<DesignMatrix> {
    DesignMatrix::new(equicorrelated_rows(n, p, 0.0, seed)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticResponse {
    pub y: DVector<f64>,
    pub beta0: DVector<f64>,
    pub mu: DVector<f64>,
}

/// Sparse linear response: `beta0` has `s` leading entries equal to `snr`.
pub fn gen_response(x: &DesignMatrix, s: usize, snr: f64, sigma: f64, seed: u64) -> Result<SyntheticResponse> {
    if s > x.ncols() {
        return Err(Error::InvalidParameter(format!(
            "sparsity {s} exceeds the number of columns {}",
            x.ncols()
        )));
    }
    let beta0 = DVector::from_fn(x.ncols(), |j, _| if j < s { snr } else { 0.0 });
    response_from_beta(x, beta0, sigma, seed)
}

pub fn response_from_beta(x: &DesignMatrix, beta0: DVector<f64>, sigma: f64, seed: u64) -> Result<SyntheticResponse> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma must be >= 0, got {sigma}")));
    }
    if beta0.len() != x.ncols() {
        return Err(Error::InvalidInput("coefficient length does not match the design".into()));
    }
    let mu = x.matrix() * &beta0;
    let y = &mu + rng::normal_vector(&mut rng::stream(seed), x.nrows(), sigma);
    Ok(SyntheticResponse { y, beta0, mu })
}

pub const DIABETES_ROWS: usize = 442;
pub const DIABETES_COLUMNS: usize = 64;

/// 64-column stand-in for the expanded diabetes predictors: ten base
/// variables (the second one binary), their 45 pairwise products and the
/// squares of the nine continuous ones. Columns are centered and scaled to
/// length `sqrt(n)`.
pub fn diabetes_like_design(n: usize, seed: u64) -> Result<DesignMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two rows".into()));
    }
    let mut base = equicorrelated_rows(n, 10, 0.3, seed)?;
    for i in 0..n {
        base[(i, 1)] = if base[(i, 1)] >= 0.0 { 1.0 } else { -1.0 };
    }
    let mut cols: Vec<DVector<f64>> = (0..10).map(|j| base.column(j).into_owned()).collect();
    for a in 0..10 {
        for b in a + 1..10 {
            cols.push(base.column(a).component_mul(&base.column(b)));
        }
    }
    for a in (0..10).filter(|&a| a != 1) {
        cols.push(base.column(a).map(|v| v * v));
    }
    let mut x = DMatrix::from_columns(&cols);
    for mut col in x.column_iter_mut() {
        let mean = col.mean();
        col.add_scalar_mut(-mean);
    }
    normalize_columns(&mut x)?;
    DesignMatrix::new(x)
}

/// A pilot response for the stand-in design: strong main effects, a few
/// interactions, plus Gaussian noise with standard deviation 4.
pub fn diabetes_like_pilot(x: &DesignMatrix, seed: u64) -> Result<DVector<f64>> {
    let p = x.ncols();
    let beta = DVector::from_fn(p, |j, _| match j {
        0..=9 => [4.0, -2.0, 6.0, 3.0, -1.5, 0.0, -2.5, 1.0, 5.0, 1.5][j],
        10..=14 => 0.8,
        _ => 0.0,
    });
    Ok(response_from_beta(x, beta, 4.0, seed)?.y)
}

/// Mean and noise variance from an OLS fit of a pilot response.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotTruth {
    pub beta: DVector<f64>,
    pub mu: DVector<f64>,
    pub sigma2: f64,
}

pub fn pilot_truth(x: &DesignMatrix, y: &DVector<f64>) -> Result<PilotTruth> {
    let noise = sigma_ols(x, y)?;
    let proj = Projection::new(x, &Support::full(x.ncols()))?;
    let beta = proj.coefficients(y);
    let mu = x.matrix() * &beta;
    Ok(PilotTruth {
        beta,
        mu,
        sigma2: noise.sigma2(),
    })
}
