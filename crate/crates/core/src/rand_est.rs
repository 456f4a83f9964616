//! Additive randomization and the prediction-error estimators built on it.
//!
//! Selection runs on `y* = y + w` with `w ~ N(0, alpha sigma^2 I)`. The vector
//! `y- = y - w / alpha` is independent of `y*`, so it acts as a held-out copy
//! of the response:
//!
//! ```text
//! err_alpha = ||y- - H_M y||^2 + 2 tr(H_M) sigma^2 - n sigma^2 / alpha,  M = M(y*)
//! ```
//!
//! is unbiased for the prediction error of the rule that selects on `y*`,
//! both marginally and conditionally on the selected model. Averaging over
//! draws of `w` keeps the expectation and lowers the variance.
//!
//! Single-draw values can be negative; they are never clamped.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{mean_and_se, DesignMatrix, Projection};
use crate::rng;
use crate::selection::{Selector, Support};

/// Upper end of the accepted randomization scale.
pub const MAX_ALPHA: f64 = 1e4;
pub const DEFAULT_DRAWS: usize = 50;

/// Where a noise variance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseSource {
    UserSupplied,
    OlsResidual,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseLevel {
    sigma2: f64,
    source: NoiseSource,
}

impl NoiseLevel {
    pub fn new(sigma2: f64, source: NoiseSource) -> Result<Self> {
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "noise variance must be positive and finite, got {sigma2}"
            )));
        }
        Ok(Self { sigma2, source })
    }

    pub fn known(sigma2: f64) -> Result<Self> {
        Self::new(sigma2, NoiseSource::UserSupplied)
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    pub fn source(&self) -> NoiseSource {
        self.source
    }
}

/// One draw of the randomization together with the derived vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomizedPair {
    pub omega: DVector<f64>,
    pub y_star: DVector<f64>,
    pub y_minus: DVector<f64>,
    pub alpha: f64,
}

impl RandomizedPair {
    /// Builds the pair from an explicit perturbation.
    pub fn from_omega(y: &DVector<f64>, omega: DVector<f64>, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if omega.len() != y.len() {
            return Err(Error::InvalidInput(format!(
                "perturbation has length {} but the response has {}",
                omega.len(),
                y.len()
            )));
        }
        let y_star = y + &omega;
        let y_minus = y - &omega / alpha;
        Ok(Self {
            omega,
            y_star,
            y_minus,
            alpha,
        })
    }

    /// `y* / (1 + alpha) + alpha y- / (1 + alpha)`, which equals `y`.
    pub fn reconstruct(&self) -> DVector<f64> {
        let a = self.alpha;
        &self.y_star / (1.0 + a) + &self.y_minus * (a / (1.0 + a))
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= MAX_ALPHA) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, {MAX_ALPHA}], got {alpha}"
        )));
    }
    Ok(())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma must be > 0, got {sigma}")));
    }
    Ok(())
}

/// Draws `omega ~ N(0, alpha sigma^2 I)` from the stream keyed by `seed`.
pub fn randomize(y: &DVector<f64>, alpha: f64, sigma: f64, seed: u64) -> Result<RandomizedPair> {
    check_alpha(alpha)?;
    check_sigma(sigma)?;
    let omega = rng::normal_vector(&mut rng::stream(seed), y.len(), (alpha).sqrt() * sigma);
    RandomizedPair::from_omega(y, omega, alpha)
}

/// `n^{-1/4}`, the rate that balances the bias and variance of the estimator.
pub fn default_alpha(n: usize) -> f64 {
    (n as f64).powf(-0.25)
}

/// Prediction-error estimates from N randomizations.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    /// Mean of `per_draw`, on the total (sum over n observations) scale.
    pub estimate: f64,
    pub per_draw: Vec<f64>,
    pub n_draws: usize,
    pub alpha: f64,
    pub sigma2: f64,
    pub supports: Vec<Support>,
    /// Standard error of `estimate` across draws; 0 when `n_draws == 1`.
    pub mc_se: f64,
    pub n_obs: usize,
}

impl EstimateReport {
    fn from_draws(values: Vec<(f64, Support)>, alpha: f64, sigma2: f64, n_obs: usize) -> Self {
        let (per_draw, supports): (Vec<f64>, Vec<Support>) = values.into_iter().unzip();
        let (estimate, mc_se) = mean_and_se(&per_draw);
        Self {
            estimate,
            n_draws: per_draw.len(),
            per_draw,
            alpha,
            sigma2,
            supports,
            mc_se,
            n_obs,
        }
    }

    /// Estimate divided by the number of observations.
    pub fn per_observation(&self) -> f64 {
        self.estimate / self.n_obs as f64
    }
}

/// Single-randomization estimate; selects on `pair.y_star`.
pub fn err_alpha_single(
    x: &DesignMatrix,
    y: &DVector<f64>,
    pair: &RandomizedPair,
    selector: &Selector,
    noise: &NoiseLevel,
) -> Result<(f64, Support)> {
    x.check_response(y)?;
    check_alpha(pair.alpha)?;
    if pair.y_star.len() != y.len() {
        return Err(Error::InvalidInput("randomized pair does not match the response".into()));
    }
    let proj = selector.select_projection(x, &pair.y_star)?;
    let n = y.len() as f64;
    let s2 = noise.sigma2();
    let resid = &pair.y_minus - proj.apply(y);
    let value = resid.norm_squared() + 2.0 * proj.trace() * s2 - n * s2 / pair.alpha;
    Ok((value, proj.support().clone()))
}

fn check_draws(n_draws: usize) -> Result<()> {
    if n_draws == 0 {
        return Err(Error::InvalidParameter("at least one randomization draw is required".into()));
    }
    Ok(())
}

/// Averaged estimator over `n_draws` randomizations. Draw `i` uses the seed
/// `derive_seed(seed, i)`; draws may run in parallel and are summed in index
/// order.
pub fn err_alpha_averaged(
    x: &DesignMatrix,
    y: &DVector<f64>,
    alpha: f64,
    selector: &Selector,
    noise: &NoiseLevel,
    n_draws: usize,
    seed: u64,
) -> Result<EstimateReport> {
    check_alpha(alpha)?;
    check_draws(n_draws)?;
    let values = (0..n_draws)
        .into_par_iter()
        .map(|i| {
            let pair = randomize(y, alpha, noise.sigma(), rng::derive_seed(seed, i as u64))?;
            err_alpha_single(x, y, &pair, selector, noise).map_err(|e| e.in_draw(i))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EstimateReport::from_draws(values, alpha, noise.sigma2(), y.len()))
}

/// Averaged estimator over caller-supplied perturbations.
pub fn err_alpha_from_omegas(
    x: &DesignMatrix,
    y: &DVector<f64>,
    alpha: f64,
    selector: &Selector,
    noise: &NoiseLevel,
    omegas: &[DVector<f64>],
) -> Result<EstimateReport> {
    check_alpha(alpha)?;
    check_draws(omegas.len())?;
    let values = omegas
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let pair = RandomizedPair::from_omega(y, w.clone(), alpha).map_err(|e| e.in_draw(i))?;
            err_alpha_single(x, y, &pair, selector, noise).map_err(|e| e.in_draw(i))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EstimateReport::from_draws(values, alpha, noise.sigma2(), y.len()))
}

/// Search degrees of freedom, `(Err_alpha^(I) - ||y - mu_hat||^2) / (2 sigma^2)`,
/// where `mu_hat` is the relaxed fit on the model selected from `y` itself.
///
/// The optimism `Err - E||y - mu_hat||^2` equals `2 sigma^2 df`, hence the
/// factor of two; a fixed model recovers `tr(H) = |M|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DfEstimate {
    pub df: f64,
    pub rss: f64,
    pub support: Support,
    pub report: EstimateReport,
}

impl DfEstimate {
    /// |M(y)|, the degrees of freedom that ignore the search.
    pub fn naive_df(&self) -> usize {
        self.support.len()
    }
}

pub fn search_df(
    x: &DesignMatrix,
    y: &DVector<f64>,
    alpha: f64,
    selector: &Selector,
    noise: &NoiseLevel,
    n_draws: usize,
    seed: u64,
) -> Result<DfEstimate> {
    let proj = selector.select_projection(x, y)?;
    let rss = (y - proj.apply(y)).norm_squared();
    let report = err_alpha_averaged(x, y, alpha, selector, noise, n_draws, seed)?;
    Ok(DfEstimate {
        df: (report.estimate - rss) / (2.0 * noise.sigma2()),
        rss,
        support: proj.support().clone(),
        report,
    })
}

/// `rss / (n sigma^2) + (log n / n) df`.
pub fn bic_from_parts(rss: f64, df: f64, n: usize, sigma2: f64) -> f64 {
    let n = n as f64;
    rss / (n * sigma2) + n.ln() / n * df
}

pub fn bic_criterion(
    x: &DesignMatrix,
    y: &DVector<f64>,
    alpha: f64,
    selector: &Selector,
    noise: &NoiseLevel,
    n_draws: usize,
    seed: u64,
) -> Result<f64> {
    let est = search_df(x, y, alpha, selector, noise, n_draws, seed)?;
    Ok(bic_from_parts(est.rss, est.df, y.len(), noise.sigma2()))
}

#[derive(Debug, Clone)]
pub struct LambdaTuning {
    pub lambda_optimal: f64,
    pub best_index: usize,
    pub reports: Vec<EstimateReport>,
}

/// Grid minimizer of the averaged estimator for the relaxed Lasso. Every grid
/// point reuses the same randomization draws. Ties resolve to the earliest
/// grid entry.
pub fn tune_lambda(
    x: &DesignMatrix,
    y: &DVector<f64>,
    alpha: f64,
    lambda_grid: &[f64],
    noise: &NoiseLevel,
    n_draws: usize,
    seed: u64,
) -> Result<LambdaTuning> {
    if lambda_grid.is_empty() {
        return Err(Error::InvalidParameter("lambda grid is empty".into()));
    }
    let reports = lambda_grid
        .iter()
        .map(|&lambda| {
            if !(lambda >= 0.0 && lambda.is_finite()) {
                return Err(Error::InvalidParameter(format!("grid lambda must be >= 0, got {lambda}")));
            }
            err_alpha_averaged(x, y, alpha, &Selector::Lasso { lambda }, noise, n_draws, seed)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best_index = 0;
    for (i, r) in reports.iter().enumerate() {
        if r.estimate < reports[best_index].estimate {
            best_index = i;
        }
    }
    Ok(LambdaTuning {
        lambda_optimal: lambda_grid[best_index],
        best_index,
        reports,
    })
}

/// Out-of-sample estimator for a linear mean in the low-dimensional regime:
///
/// ```text
/// ||H0 y- - H_M y||^2 + 2 tr(H0^T H_M) sigma^2 + n sigma^2 - tr(H0^T H0)(1 + 1/alpha) sigma^2
/// ```
///
/// with `H0 = X_new (X^T X)^{-1} X^T` and `H_M = X_new,M (X_M^T X_M)^{-1} X_M^T`.
#[allow(clippy::too_many_arguments)]
pub fn err_out_alpha(
    x: &DesignMatrix,
    x_new: &DesignMatrix,
    y: &DVector<f64>,
    alpha: f64,
    selector: &Selector,
    noise: &NoiseLevel,
    n_draws: usize,
    seed: u64,
) -> Result<EstimateReport> {
    x.check_response(y)?;
    check_alpha(alpha)?;
    check_draws(n_draws)?;
    let (n, p) = (x.nrows(), x.ncols());
    if p >= n {
        return Err(Error::UnsupportedRegime(format!(
            "out-of-sample estimation needs p < n, got p = {p}, n = {n}"
        )));
    }
    if x_new.nrows() != n || x_new.ncols() != p {
        return Err(Error::InvalidInput(format!(
            "new design must be {n}x{p}, got {}x{}",
            x_new.nrows(),
            x_new.ncols()
        )));
    }
    let full = Projection::new(x, &Support::full(p)).map_err(|_| {
        Error::UnsupportedRegime("out-of-sample estimation needs a full-rank design".into())
    })?;
    let h0: DMatrix<f64> = x_new.matrix() * full.coefficient_map();
    let tr_h0h0 = h0.norm_squared();
    let s2 = noise.sigma2();
    let nf = n as f64;

    let values = (0..n_draws)
        .into_par_iter()
        .map(|i| {
            let run = || -> Result<(f64, Support)> {
                let pair = randomize(y, alpha, noise.sigma(), rng::derive_seed(seed, i as u64))?;
                let proj = selector.select_projection(x, &pair.y_star)?;
                let hm = x_new.columns(proj.support()) * proj.coefficient_map();
                let resid = &h0 * &pair.y_minus - &hm * y;
                let cross = h0.component_mul(&hm).sum();
                let value = resid.norm_squared() + 2.0 * cross * s2 + nf * s2
                    - tr_h0h0 * (1.0 + 1.0 / alpha) * s2;
                Ok((value, proj.support().clone()))
            };
            run().map_err(|e| e.in_draw(i))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EstimateReport::from_draws(values, alpha, s2, n))
}
