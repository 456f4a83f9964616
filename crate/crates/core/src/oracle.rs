//! Monte-Carlo ground truth for known `(mu, sigma^2)`, and closed-form
//! variance formulas used as numeric checks.
//!
//! Truth runs replace the fresh response by the identity
//! `E ||y_new - v||^2 = ||mu - v||^2 + n sigma^2`, which is exact under the
//! Gaussian model and removes one source of simulation noise.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{mean_and_se, DesignMatrix};
use crate::rand_est::check_alpha;
use crate::rng;
use crate::selection::Selector;

pub const DEFAULT_TRUTH_REPLICATIONS: usize = 10_000;

/// Known mean and noise level plus the replication budget.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthSpec {
    pub mu: DVector<f64>,
    pub sigma2: f64,
    pub replications: usize,
    pub seed: u64,
}

impl TruthSpec {
    pub fn new(mu: DVector<f64>, sigma2: f64, replications: usize, seed: u64) -> Result<Self> {
        let spec = Self {
            mu,
            sigma2,
            replications,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications < 2 {
            return Err(Error::InvalidParameter("truth needs at least two replications".into()));
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma2 must be > 0, got {}", self.sigma2)));
        }
        if self.mu.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("mu contains non-finite values".into()));
        }
        Ok(())
    }

    /// Response for replicate `r`.
    pub fn response(&self, r: usize) -> DVector<f64> {
        let mut g = rng::stream(rng::derive_seed(self.seed, r as u64));
        &self.mu + rng::normal_vector(&mut g, self.mu.len(), self.sigma2.sqrt())
    }

    fn check_design(&self, x: &DesignMatrix) -> Result<()> {
        self.validate()?;
        if self.mu.len() != x.nrows() {
            return Err(Error::InvalidInput(format!(
                "mu has length {} but the design has {} rows",
                self.mu.len(),
                x.nrows()
            )));
        }
        Ok(())
    }
}

/// Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub se: f64,
}

impl McEstimate {
    pub fn from_values(values: &[f64]) -> Self {
        let (mean, se) = mean_and_se(values);
        Self { mean, se }
    }
}

fn replicate_values<F>(truth: &TruthSpec, f: F) -> Result<Vec<f64>>
where
    F: Fn(usize, DVector<f64>) -> Result<f64> + Sync,
{
    (0..truth.replications)
        .into_par_iter()
        .map(|r| f(r, truth.response(r)).map_err(|e| e.in_replicate(r)))
        .collect()
}

fn omega_for(truth: &TruthSpec, r: usize, alpha: f64) -> DVector<f64> {
    // Separate stream from the one that draws y.
    let mut g = rng::stream(rng::derive_path(truth.seed, &[r as u64, 1]));
    rng::normal_vector(&mut g, truth.mu.len(), (alpha * truth.sigma2).sqrt())
}

/// `Err = E ||y_new - H_{M(y)} y||^2`.
pub fn mc_true_err(x: &DesignMatrix, truth: &TruthSpec, selector: &Selector) -> Result<McEstimate> {
    truth.check_design(x)?;
    let noise = x.nrows() as f64 * truth.sigma2;
    let values = replicate_values(truth, |_, y| {
        let proj = selector.select_projection(x, &y)?;
        Ok((&truth.mu - proj.apply(&y)).norm_squared() + noise)
    })?;
    Ok(McEstimate::from_values(&values))
}

/// `Err_alpha = E ||y_new - H_{M(y + w)} y||^2`, averaged over `(y, w)`.
pub fn mc_true_err_alpha(
    x: &DesignMatrix,
    truth: &TruthSpec,
    selector: &Selector,
    alpha: f64,
) -> Result<McEstimate> {
    truth.check_design(x)?;
    check_alpha(alpha)?;
    let noise = x.nrows() as f64 * truth.sigma2;
    let values = replicate_values(truth, |r, y| {
        let y_star = &y + omega_for(truth, r, alpha);
        let proj = selector.select_projection(x, &y_star)?;
        Ok((&truth.mu - proj.apply(&y)).norm_squared() + noise)
    })?;
    Ok(McEstimate::from_values(&values))
}

/// `df = sigma^-2 sum_i Cov(mu_hat_i(y), y_i)`, estimated from replicate values
/// `(mu_hat - mu)^T (y - mu) / sigma^2`.
pub fn mc_true_df(x: &DesignMatrix, truth: &TruthSpec, selector: &Selector) -> Result<McEstimate> {
    truth.check_design(x)?;
    let values = replicate_values(truth, |_, y| {
        let proj = selector.select_projection(x, &y)?;
        let fit = proj.apply(&y);
        Ok((fit - &truth.mu).dot(&(&y - &truth.mu)) / truth.sigma2)
    })?;
    Ok(McEstimate::from_values(&values))
}

/// `Err_out = E ||mu_new - X_new,M beta_M(y)||^2 + n sigma^2`, with selection
/// on `y + w` when `alpha` is given.
pub fn mc_true_err_out(
    x: &DesignMatrix,
    x_new: &DesignMatrix,
    mu_new: &DVector<f64>,
    truth: &TruthSpec,
    selector: &Selector,
    alpha: Option<f64>,
) -> Result<McEstimate> {
    truth.check_design(x)?;
    if x_new.ncols() != x.ncols() || mu_new.len() != x_new.nrows() {
        return Err(Error::InvalidInput("new design and mean do not conform".into()));
    }
    if let Some(a) = alpha {
        check_alpha(a)?;
    }
    let noise = x_new.nrows() as f64 * truth.sigma2;
    let values = replicate_values(truth, |r, y| {
        let y_sel = match alpha {
            Some(a) => &y + omega_for(truth, r, a),
            None => y.clone(),
        };
        let proj = selector.select_projection(x, &y_sel)?;
        let pred = x_new.columns(proj.support()) * proj.coefficients(&y);
        Ok((mu_new - pred).norm_squared() + noise)
    })?;
    Ok(McEstimate::from_values(&values))
}

fn is_symmetric(a: &DMatrix<f64>, tol: f64) -> bool {
    a.is_square() && (a - a.transpose()).amax() <= tol * a.amax().max(1.0)
}

/// Empirical variance of `||A Z||^2` for `Z ~ N(0, I)` next to `2 tr(A^4)`.
///
/// Restricted to symmetric `A`; for general `A` the constant is
/// `2 tr((A^T A)^2)`.
pub fn quadratic_variance_check(a: &DMatrix<f64>, n_mc: usize, seed: u64) -> Result<(f64, f64)> {
    if !is_symmetric(a, 1e-12) {
        return Err(Error::InvalidInput("matrix must be square and symmetric".into()));
    }
    if n_mc < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let n = a.nrows();
    const CHUNK: usize = 10_000;
    let chunks = n_mc.div_ceil(CHUNK);
    let values: Vec<f64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut g = rng::stream(rng::derive_seed(seed, c as u64));
            let len = CHUNK.min(n_mc - c * CHUNK);
            (0..len)
                .map(|_| (a * rng::standard_normal_vector(&mut g, n)).norm_squared())
                .collect::<Vec<_>>()
        })
        .collect();
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let a2 = a * a;
    let analytic = 2.0 * (&a2 * &a2).trace();
    Ok((var, analytic))
}

/// `Var[Cp] = 2 tr(I - H) sigma^4 + 4 ||(I - H) mu||^2 sigma^2` for a fixed
/// projection `H`.
pub fn cp_variance_analytic(h: &DMatrix<f64>, mu: &DVector<f64>, sigma2: f64) -> Result<f64> {
    if !is_symmetric(h, 1e-8) || (h * h - h).amax() > 1e-8 {
        return Err(Error::InvalidInput("H must be a symmetric idempotent matrix".into()));
    }
    if mu.len() != h.nrows() {
        return Err(Error::InvalidInput("mu does not conform with H".into()));
    }
    let n = h.nrows() as f64;
    let resid = mu - h * mu;
    Ok(2.0 * (n - h.trace()) * sigma2 * sigma2 + 4.0 * resid.norm_squared() * sigma2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cp_variance_endpoints() {
        let n = 6;
        let mu = DVector::from_fn(n, |i, _| i as f64);
        assert_relative_eq!(cp_variance_analytic(&DMatrix::identity(n, n), &mu, 2.0).unwrap(), 0.0, epsilon = 1e-12);
        let zero = DMatrix::zeros(n, n);
        assert_relative_eq!(
            cp_variance_analytic(&zero, &DVector::zeros(n), 2.0).unwrap(),
            2.0 * n as f64 * 4.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn rejects_non_projection() {
        let h = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(cp_variance_analytic(&h, &DVector::zeros(2), 1.0).is_err());
        assert!(quadratic_variance_check(&h, 100, 0).is_err());
    }

    #[test]
    fn truth_spec_validation() {
        assert!(TruthSpec::new(DVector::zeros(3), 1.0, 1, 0).is_err());
        assert!(TruthSpec::new(DVector::zeros(3), 0.0, 10, 0).is_err());
        assert!(TruthSpec::new(DVector::from_element(3, f64::NAN), 1.0, 10, 0).is_err());
    }

    #[test]
    fn diagonal_quadratic_form() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.5, 2.0]));
        let (_, analytic) = quadratic_variance_check(&a, 10, 0).unwrap();
        assert_relative_eq!(analytic, 2.0 * (1.0 + 0.0625 + 16.0), epsilon = 1e-12);
    }
}
