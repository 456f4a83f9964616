//! Reference estimators: post-selection Cp, leave-one-out cross-validation,
//! the parametric bootstrap covariance penalty, naive degrees of freedom and
//! the OLS noise estimate.

use nalgebra::DVector;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{DesignMatrix, Projection};
use crate::rand_est::{NoiseLevel, NoiseSource};
use crate::rng;
use crate::selection::{Selector, Support};

pub const DEFAULT_BOOTSTRAP: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineKind {
    Cp,
    LooCv,
    ParametricBootstrap,
    NaiveDf,
}

/// `||y - H_M y||^2 + 2 tr(H_M) sigma^2`.
///
/// Applied with `M` selected from `y` this ignores the search and is biased
/// downward; for a data-independent `M` it is unbiased.
pub fn cp_estimate(x: &DesignMatrix, y: &DVector<f64>, m: &Support, noise: &NoiseLevel) -> Result<f64> {
    x.check_response(y)?;
    let proj = Projection::new(x, m)?;
    Ok((y - proj.apply(y)).norm_squared() + 2.0 * proj.trace() * noise.sigma2())
}

/// Leave-one-out squared prediction error summed over observations. Each fold
/// reruns the selection on the remaining rows before the relaxed refit.
pub fn loo_cv(x: &DesignMatrix, y: &DVector<f64>, selector: &Selector) -> Result<f64> {
    x.check_response(y)?;
    let n = x.nrows();
    if n < 2 {
        return Err(Error::InvalidInput("leave-one-out needs at least two observations".into()));
    }
    let errors = (0..n)
        .into_par_iter()
        .map(|i| {
            let fold = || -> Result<f64> {
                let xi = x.without_row(i)?;
                let yi = y.clone().remove_row(i);
                let proj = selector.select_projection(&xi, &yi)?;
                let beta = proj.coefficients(&yi);
                let row = x.matrix().row(i);
                let pred: f64 = proj
                    .support()
                    .indices()
                    .iter()
                    .zip(beta.iter())
                    .map(|(&j, b)| row[j] * b)
                    .sum();
                Ok((y[i] - pred).powi(2))
            };
            fold().map_err(|e| e.in_fold(i))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(errors.iter().sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapEstimate {
    /// `rss + covariance_penalty`.
    pub estimate: f64,
    pub rss: f64,
    /// `2 sum_i cov_i`.
    pub covariance_penalty: f64,
    pub support: Support,
}

/// Covariance-penalty estimate with the covariances simulated around the
/// pilot fit `mu0 = H_{M(y)} y`, using the supplied noise level. Replicate `b`
/// uses `derive_seed(seed, b)`.
pub fn parametric_bootstrap(
    x: &DesignMatrix,
    y: &DVector<f64>,
    selector: &Selector,
    noise: &NoiseLevel,
    replicates: usize,
    seed: u64,
) -> Result<BootstrapEstimate> {
    if replicates < 2 {
        return Err(Error::InvalidParameter(format!(
            "bootstrap needs at least two replicates, got {replicates}"
        )));
    }
    x.check_response(y)?;
    let n = y.len();
    let proj = selector.select_projection(x, y)?;
    let mu0 = proj.apply(y);
    let rss = (y - &mu0).norm_squared();
    let sigma = noise.sigma();

    let draws = (0..replicates)
        .into_par_iter()
        .map(|b| {
            let yb = &mu0 + rng::normal_vector(&mut rng::stream(rng::derive_seed(seed, b as u64)), n, sigma);
            let fit = selector
                .select_projection(x, &yb)
                .map(|p| p.apply(&yb))
                .map_err(|e| e.in_replicate(b))?;
            Ok((yb, fit))
        })
        .collect::<Result<Vec<_>>>()?;

    let bf = replicates as f64;
    let mut y_bar = DVector::zeros(n);
    let mut fit_bar = DVector::zeros(n);
    for (yb, fit) in &draws {
        y_bar += yb;
        fit_bar += fit;
    }
    y_bar /= bf;
    fit_bar /= bf;
    let cov_sum: f64 = draws
        .iter()
        .map(|(yb, fit)| (fit - &fit_bar).dot(&(yb - &y_bar)))
        .sum::<f64>()
        / (bf - 1.0);
    Ok(BootstrapEstimate {
        estimate: rss + 2.0 * cov_sum,
        rss,
        covariance_penalty: 2.0 * cov_sum,
        support: proj.support().clone(),
    })
}

/// |M|.
pub fn naive_df(m: &Support) -> usize {
    m.len()
}

/// `||y - P_X y||^2 / (n - p)` for a full-rank design with p < n.
pub fn sigma_ols(x: &DesignMatrix, y: &DVector<f64>) -> Result<NoiseLevel> {
    x.check_response(y)?;
    let (n, p) = (x.nrows(), x.ncols());
    if p >= n {
        return Err(Error::UnsupportedRegime(format!(
            "OLS noise estimate needs p < n, got p = {p}, n = {n}"
        )));
    }
    let proj = Projection::new(x, &Support::full(p))?;
    let rss = (y - proj.apply(y)).norm_squared();
    let s2 = rss / (n - p) as f64;
    if s2 <= 1e-14 * y.norm_squared().max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidInput(
            "response lies in the column span of the design; OLS noise estimate is zero".into(),
        ));
    }
    NoiseLevel::new(s2, NoiseSource::OlsResidual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    #[test]
    fn cp_with_empty_model() {
        let x = DesignMatrix::from_rows(&[vec![1.0], vec![2.0], vec![0.0]]).unwrap();
        let y = DVector::from_vec(vec![1.0, -2.0, 3.0]);
        let v = cp_estimate(&x, &y, &Support::empty(), &NoiseLevel::known(4.0).unwrap()).unwrap();
        assert_relative_eq!(v, 14.0, epsilon = 1e-12);
    }

    #[test]
    fn cp_identity_full_model() {
        let n = 5;
        let x = DesignMatrix::new(DMatrix::identity(n, n)).unwrap();
        let y = DVector::from_fn(n, |i, _| i as f64 - 1.5);
        let v = cp_estimate(&x, &y, &Support::full(n), &NoiseLevel::known(0.5).unwrap()).unwrap();
        assert_relative_eq!(v, 2.0 * n as f64 * 0.5, epsilon = 1e-12);
    }

    #[test]
    fn loo_with_empty_model_is_sum_of_squares() {
        let x = DesignMatrix::from_rows(&[vec![1.0], vec![2.0], vec![0.5], vec![-1.0]]).unwrap();
        let y = DVector::from_vec(vec![1.0, -2.0, 3.0, 0.5]);
        let v = loo_cv(&x, &y, &Selector::Fixed(Support::empty())).unwrap();
        assert_relative_eq!(v, y.norm_squared(), epsilon = 1e-12);
    }

    #[test]
    fn loo_needs_two_rows() {
        let x = DesignMatrix::from_rows(&[vec![1.0]]).unwrap();
        let y = DVector::from_vec(vec![1.0]);
        assert!(loo_cv(&x, &y, &Selector::Fixed(Support::empty())).is_err());
    }

    #[test]
    fn bootstrap_of_empty_model_is_rss() {
        let x = DesignMatrix::from_rows(&[vec![1.0], vec![2.0], vec![0.5]]).unwrap();
        let y = DVector::from_vec(vec![1.0, -2.0, 3.0]);
        let noise = NoiseLevel::known(1.0).unwrap();
        let b = parametric_bootstrap(&x, &y, &Selector::Fixed(Support::empty()), &noise, 20, 1).unwrap();
        assert_eq!(b.covariance_penalty, 0.0);
        assert_relative_eq!(b.estimate, y.norm_squared(), epsilon = 1e-12);
        assert!(parametric_bootstrap(&x, &y, &Selector::Fixed(Support::empty()), &noise, 1, 1).is_err());
    }

    #[test]
    fn naive_df_counts() {
        assert_eq!(naive_df(&Support::empty()), 0);
        assert_eq!(naive_df(&Support::new(vec![1, 4, 9], 10).unwrap()), 3);
    }

    #[test]
    fn sigma_ols_constant_column() {
        let x = DesignMatrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let y = DVector::from_vec(vec![0.0, 2.0]);
        let noise = sigma_ols(&x, &y).unwrap();
        assert_relative_eq!(noise.sigma2(), 2.0, epsilon = 1e-12);
        assert_eq!(noise.source(), NoiseSource::OlsResidual);
    }

    #[test]
    fn sigma_ols_rejects_degenerate_cases() {
        let x = DesignMatrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let y = DVector::from_vec(vec![1.0, 3.0, 5.0]);
        assert!(matches!(sigma_ols(&x, &y), Err(Error::InvalidInput(_))));
        let wide = DesignMatrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let y2 = DVector::from_vec(vec![1.0, 2.0]);
        assert!(matches!(sigma_ols(&wide, &y2), Err(Error::UnsupportedRegime(_))));
    }
}
