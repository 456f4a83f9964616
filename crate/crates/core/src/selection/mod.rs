//! Model-search procedures and the post-selection (relaxed) least-squares fit.

mod lambda;
mod lasso;
mod subset;

use std::fmt;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{DesignMatrix, Projection};

pub use lambda::{lambda_min, LambdaMin, DEFAULT_LAMBDA_MIN_DRAWS};
pub use lasso::{kkt_residual, lasso_fit, lasso_fit_with, LassoFit, LassoOptions};
pub use subset::{best_subset, binomial, forward_stepwise, DEFAULT_ENUMERATION_CAP};

/// Strictly increasing set of selected column indices (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Support(Vec<usize>);

impl Support {
    /// Validates that `indices` are strictly increasing and below `p`.
    pub fn new(indices: Vec<usize>, p: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(format!(
                "support indices must be strictly increasing: {indices:?}"
            )));
        }
        if let Some(&last) = indices.last() {
            if last >= p {
                return Err(Error::InvalidInput(format!(
                    "support index {last} out of range for {p} columns"
                )));
            }
        }
        Ok(Self(indices))
    }

    /// Sorts and deduplicates.
    pub fn from_unsorted(mut indices: Vec<usize>, p: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        Self::new(indices, p)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn full(p: usize) -> Self {
        Self((0..p).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }
}

/// Renders as `1;4;9`, the format used in CSV output.
impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|j| j.to_string()).collect();
        f.write_str(&parts.join(";"))
    }
}

/// Declarative description of a selection procedure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectorSpec {
    /// Lasso at a fixed penalty.
    LassoFixedLambda { lambda: f64 },
    /// Lasso at `kappa * lambda_min`.
    LassoKappa { kappa: f64 },
    /// Exhaustive best subset of size `k`.
    BestSubset { k: usize },
    /// Greedy forward stepwise run for `k` steps.
    ForwardStepwise { k: usize },
}

/// Knobs used when turning a [`SelectorSpec`] into a [`Selector`].
#[derive(Debug, Clone, Copy)]
pub struct ResolveOptions {
    pub lambda_min_draws: usize,
    pub seed: u64,
    pub enumeration_cap: u128,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        Self {
            lambda_min_draws: DEFAULT_LAMBDA_MIN_DRAWS,
            seed: 0,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl SelectorSpec {
    pub fn validate(&self, n: usize, p: usize) -> Result<()> {
        match *self {
            SelectorSpec::LassoFixedLambda { lambda } if !(lambda >= 0.0 && lambda.is_finite()) => {
                Err(Error::InvalidParameter(format!("lambda must be >= 0, got {lambda}")))
            }
            SelectorSpec::LassoKappa { kappa } if !(kappa > 0.0 && kappa.is_finite()) => {
                Err(Error::InvalidParameter(format!("kappa must be > 0, got {kappa}")))
            }
            SelectorSpec::BestSubset { k } | SelectorSpec::ForwardStepwise { k }
                if k > n.min(p) =>
            {
                Err(Error::InvalidParameter(format!(
                    "subset size {k} exceeds min(n, p) = {}",
                    n.min(p)
                )))
            }
            _ => Ok(()),
        }
    }

    /// Fix every data-independent quantity (the Lasso penalty in particular)
    /// against the design. `sigma` is only consulted for `LassoKappa`.
    pub fn resolve(&self, x: &DesignMatrix, sigma: f64, opts: &ResolveOptions) -> Result<Selector> {
        self.validate(x.nrows(), x.ncols())?;
        Ok(match *self {
            SelectorSpec::LassoFixedLambda { lambda } => Selector::Lasso { lambda },
            SelectorSpec::LassoKappa { kappa } => {
                let lm = lambda_min(x, sigma, opts.lambda_min_draws, opts.seed)?;
                Selector::Lasso {
                    lambda: kappa * lm.value,
                }
            }
            SelectorSpec::BestSubset { k } => Selector::BestSubset {
                k,
                cap: opts.enumeration_cap,
            },
            SelectorSpec::ForwardStepwise { k } => Selector::ForwardStepwise { k },
        })
    }
}

/// A selection map y -> M with all tuning resolved.
///
/// `Fixed` ignores the response; it represents a data-independent hat matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Selector {
    Lasso { lambda: f64 },
    BestSubset { k: usize, cap: u128 },
    ForwardStepwise { k: usize },
    Fixed(Support),
}

impl Selector {
    pub fn select(&self, x: &DesignMatrix, y: &DVector<f64>) -> Result<Support> {
        x.check_response(y)?;
        match self {
            Selector::Lasso { lambda } => {
                let beta = lasso_fit(x, y, *lambda)?;
                let idx = beta
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| **b != 0.0)
                    .map(|(j, _)| j)
                    .collect();
                Ok(Support(idx))
            }
            Selector::BestSubset { k, cap } => best_subset(x, y, *k, *cap),
            Selector::ForwardStepwise { k } => forward_stepwise(x, y, *k),
            Selector::Fixed(m) => {
                if m.indices().last().is_some_and(|&j| j >= x.ncols()) {
                    return Err(Error::InvalidInput(format!(
                        "fixed support {m} out of range for {} columns",
                        x.ncols()
                    )));
                }
                Ok(m.clone())
            }
        }
    }

    /// Selection followed by the projection onto the selected columns.
    pub fn select_projection(&self, x: &DesignMatrix, y: &DVector<f64>) -> Result<Projection> {
        let m = self.select(x, y)?;
        Projection::new(x, &m)
    }
}

/// Resolve `spec` and apply it to `y`. Deterministic in `(x, y, spec, seed)`.
pub fn select_support(
    x: &DesignMatrix,
    y: &DVector<f64>,
    spec: &SelectorSpec,
    sigma: f64,
    seed: u64,
) -> Result<Support> {
    let opts = ResolveOptions {
        seed,
        ..ResolveOptions::default()
    };
    spec.resolve(x, sigma, &opts)?.select(x, y)
}

/// H_M y_target, the relaxed fit on the selected columns.
pub fn relaxed_fit(x: &DesignMatrix, y_target: &DVector<f64>, m: &Support) -> Result<DVector<f64>> {
    x.check_response(y_target)?;
    Ok(Projection::new(x, m)?.apply(y_target))
}

/// tr(H_M).
pub fn hat_trace(x: &DesignMatrix, m: &Support) -> Result<f64> {
    Ok(Projection::new(x, m)?.trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn support_rejects_unsorted_and_out_of_range() {
        assert!(Support::new(vec![2, 1], 5).is_err());
        assert!(Support::new(vec![1, 1], 5).is_err());
        assert!(Support::new(vec![1, 5], 5).is_err());
        assert_eq!(Support::from_unsorted(vec![3, 1, 3], 5).unwrap().indices(), &[1, 3]);
        assert_eq!(Support::new(vec![1, 4, 9], 10).unwrap().to_string(), "1;4;9");
    }

    #[test]
    fn relaxed_fit_onto_constant_is_mean() {
        let x = DesignMatrix::from_rows(&vec![vec![1.0]; 5]).unwrap();
        let y = DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        let fit = relaxed_fit(&x, &y, &Support::full(1)).unwrap();
        assert_relative_eq!(fit, DVector::from_element(5, 3.0), epsilon = 1e-12);
    }

    #[test]
    fn empty_support_projects_to_zero() {
        let x = DesignMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0], vec![3.0, 1.0]]).unwrap();
        let y = DVector::from_vec(vec![1.0, -2.0, 4.0]);
        assert_eq!(relaxed_fit(&x, &y, &Support::empty()).unwrap(), DVector::zeros(3));
        assert_eq!(hat_trace(&x, &Support::empty()).unwrap(), 0.0);
    }

    #[test]
    fn full_support_fixes_its_range() {
        let x = DesignMatrix::from_rows(&[
            vec![1.0, 2.0],
            vec![0.0, 1.0],
            vec![3.0, 1.0],
            vec![1.0, -1.0],
        ])
        .unwrap();
        let y = x.matrix() * DVector::from_vec(vec![0.7, -1.3]);
        let fit = relaxed_fit(&x, &y, &Support::full(2)).unwrap();
        assert_relative_eq!(fit, y, epsilon = 1e-12);
        assert_eq!(hat_trace(&x, &Support::full(2)).unwrap(), 2.0);
    }

    #[test]
    fn rank_deficient_trace_is_an_error() {
        let x = DesignMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]).unwrap();
        assert!(matches!(
            hat_trace(&x, &Support::full(2)),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(SelectorSpec::LassoFixedLambda { lambda: -1.0 }.validate(10, 5).is_err());
        assert!(SelectorSpec::LassoKappa { kappa: 0.0 }.validate(10, 5).is_err());
        assert!(SelectorSpec::BestSubset { k: 6 }.validate(10, 5).is_err());
        assert!(SelectorSpec::ForwardStepwise { k: 5 }.validate(4, 8).is_err());
        assert!(SelectorSpec::BestSubset { k: 5 }.validate(10, 5).is_ok());
    }
}
