//! Prediction-error estimation for linear rules whose hat matrix was picked by
//! a data-driven model search.
//!
//! The response is perturbed as `y* = y + w`, `w ~ N(0, alpha sigma^2 I)`; the
//! model is searched on `y*` and the companion vector `y - w / alpha`, which is
//! independent of `y*`, scores the fit. Averaging over several perturbations
//! gives [`rand_est::err_alpha_averaged`], from which search degrees of freedom,
//! a BIC-type criterion and penalty tuning follow.
//!
//! Modules:
//!
//! - [`selection`]: Lasso, best subset, forward stepwise and the relaxed fit
//! - [`rand_est`]: the randomized estimators
//! - [`baselines`]: Cp, leave-one-out CV, parametric bootstrap
//! - [`oracle`]: Monte-Carlo ground truth and closed-form variance checks
//! - [`harness`]: synthetic designs, configs, figure runners, CSV/SVG output
//!
//! ```
//! use nalgebra::DVector;
//! use randrisk::harness::{gen_design, gen_response};
//! use randrisk::rand_est::{err_alpha_averaged, NoiseLevel};
//! use randrisk::selection::Selector;
//!
//! let x = gen_design(40, 6, 0.0, 1).unwrap();
//! let data = gen_response(&x, 2, 1.0, 1.0, 2).unwrap();
//! let noise = NoiseLevel::known(1.0).unwrap();
//! let report = err_alpha_averaged(&x, &data.y, 0.4, &Selector::BestSubset { k: 2, cap: 1000 }, &noise, 20, 3).unwrap();
//! assert_eq!(report.n_draws, 20);
//! # let _: &DVector<f64> = &data.y;
//! ```

pub mod baselines;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod oracle;
pub mod rand_est;
pub mod rng;
pub mod selection;

pub use error::{Error, Result};
pub use linalg::{DesignMatrix, Projection};
pub use nalgebra::{DMatrix, DVector};
pub use oracle::{McEstimate, TruthSpec};
pub use rand_est::{EstimateReport, NoiseLevel, RandomizedPair};
pub use selection::{Selector, SelectorSpec, Support};
