//! Lagrangian Lasso, `min 0.5 * ||y - X b||^2 + lambda * ||b||_1`, by cyclic
//! coordinate descent on the Gram matrix with an active-set inner loop.
//! Each outer pass also tries to finish exactly: given the current signs on
//! the active set, the stationarity equations are linear, and their solution
//! is accepted when it keeps the signs and satisfies the full KKT check.
//! When the active columns are linearly dependent, the iterate is first moved
//! along the null space of X_A (which leaves X beta unchanged) until enough
//! coordinates reach zero for the system to be nonsingular.
//! Coordinate descent alone can need 10^5+ sweeps when the active set is
//! close to n columns.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::DesignMatrix;

#[derive(Debug, Clone, Copy)]
pub struct LassoOptions {
    pub max_sweeps: usize,
    /// Active-set sweeps between full sweeps. Bounding them matters when p > n:
    /// the first full sweep can activate more than n coordinates, and the
    /// rank-deficient active problem converges very slowly on its own.
    pub inner_sweeps: usize,
    /// Stop once a full sweep moves no coordinate by more than this.
    pub update_tol: f64,
    /// Stop once the KKT residual drops below this.
    pub kkt_tol: f64,
    /// Try the exact sign-constrained solve after each outer pass.
    pub polish: bool,
}

impl Default for LassoOptions {
    fn default() -> Self {
        Self {
            max_sweeps: 100_000,
            inner_sweeps: 100,
            update_tol: 1e-10,
            kkt_tol: 1e-8,
            polish: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LassoFit {
    pub beta: DVector<f64>,
    pub sweeps: usize,
    pub kkt_residual: f64,
}

#[inline]
fn soft_threshold(z: f64, lambda: f64) -> f64 {
    if z > lambda {
        z - lambda
    } else if z < -lambda {
        z + lambda
    } else {
        0.0
    }
}

/// Largest violation of the Lasso stationarity conditions given the
/// correlation `grad = X^T (y - X beta)`.
fn kkt_from_gradient(grad: &DVector<f64>, beta: &DVector<f64>, lambda: f64) -> f64 {
    grad.iter()
        .zip(beta.iter())
        .map(|(&g, &b)| {
            if b == 0.0 {
                (g.abs() - lambda).max(0.0)
            } else {
                (g - lambda * b.signum()).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// KKT residual of `beta`, computed from the explicit residual y - X beta.
pub fn kkt_residual(x: &DesignMatrix, y: &DVector<f64>, beta: &DVector<f64>, lambda: f64) -> f64 {
    let resid = y - x.matrix() * beta;
    kkt_from_gradient(&x.tr_mul_vec(&resid), beta, lambda)
}

pub fn lasso_fit(x: &DesignMatrix, y: &DVector<f64>, lambda: f64) -> Result<DVector<f64>> {
    lasso_fit_with(x, y, lambda, &LassoOptions::default()).map(|f| f.beta)
}

pub fn lasso_fit_with(
    x: &DesignMatrix,
    y: &DVector<f64>,
    lambda: f64,
    opts: &LassoOptions,
) -> Result<LassoFit> {
    x.check_response(y)?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidInput(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    let p = x.ncols();
    let gram = x.gram();
    let xty = x.tr_mul_vec(y);
    let mut beta = DVector::zeros(p);

    if xty.amax() <= lambda {
        return Ok(LassoFit {
            beta,
            sweeps: 0,
            kkt_residual: 0.0,
        });
    }

    // grad = X^T y - G beta, kept current across coordinate updates.
    let mut grad = xty.clone();
    let mut sweeps = 0;
    let all: Vec<usize> = (0..p).collect();

    let sweep = |coords: &[usize], beta: &mut DVector<f64>, grad: &mut DVector<f64>| -> f64 {
        let mut max_update = 0.0f64;
        for &j in coords {
            let gjj = gram[(j, j)];
            if gjj <= 0.0 {
                continue;
            }
            let old = beta[j];
            let new = soft_threshold(grad[j] + gjj * old, lambda) / gjj;
            let delta = new - old;
            if delta != 0.0 {
                beta[j] = new;
                grad.axpy(-delta, &gram.column(j), 1.0);
                max_update = max_update.max(delta.abs());
            }
        }
        max_update
    };

    loop {
        let full_update = sweep(&all, &mut beta, &mut grad);
        sweeps += 1;

        let active: Vec<usize> = (0..p).filter(|&j| beta[j] != 0.0).collect();
        for _ in 0..opts.inner_sweeps {
            if sweeps >= opts.max_sweeps {
                break;
            }
            let update = sweep(&active, &mut beta, &mut grad);
            sweeps += 1;
            if update < opts.update_tol {
                break;
            }
        }

        if let Some(exact) = opts.polish.then(|| solve_on_signs(gram, &xty, &beta, lambda)).flatten() {
            let exact_grad = &xty - gram * &exact;
            let kkt = kkt_from_gradient(&exact_grad, &exact, lambda);
            if kkt <= opts.kkt_tol {
                return Ok(LassoFit {
                    beta: exact,
                    sweeps,
                    kkt_residual: kkt,
                });
            }
        }

        // Refresh to cancel drift from incremental updates.
        grad = &xty - gram * &beta;
        let kkt = kkt_from_gradient(&grad, &beta, lambda);
        if kkt <= opts.kkt_tol || full_update < opts.update_tol {
            return Ok(LassoFit {
                beta,
                sweeps,
                kkt_residual: kkt,
            });
        }
        if sweeps >= opts.max_sweeps {
            return Err(Error::Convergence {
                sweeps,
                kkt_residual: kkt,
            });
        }
    }
}

fn active_set(beta: &DVector<f64>) -> Vec<usize> {
    (0..beta.len()).filter(|&j| beta[j] != 0.0).collect()
}

fn sub_gram(gram: &DMatrix<f64>, active: &[usize]) -> DMatrix<f64> {
    let k = active.len();
    DMatrix::from_fn(k, k, |a, b| gram[(active[a], active[b])])
}

/// Zeroes coordinates of `beta` along null directions of the active columns
/// until they are linearly independent.
fn reduce_to_independent(gram: &DMatrix<f64>, beta: &mut DVector<f64>) {
    loop {
        let active = active_set(beta);
        if active.is_empty() {
            return;
        }
        let eig = sub_gram(gram, &active).symmetric_eigen();
        let (imin, &emin) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty");
        if emin > NULL_TOL * eig.eigenvalues.amax() {
            return;
        }
        let v = eig.eigenvectors.column(imin);
        // Move in the direction that does not increase ||beta||_1, as far as
        // the first coordinate that reaches zero.
        let slope: f64 = active.iter().enumerate().map(|(a, &j)| beta[j].signum() * v[a]).sum();
        let Some((hit, t)) = active
            .iter()
            .enumerate()
            .filter(|(a, _)| v[*a] != 0.0)
            .map(|(a, &j)| (a, -beta[j] / v[a]))
            .filter(|&(_, t)| slope == 0.0 || t * slope < 0.0)
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        else {
            return;
        };
        for (a, &j) in active.iter().enumerate() {
            beta[j] += t * v[a];
        }
        beta[active[hit]] = 0.0;
    }
}

/// Relative eigenvalue threshold below which active columns count as dependent.
const NULL_TOL: f64 = 1e-10;

/// Solves `G_AA b = (X^T y)_A - lambda * sign(beta_A)` on the active set of
/// `beta` after removing dependent columns; `None` if the system is singular
/// or a sign flips.
fn solve_on_signs(
    gram: &DMatrix<f64>,
    xty: &DVector<f64>,
    beta: &DVector<f64>,
    lambda: f64,
) -> Option<DVector<f64>> {
    let mut reduced = beta.clone();
    reduce_to_independent(gram, &mut reduced);
    let active = active_set(&reduced);
    if active.is_empty() {
        return None;
    }
    let rhs = DVector::from_fn(active.len(), |a, _| {
        xty[active[a]] - lambda * reduced[active[a]].signum()
    });
    let b = sub_gram(gram, &active).cholesky()?.solve(&rhs);
    let mut out = DVector::zeros(beta.len());
    for (a, &j) in active.iter().enumerate() {
        if !b[a].is_finite() || b[a] == 0.0 || b[a].signum() != reduced[j].signum() {
            return None;
        }
        out[j] = b[a];
    }
    Some(out)
}
