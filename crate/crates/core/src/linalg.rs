//! Design matrices and the projections onto spans of selected columns.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::selection::Support;

/// Relative tolerance, against the leading pivot of the column-pivoted QR,
/// below which a diagonal entry of R counts as zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// A fixed n x p feature matrix with cached column norms and Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    x: DMatrix<f64>,
    column_norms: Vec<f64>,
    gram: DMatrix<f64>,
}

impl DesignMatrix {
    pub fn new(x: DMatrix<f64>) -> Result<Self> {
        if x.nrows() == 0 || x.ncols() == 0 {
            return Err(Error::InvalidInput(format!(
                "design matrix must be non-empty, got {}x{}",
                x.nrows(),
                x.ncols()
            )));
        }
        if let Some(pos) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "design matrix entry ({}, {}) is not finite",
                pos % x.nrows(),
                pos / x.nrows()
            )));
        }
        let column_norms = x.column_iter().map(|c| c.norm()).collect();
        let gram = x.tr_mul(&x);
        Ok(Self {
            x,
            column_norms,
            gram,
        })
    }

    /// Build from row-major data.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != p) {
            return Err(Error::InvalidInput("ragged design rows".into()));
        }
        Self::new(DMatrix::from_fn(n, p, |i, j| rows[i][j]))
    }

    pub fn nrows(&self) -> usize {
        self.x.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.x.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn column_norms(&self) -> &[f64] {
        &self.column_norms
    }

    /// X^T X.
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn tr_mul_vec(&self, v: &DVector<f64>) -> DVector<f64> {
        self.x.tr_mul(v)
    }

    /// Submatrix of the columns in `support`, in support order.
    pub fn columns(&self, support: &Support) -> DMatrix<f64> {
        self.x.select_columns(support.indices())
    }

    pub fn row(&self, i: usize) -> DVector<f64> {
        self.x.row(i).transpose()
    }

    /// Design with row `i` removed; the Gram matrix is downdated rather than
    /// recomputed.
    pub fn without_row(&self, i: usize) -> Result<Self> {
        if self.nrows() < 2 || i >= self.nrows() {
            return Err(Error::InvalidInput(format!(
                "cannot drop row {i} from a design with {} rows",
                self.nrows()
            )));
        }
        let row = self.row(i);
        let x = self.x.clone().remove_row(i);
        let column_norms = x.column_iter().map(|c| c.norm()).collect();
        let gram = &self.gram - &row * row.transpose();
        Ok(Self {
            x,
            column_norms,
            gram,
        })
    }

    pub(crate) fn check_response(&self, y: &DVector<f64>) -> Result<()> {
        if y.len() != self.nrows() {
            return Err(Error::InvalidInput(format!(
                "response has length {} but the design has {} rows",
                y.len(),
                self.nrows()
            )));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("response contains non-finite values".into()));
        }
        Ok(())
    }
}

/// Orthogonal projection onto span(X_M), backed by a column-pivoted QR of X_M.
///
/// Construction fails with [`Error::RankDeficient`] rather than falling back to
/// a pseudo-inverse, so `trace()` is always exactly |M|.
#[derive(Debug, Clone)]
pub struct Projection {
    support: Support,
    n: usize,
    /// Thin Q, n x |M|.
    q: DMatrix<f64>,
    /// Upper-triangular R, |M| x |M|, for the pivoted columns.
    r: DMatrix<f64>,
    /// `perm[i]` is the position in the support of the i-th pivoted column.
    perm: Vec<usize>,
}

impl Projection {
    pub fn new(x: &DesignMatrix, support: &Support) -> Result<Self> {
        Self::from_columns(x.columns(support), support.clone())
    }

    pub(crate) fn from_columns(xm: DMatrix<f64>, support: Support) -> Result<Self> {
        let n = xm.nrows();
        let k = xm.ncols();
        if k == 0 {
            return Ok(Self {
                support,
                n,
                q: DMatrix::zeros(n, 0),
                r: DMatrix::zeros(0, 0),
                perm: Vec::new(),
            });
        }
        if k > n {
            return Err(Error::RankDeficient {
                support: support.indices().to_vec(),
            });
        }
        let qr = xm.col_piv_qr();
        let r = qr.r();
        let lead = r[(0, 0)].abs();
        let deficient = lead == 0.0
            || (0..k).any(|i| r[(i, i)].abs() <= RANK_TOLERANCE * lead);
        if deficient {
            return Err(Error::RankDeficient {
                support: support.indices().to_vec(),
            });
        }
        let q = qr.q();
        let mut order = DMatrix::from_fn(k, 1, |i, _| i as f64);
        qr.p().permute_rows(&mut order);
        let perm = order.iter().map(|&v| v as usize).collect();
        Ok(Self {
            support,
            n,
            q,
            r,
            perm,
        })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    /// tr(H_M), equal to |M| for a full-rank projection.
    pub fn trace(&self) -> f64 {
        self.support.len() as f64
    }

    /// H_M v.
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        if self.support.is_empty() {
            return DVector::zeros(self.n);
        }
        let qtv = self.q.tr_mul(v);
        &self.q * qtv
    }

    /// Least-squares coefficients of v on X_M, in support order.
    pub fn coefficients(&self, v: &DVector<f64>) -> DVector<f64> {
        let k = self.support.len();
        if k == 0 {
            return DVector::zeros(0);
        }
        let z = self
            .r
            .solve_upper_triangular(&self.q.tr_mul(v))
            .expect("R has a nonzero diagonal by construction");
        let mut beta = DVector::zeros(k);
        for (i, &pos) in self.perm.iter().enumerate() {
            beta[pos] = z[i];
        }
        beta
    }

    /// (X_M^T X_M)^{-1} X_M^T as a |M| x n matrix.
    pub fn coefficient_map(&self) -> DMatrix<f64> {
        let k = self.support.len();
        if k == 0 {
            return DMatrix::zeros(0, self.n);
        }
        let z = self
            .r
            .solve_upper_triangular(&self.q.transpose())
            .expect("R has a nonzero diagonal by construction");
        let mut out = DMatrix::zeros(k, self.n);
        for (i, &pos) in self.perm.iter().enumerate() {
            out.set_row(pos, &z.row(i));
        }
        out
    }

    /// Dense n x n hat matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        &self.q * self.q.transpose()
    }
}

/// Empirical mean and its standard error.
pub(crate) fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let m = values.len();
    if m == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / m as f64;
    if m < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    (mean, (var / m as f64).sqrt())
}
