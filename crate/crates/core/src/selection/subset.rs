//! Best subset by exhaustive enumeration and greedy forward stepwise.
//!
//! Both score a candidate set M by its residual sum of squares
//! `y^T y - b_M^T G_MM^{-1} b_M` with `G = X^T X`, `b = X^T y`. Candidates whose
//! Gram block is not positive definite are skipped. Ties go to the
//! lexicographically smallest index set.

use nalgebra::{DMatrix, DVector};

use super::Support;
use crate::error::{Error, Result};
use crate::linalg::{DesignMatrix, RANK_TOLERANCE};

pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

/// C(p, k), saturating at `u128::MAX`.
pub fn binomial(p: usize, k: usize) -> u128 {
    if k > p {
        return 0;
    }
    let k = k.min(p - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((p - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

struct RssScorer<'a> {
    gram: &'a DMatrix<f64>,
    xty: DVector<f64>,
    yty: f64,
    scale: f64,
}

impl<'a> RssScorer<'a> {
    fn new(x: &'a DesignMatrix, y: &DVector<f64>) -> Self {
        let gram = x.gram();
        let scale = gram.diagonal().amax();
        Self {
            gram,
            xty: x.tr_mul_vec(y),
            yty: y.norm_squared(),
            scale,
        }
    }

    fn rss(&self, idx: &[usize]) -> Option<f64> {
        if idx.is_empty() {
            return Some(self.yty);
        }
        let g = self.gram.select_rows(idx).select_columns(idx);
        let chol = g.cholesky()?;
        let l = chol.l_dirty();
        if (0..idx.len()).any(|i| l[(i, i)].powi(2) <= RANK_TOLERANCE * self.scale) {
            return None;
        }
        let b = DVector::from_iterator(idx.len(), idx.iter().map(|&j| self.xty[j]));
        let coef = chol.solve(&b);
        Some(self.yty - b.dot(&coef))
    }
}

/// Advance `idx` to the next k-combination of 0..p in lexicographic order.
fn next_combination(idx: &mut [usize], p: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < p - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Size-k subset with the smallest residual sum of squares.
pub fn best_subset(x: &DesignMatrix, y: &DVector<f64>, k: usize, cap: u128) -> Result<Support> {
    x.check_response(y)?;
    let p = x.ncols();
    if k > x.nrows().min(p) {
        return Err(Error::InvalidParameter(format!(
            "subset size {k} exceeds min(n, p) = {}",
            x.nrows().min(p)
        )));
    }
    let count = binomial(p, k);
    if count > cap {
        return Err(Error::InfeasibleEnumeration { p, k, count, cap });
    }
    let scorer = RssScorer::new(x, y);
    let mut idx: Vec<usize> = (0..k).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        if let Some(rss) = scorer.rss(&idx) {
            if best.as_ref().is_none_or(|(b, _)| rss < *b) {
                best = Some((rss, idx.clone()));
            }
        }
        if !next_combination(&mut idx, p) {
            break;
        }
    }
    match best {
        Some((_, idx)) => Support::new(idx, p),
        None => Err(Error::RankDeficient {
            support: (0..k).collect(),
        }),
    }
}

/// k greedy steps, each adding the column that lowers the RSS the most.
pub fn forward_stepwise(x: &DesignMatrix, y: &DVector<f64>, k: usize) -> Result<Support> {
    x.check_response(y)?;
    let p = x.ncols();
    if k > x.nrows().min(p) {
        return Err(Error::InvalidParameter(format!(
            "step count {k} exceeds min(n, p) = {}",
            x.nrows().min(p)
        )));
    }
    let scorer = RssScorer::new(x, y);
    let mut current: Vec<usize> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(f64, Vec<usize>)> = None;
        for j in (0..p).filter(|j| !current.contains(j)) {
            let mut cand = current.clone();
            cand.push(j);
            cand.sort_unstable();
            if let Some(rss) = scorer.rss(&cand) {
                if best.as_ref().is_none_or(|(b, _)| rss < *b) {
                    best = Some((rss, cand));
                }
            }
        }
        match best {
            Some((_, cand)) => current = cand,
            None => {
                return Err(Error::RankDeficient {
                    support: current.clone(),
                })
            }
        }
    }
    Support::new(current, p)
}
