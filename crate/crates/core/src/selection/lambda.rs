use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{mean_and_se, DesignMatrix};
use crate::rng;

pub const DEFAULT_LAMBDA_MIN_DRAWS: usize = 1000;

/// Monte-Carlo estimate of `E ||X^T eps||_inf` for `eps ~ N(0, sigma^2 I)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaMin {
    pub value: f64,
    pub se: f64,
    pub draws: usize,
}

/// Noise level at which pure noise starts to enter the Lasso path.
///
/// Draw `i` uses the stream `derive_seed(seed, i)`. The standard-normal draws
/// do not depend on `sigma`, so the estimate is exactly linear in `sigma`.
pub fn lambda_min(x: &DesignMatrix, sigma: f64, n_mc: usize, seed: u64) -> Result<LambdaMin> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!("sigma must be > 0, got {sigma}")));
    }
    if n_mc == 0 {
        return Err(Error::InvalidParameter("lambda_min needs at least one draw".into()));
    }
    let n = x.nrows();
    let sups: Vec<f64> = (0..n_mc)
        .map(|i| {
            let z: DVector<f64> = rng::standard_normal_vector(&mut rng::stream(rng::derive_seed(seed, i as u64)), n);
            x.tr_mul_vec(&z).amax()
        })
        .collect();
    let (mean, se) = mean_and_se(&sups);
    Ok(LambdaMin {
        value: sigma * mean,
        se: sigma * se,
        draws: n_mc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_in_sigma() {
        let x = DesignMatrix::from_rows(&[vec![1.0, 0.3], vec![0.0, 2.0], vec![1.0, -1.0]]).unwrap();
        let a = lambda_min(&x, 1.5, 50, 3).unwrap();
        let b = lambda_min(&x, 3.0, 50, 3).unwrap();
        assert_eq!(b.value, 2.0 * a.value);
        assert_eq!(b.se, 2.0 * a.se);
    }

    #[test]
    fn rejects_bad_inputs() {
        let x = DesignMatrix::from_rows(&[vec![1.0]]).unwrap();
        assert!(lambda_min(&x, 0.0, 10, 0).is_err());
        assert!(lambda_min(&x, 1.0, 0, 0).is_err());
    }
}
