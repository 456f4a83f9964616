use thiserror::Error;

/// Errors raised by selection, estimation and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("lasso did not converge after {sweeps} sweeps (KKT residual {kkt_residual:e})")]
    Convergence { sweeps: usize, kkt_residual: f64 },

    #[error("support {support:?} is rank deficient")]
    RankDeficient { support: Vec<usize> },

    #[error("best-subset enumeration of C({p}, {k}) = {count} subsets exceeds the cap of {cap}")]
    InfeasibleEnumeration {
        p: usize,
        k: usize,
        count: u128,
        cap: u128,
    },

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("randomization draw {index}: {cause}")]
    Draw {
        index: usize,
        cause: Box<Error>,
    },

    #[error("leave-one-out fold {index}: {cause}")]
    Fold {
        index: usize,
        cause: Box<Error>,
    },

    #[error("replicate {index}: {cause}")]
    Replicate {
        index: usize,
        cause: Box<Error>,
    },

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn in_draw(self, index: usize) -> Self {
        Error::Draw {
            index,
            cause: Box::new(self),
        }
    }

    pub(crate) fn in_fold(self, index: usize) -> Self {
        Error::Fold {
            index,
            cause: Box::new(self),
        }
    }

    pub(crate) fn in_replicate(self, index: usize) -> Self {
        Error::Replicate {
            index,
            cause: Box::new(self),
        }
    }
}
