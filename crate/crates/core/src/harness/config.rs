//! Flat `key = value` experiment configuration.
//!
//! Keys match the CLI flag names without the leading dashes. Lines starting
//! with `#` are comments. Lists are comma separated.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::selection::SelectorSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectorKind {
    Lasso,
    BestSubset,
    Stepwise,
}

impl SelectorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SelectorKind::Lasso => "lasso",
            SelectorKind::BestSubset => "best-subset",
            SelectorKind::Stepwise => "stepwise",
        }
    }
}

impl FromStr for SelectorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lasso" => Ok(SelectorKind::Lasso),
            "best-subset" => Ok(SelectorKind::BestSubset),
            "stepwise" => Ok(SelectorKind::Stepwise),
            other => Err(Error::InvalidParameter(format!(
                "unknown selector '{other}' (expected lasso, best-subset or stepwise)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sigma2Source {
    /// Estimators use the true noise variance of the simulation.
    Known,
    /// Estimators use the OLS residual variance (requires p < n).
    Ols,
}

impl FromStr for Sigma2Source {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "known" => Ok(Sigma2Source::Known),
            "ols" => Ok(Sigma2Source::Ols),
            other => Err(Error::InvalidParameter(format!("unknown sigma2 source '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    /// Restricts the Lasso studies to this many columns.
    pub p: Option<usize>,
    /// Restricts the Lasso studies to this sparsity.
    pub s: Option<usize>,
    pub snr: f64,
    pub rho: f64,
    pub sigma: f64,
    pub selector: SelectorKind,
    pub lambda: Option<f64>,
    pub kappa: Option<f64>,
    pub k: Option<usize>,
    /// Overrides the figure-specific kappa grid when set.
    pub kappa_grid: Option<Vec<f64>>,
    /// Randomization scale; figure runners fall back to 0.25.
    pub alpha: Option<f64>,
    pub n_draws: usize,
    pub replications: usize,
    pub truth_replications: usize,
    pub bootstrap: usize,
    pub lambda_min_draws: usize,
    pub sigma2_source: Sigma2Source,
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 100,
            p: None,
            s: None,
            snr: 7.0,
            rho: 0.3,
            sigma: 1.0,
            selector: SelectorKind::Lasso,
            lambda: None,
            kappa: None,
            k: None,
            kappa_grid: None,
            alpha: None,
            n_draws: 50,
            replications: 500,
            truth_replications: 2000,
            bootstrap: 200,
            lambda_min_draws: 1000,
            sigma2_source: Sigma2Source::Known,
            seed: 2017,
            out: PathBuf::from("results"),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("cannot parse '{value}' for key '{key}'")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| parse(key, v))
        .collect()
}

impl ExperimentConfig {
    /// Set one key. Unknown keys are an error.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "n" => self.n = parse(key, value)?,
            "p" => self.p = Some(parse(key, value)?),
            "s" => self.s = Some(parse(key, value)?),
            "snr" => self.snr = parse(key, value)?,
            "rho" => self.rho = parse(key, value)?,
            "sigma" => self.sigma = parse(key, value)?,
            "selector" => self.selector = value.parse()?,
            "lambda" => self.lambda = Some(parse(key, value)?),
            "kappa" => self.kappa = Some(parse(key, value)?),
            "k" => self.k = Some(parse(key, value)?),
            "kappa-grid" => self.kappa_grid = Some(parse_list(key, value)?),
            "alpha" => self.alpha = Some(parse(key, value)?),
            "n-draws" => self.n_draws = parse(key, value)?,
            "replications" => self.replications = parse(key, value)?,
            "truth-replications" => self.truth_replications = parse(key, value)?,
            "bootstrap" => self.bootstrap = parse(key, value)?,
            "lambda-min-draws" => self.lambda_min_draws = parse(key, value)?,
            "sigma2-source" => self.sigma2_source = value.parse()?,
            "seed" => self.seed = parse(key, value)?,
            "out" => self.out = PathBuf::from(value),
            other => return Err(Error::InvalidParameter(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Apply every `key = value` line of `text` on top of `self`.
    pub fn merge_str(&mut self, text: &str, origin: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                path: origin.to_string(),
                message: format!("line {}: expected 'key = value'", lineno + 1),
            })?;
            self.set(key, value).map_err(|e| Error::Parse {
                path: origin.to_string(),
                message: format!("line {}: {e}", lineno + 1),
            })?;
        }
        Ok(())
    }

    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.merge_str(text, "<config>")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::default();
        cfg.merge_str(&text, &path.display().to_string())?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_kv_string(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("n", self.n.to_string());
        if let Some(v) = self.p {
            put("p", v.to_string());
        }
        if let Some(v) = self.s {
            put("s", v.to_string());
        }
        put("snr", self.snr.to_string());
        put("rho", self.rho.to_string());
        put("sigma", self.sigma.to_string());
        put("selector", self.selector.as_str().to_string());
        if let Some(v) = self.lambda {
            put("lambda", v.to_string());
        }
        if let Some(v) = self.kappa {
            put("kappa", v.to_string());
        }
        if let Some(v) = self.k {
            put("k", v.to_string());
        }
        if let Some(grid) = &self.kappa_grid {
            put(
                "kappa-grid",
                grid.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
            );
        }
        if let Some(v) = self.alpha {
            put("alpha", v.to_string());
        }
        put("n-draws", self.n_draws.to_string());
        put("replications", self.replications.to_string());
        put("truth-replications", self.truth_replications.to_string());
        put("bootstrap", self.bootstrap.to_string());
        put("lambda-min-draws", self.lambda_min_draws.to_string());
        put(
            "sigma2-source",
            match self.sigma2_source {
                Sigma2Source::Known => "known",
                Sigma2Source::Ols => "ols",
            }
            .to_string(),
        );
        put("seed", self.seed.to_string());
        put("out", self.out.display().to_string());
        out
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(0.0..1.0).contains(&self.rho) {
            return bad(format!("rho must lie in [0, 1), got {}", self.rho));
        }
        if let (Some(s), Some(p)) = (self.s, self.p) {
            if s > p {
                return bad(format!("s = {s} exceeds p = {p}"));
            }
        }
        if self.n == 0 || self.p == Some(0) || self.n_draws == 0 || self.replications == 0 {
            return bad("n, p, n-draws and replications must be at least 1".into());
        }
        if self.truth_replications < 2 || self.bootstrap < 2 || self.lambda_min_draws == 0 {
            return bad("truth-replications and bootstrap must be at least 2".into());
        }
        if self.sigma.is_nan() || self.sigma <= 0.0 {
            return bad(format!("sigma must be > 0, got {}", self.sigma));
        }
        Ok(())
    }

    /// Selector spec implied by `selector` and whichever of lambda / kappa / k is set.
    pub fn selector_spec(&self) -> Result<SelectorSpec> {
        match self.selector {
            SelectorKind::Lasso => match (self.lambda, self.kappa) {
                (Some(lambda), None) => Ok(SelectorSpec::LassoFixedLambda { lambda }),
                (None, Some(kappa)) => Ok(SelectorSpec::LassoKappa { kappa }),
                (None, None) => Err(Error::InvalidParameter("lasso needs --lambda or --kappa".into())),
                (Some(_), Some(_)) => Err(Error::InvalidParameter(
                    "give only one of --lambda and --kappa".into(),
                )),
            },
            SelectorKind::BestSubset => self
                .k
                .map(|k| SelectorSpec::BestSubset { k })
                .ok_or_else(|| Error::InvalidParameter("best-subset needs --k".into())),
            SelectorKind::Stepwise => self
                .k
                .map(|k| SelectorSpec::ForwardStepwise { k })
                .ok_or_else(|| Error::InvalidParameter("stepwise needs --k".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let cfg = ExperimentConfig {
            kappa: Some(1.1),
            alpha: Some(0.1 + 0.2),
            snr: 1.0 / 3.0,
            kappa_grid: Some(vec![0.05, 0.1, 0.15]),
            ..ExperimentConfig::default()
        };
        let back = ExperimentConfig::from_kv_str(&cfg.to_kv_string()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(ExperimentConfig::from_kv_str("bogus = 1").is_err());
        assert!(ExperimentConfig::from_kv_str("rho = 1.0").is_err());
        assert!(ExperimentConfig::from_kv_str("n = many").is_err());
        assert!(ExperimentConfig::from_kv_str("s = 60\np = 50").is_err());
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = ExperimentConfig::from_kv_str("# settings\n\nn = 40\n  seed=9 \n").unwrap();
        assert_eq!(cfg.n, 40);
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn selector_spec_requires_tuning() {
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.selector_spec().is_err());
        cfg.kappa = Some(1.5);
        assert_eq!(cfg.selector_spec().unwrap(), SelectorSpec::LassoKappa { kappa: 1.5 });
        cfg.lambda = Some(2.0);
        assert!(cfg.selector_spec().is_err());
        cfg.selector = SelectorKind::BestSubset;
        cfg.k = Some(2);
        assert_eq!(cfg.selector_spec().unwrap(), SelectorSpec::BestSubset { k: 2 });
    }
}
