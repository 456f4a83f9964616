//! Long-format result table shared by every figure runner.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::mean_and_se;

pub const RESULT_HEADER: &str = "experiment,method,replicate,estimate,truth,truth_se";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Additive,
    Cp,
    Cv,
    Bootstrap,
    Truth,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Additive => "additive",
            Method::Cp => "cp",
            Method::Cv => "cv",
            Method::Bootstrap => "bootstrap",
            Method::Truth => "truth",
        }
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "additive" => Method::Additive,
            "cp" => Method::Cp,
            "cv" => Method::Cv,
            "bootstrap" => Method::Bootstrap,
            "truth" => Method::Truth,
            other => return Err(Error::InvalidInput(format!("unknown method '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub method: Method,
    /// 1-based.
    pub replicate: usize,
    pub estimate: f64,
    pub truth: f64,
    pub truth_se: f64,
}

/// Mean and standard error of one method within one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub experiment: String,
    pub method: Method,
    pub count: usize,
    pub mean: f64,
    pub se: f64,
    pub truth: f64,
    pub truth_se: f64,
}

impl MethodSummary {
    /// `(mean - truth) / sqrt(se^2 + truth_se^2)`.
    pub fn z_score(&self) -> f64 {
        (self.mean - self.truth) / self.se.hypot(self.truth_se)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, experiment: &str, method: Method, replicate: usize, estimate: f64, truth: f64, truth_se: f64) {
        self.rows.push(ResultRow {
            experiment: experiment.to_string(),
            method,
            replicate,
            estimate,
            truth,
            truth_se,
        });
    }

    pub fn extend(&mut self, other: ResultTable) {
        self.rows.extend(other.rows);
    }

    /// Replicate indices for each (experiment, method) must run 1..=m.
    pub fn validate(&self) -> Result<()> {
        let mut seen: BTreeMap<(&str, Method), Vec<usize>> = BTreeMap::new();
        for r in &self.rows {
            if r.experiment.contains(',') {
                return Err(Error::InvalidInput(format!("experiment id '{}' contains a comma", r.experiment)));
            }
            seen.entry((&r.experiment, r.method)).or_default().push(r.replicate);
        }
        for ((exp, method), mut reps) in seen {
            reps.sort_unstable();
            if reps.iter().enumerate().any(|(i, &r)| r != i + 1) {
                return Err(Error::InvalidInput(format!(
                    "replicates of {exp}/{} are not contiguous from 1",
                    method.as_str()
                )));
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(RESULT_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.experiment,
                r.method.as_str(),
                r.replicate,
                r.estimate,
                r.truth,
                r.truth_se
            );
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(RESULT_HEADER) {
            return Err(Error::InvalidInput("result table header mismatch".into()));
        }
        let mut table = Self::new();
        for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let f: Vec<&str> = line.split(',').collect();
            let bad = || Error::InvalidInput(format!("malformed result row {}", i + 2));
            if f.len() != 6 {
                return Err(bad());
            }
            table.rows.push(ResultRow {
                experiment: f[0].to_string(),
                method: f[1].parse()?,
                replicate: f[2].parse().map_err(|_| bad())?,
                estimate: f[3].parse().map_err(|_| bad())?,
                truth: f[4].parse().map_err(|_| bad())?,
                truth_se: f[5].parse().map_err(|_| bad())?,
            });
        }
        Ok(table)
    }

    /// Per (experiment, method) summaries in first-appearance order.
    pub fn summarize(&self) -> Vec<MethodSummary> {
        let mut order: Vec<(String, Method)> = Vec::new();
        let mut groups: BTreeMap<(String, Method), Vec<&ResultRow>> = BTreeMap::new();
        for r in &self.rows {
            let key = (r.experiment.clone(), r.method);
            if !groups.contains_key(&key) {
                order.push(key.clone());
            }
            groups.entry(key).or_default().push(r);
        }
        order
            .into_iter()
            .map(|key| {
                let rows = &groups[&key];
                let values: Vec<f64> = rows.iter().map(|r| r.estimate).collect();
                let (mean, se) = mean_and_se(&values);
                MethodSummary {
                    experiment: key.0.clone(),
                    method: key.1,
                    count: rows.len(),
                    mean,
                    se: if key.1 == Method::Truth { rows[0].truth_se } else { se },
                    truth: rows[0].truth,
                    truth_se: rows[0].truth_se,
                }
            })
            .collect()
    }

    pub fn summary(&self, experiment: &str, method: Method) -> Option<MethodSummary> {
        self.summarize()
            .into_iter()
            .find(|s| s.experiment == experiment && s.method == method)
    }

    pub fn experiments(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.experiment) {
                out.push(r.experiment.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultTable {
        let mut t = ResultTable::new();
        t.push("a", Method::Additive, 1, 10.5, 11.0, 0.25);
        t.push("a", Method::Additive, 2, 11.5, 11.0, 0.25);
        t.push("a", Method::Truth, 1, 11.0, 11.0, 0.25);
        t.push("b", Method::Cp, 1, 0.1 + 0.2, 1.0 / 3.0, 1e-300);
        t
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let t = sample();
        let back = ResultTable::from_csv_str(&t.to_csv_string()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn contiguity_is_checked() {
        let mut t = sample();
        assert!(t.validate().is_ok());
        t.push("a", Method::Additive, 4, 1.0, 1.0, 1.0);
        assert!(t.validate().is_err());
    }

    #[test]
    fn summaries() {
        let s = sample().summary("a", Method::Additive).unwrap();
        assert_eq!(s.count, 2);
        assert_eq!(s.mean, 11.0);
        assert!((s.se - 0.5).abs() < 1e-12);
        assert_eq!(s.z_score(), 0.0);
    }
}
