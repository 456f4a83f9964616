//! Simulation studies comparing the additive-randomization estimator with Cp,
//! leave-one-out CV, the parametric bootstrap and Monte-Carlo truth.
//!
//! Every random quantity is keyed by `(config seed, design key, role,
//! replicate)`, so a run is reproducible from its configuration alone and is
//! unaffected by the size of the thread pool. Settings that share a design key
//! (the kappa values of one sweep) also share designs and responses.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::DVector;
use rayon::prelude::*;

use super::config::{ExperimentConfig, Sigma2Source};
use super::design::{gen_design, iid_gaussian_design, pilot_truth};
use super::plot::{box_plot, line_plot, Series};
use super::table::{Method, MethodSummary, ResultTable};
use crate::baselines::{cp_estimate, loo_cv, parametric_bootstrap, sigma_ols};
use crate::error::{Error, Result};
use crate::linalg::DesignMatrix;
use crate::oracle::{mc_true_df, mc_true_err, mc_true_err_out, McEstimate, TruthSpec};
use crate::rand_est::{err_alpha_averaged, err_out_alpha, search_df, NoiseLevel};
use crate::rng;
use crate::selection::{lambda_min, Selector, DEFAULT_ENUMERATION_CAP};

/// Randomization scale used by the figure runners unless overridden.
pub const FIGURE_ALPHA: f64 = 0.25;
pub const LAMBDA_SWEEP_KAPPAS: [f64; 8] = [0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6];
pub const DF_KAPPAS: [f64; 5] = [0.05, 0.1, 0.15, 0.2, 0.25];

// Stream roles under a design key.
const DESIGN: u64 = 0;
const LAMBDA: u64 = 1;
const TRUTH: u64 = 2;
const RESPONSE: u64 = 3;
const ADDITIVE: u64 = 4;
const BOOTSTRAP: u64 = 5;
const NEW_DESIGN: u64 = 6;

fn seed_for(cfg: &ExperimentConfig, key: u64, role: u64) -> u64 {
    rng::derive_path(cfg.seed, &[key, role])
}

fn replicate_seed(cfg: &ExperimentConfig, key: u64, role: u64, r: usize) -> u64 {
    rng::derive_path(cfg.seed, &[key, role, r as u64])
}

fn figure_alpha(cfg: &ExperimentConfig) -> f64 {
    cfg.alpha.unwrap_or(FIGURE_ALPHA)
}

fn draw_response(mu: &DVector<f64>, sigma: f64, seed: u64) -> DVector<f64> {
    mu + rng::normal_vector(&mut rng::stream(seed), mu.len(), sigma)
}

fn noise_for(cfg: &ExperimentConfig, x: &DesignMatrix, y: &DVector<f64>, sigma2: f64) -> Result<NoiseLevel> {
    match cfg.sigma2_source {
        Sigma2Source::Known => NoiseLevel::known(sigma2),
        Sigma2Source::Ols => sigma_ols(x, y),
    }
}

/// Files and tables produced by one figure runner.
#[derive(Debug, Clone)]
pub struct FigureOutput {
    pub name: &'static str,
    pub table: ResultTable,
    /// Aggregated per-setting curve, when the figure has one.
    pub curves: Option<String>,
    pub svg: String,
    pub config: String,
}

impl FigureOutput {
    /// Writes `<name>_results.csv`, `<name>_curves.csv`, `<name>.svg` and
    /// `<name>_config.txt` under `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut put = |file: String, body: &str| -> Result<()> {
            let path = dir.join(file);
            std::fs::write(&path, body)?;
            written.push(path);
            Ok(())
        };
        put(format!("{}_results.csv", self.name), &self.table.to_csv_string())?;
        if let Some(c) = &self.curves {
            put(format!("{}_curves.csv", self.name), c)?;
        }
        put(format!("{}.svg", self.name), &self.svg)?;
        put(format!("{}_config.txt", self.name), &self.config)?;
        Ok(written)
    }
}

fn push_replicates(table: &mut ResultTable, id: &str, method: Method, values: &[f64], truth: &McEstimate) {
    for (r, v) in values.iter().enumerate() {
        table.push(id, method, r + 1, *v, truth.mean, truth.se);
    }
}

fn push_truth(table: &mut ResultTable, id: &str, truth: &McEstimate) {
    table.push(id, Method::Truth, 1, truth.mean, truth.mean, truth.se);
}

/// One relaxed-Lasso simulation setting on an equicorrelated design.
#[derive(Debug, Clone, PartialEq)]
pub struct LassoSetting {
    pub id: String,
    /// Settings with equal keys share the design and the responses.
    pub design_key: u64,
    pub n: usize,
    pub p: usize,
    pub s: usize,
    pub snr: f64,
    pub rho: f64,
    pub sigma: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodSet {
    pub additive: bool,
    pub cp: bool,
    pub cv: bool,
    pub bootstrap: bool,
}

impl MethodSet {
    pub const ALL: MethodSet = MethodSet {
        additive: true,
        cp: true,
        cv: true,
        bootstrap: true,
    };

    fn enabled(&self) -> Vec<Method> {
        let mut out = Vec::new();
        for (on, m) in [
            (self.additive, Method::Additive),
            (self.cp, Method::Cp),
            (self.cv, Method::Cv),
            (self.bootstrap, Method::Bootstrap),
        ] {
            if on {
                out.push(m);
            }
        }
        out
    }
}

struct LassoInstance {
    x: DesignMatrix,
    mu: DVector<f64>,
    lambda_min: f64,
}

fn lasso_instance(cfg: &ExperimentConfig, st: &LassoSetting) -> Result<LassoInstance> {
    if st.s > st.p {
        return Err(Error::InvalidParameter(format!("setting {}: s exceeds p", st.id)));
    }
    let x = gen_design(st.n, st.p, st.rho, seed_for(cfg, st.design_key, DESIGN))?;
    let beta0 = DVector::from_fn(st.p, |j, _| if j < st.s { st.snr } else { 0.0 });
    let mu = x.matrix() * beta0;
    let lm = lambda_min(&x, st.sigma, cfg.lambda_min_draws, seed_for(cfg, st.design_key, LAMBDA))?;
    Ok(LassoInstance {
        x,
        mu,
        lambda_min: lm.value,
    })
}

/// In-sample study for each setting: the chosen estimators over
/// `cfg.replications` responses plus the Monte-Carlo truth.
pub fn run_lasso_in_sample(cfg: &ExperimentConfig, settings: &[LassoSetting], methods: MethodSet) -> Result<ResultTable> {
    let alpha = figure_alpha(cfg);
    let mut table = ResultTable::new();
    for st in settings {
        let inst = lasso_instance(cfg, st)?;
        let selector = Selector::Lasso {
            lambda: st.kappa * inst.lambda_min,
        };
        let sigma2 = st.sigma * st.sigma;
        let truth_spec = TruthSpec::new(
            inst.mu.clone(),
            sigma2,
            cfg.truth_replications,
            seed_for(cfg, st.design_key, TRUTH),
        )?;
        let truth = mc_true_err(&inst.x, &truth_spec, &selector)?;
        let enabled = methods.enabled();
        let per_rep: Vec<Vec<f64>> = (0..cfg.replications)
            .into_par_iter()
            .map(|r| {
                let run = || -> Result<Vec<f64>> {
                    let y = draw_response(&inst.mu, st.sigma, replicate_seed(cfg, st.design_key, RESPONSE, r));
                    let noise = noise_for(cfg, &inst.x, &y, sigma2)?;
                    let mut vals = Vec::with_capacity(enabled.len());
                    for m in &enabled {
                        vals.push(match m {
                            Method::Additive => {
                                let seed = replicate_seed(cfg, st.design_key, ADDITIVE, r);
                                err_alpha_averaged(&inst.x, &y, alpha, &selector, &noise, cfg.n_draws, seed)?.estimate
                            }
                            Method::Cp => {
                                let m_hat = selector.select(&inst.x, &y)?;
                                cp_estimate(&inst.x, &y, &m_hat, &noise)?
                            }
                            Method::Cv => loo_cv(&inst.x, &y, &selector)?,
                            Method::Bootstrap => {
                                let seed = replicate_seed(cfg, st.design_key, BOOTSTRAP, r);
                                parametric_bootstrap(&inst.x, &y, &selector, &noise, cfg.bootstrap, seed)?.estimate
                            }
                            Method::Truth => unreachable!(),
                        });
                    }
                    Ok(vals)
                };
                run().map_err(|e| e.in_replicate(r))
            })
            .collect::<Result<_>>()?;
        for (k, m) in enabled.iter().enumerate() {
            let values: Vec<f64> = per_rep.iter().map(|v| v[k]).collect();
            push_replicates(&mut table, &st.id, *m, &values, &truth);
        }
        push_truth(&mut table, &st.id, &truth);
    }
    Ok(table)
}

/// The (p, s) settings of the estimator comparison at n = `cfg.n`: p in
/// {50, 200, 400} and s in {10, 20}, narrowed to `cfg.p` / `cfg.s` when set.
/// Design seeds follow the full grid, so a narrowed run reproduces the
/// matching rows of the full one.
pub fn barplot_settings(cfg: &ExperimentConfig) -> Vec<LassoSetting> {
    let ps = cfg.p.map_or(vec![50, 200, 400], |p| vec![p]);
    let ss = cfg.s.map_or(vec![10, 20], |s| vec![s]);
    let mut out = Vec::new();
    for (ip, &p) in ps.iter().enumerate() {
        for (is, &s) in ss.iter().enumerate() {
            let key = grid_key(&[50, 200, 400], p, ip) * 2 + grid_key(&[10, 20], s, is);
            out.push(LassoSetting {
                id: format!("n{}_p{p}_s{s}", cfg.n),
                design_key: key,
                n: cfg.n,
                p,
                s,
                snr: cfg.snr,
                rho: cfg.rho,
                sigma: cfg.sigma,
                kappa: if p < cfg.n { 1.1 } else { 1.5 },
            });
        }
    }
    out
}

/// Position of `v` in the default grid, or a fresh key past it.
fn grid_key(grid: &[usize], v: usize, fallback: usize) -> u64 {
    grid.iter().position(|&g| g == v).unwrap_or(grid.len() + fallback) as u64
}

pub fn run_fig_barplot(cfg: &ExperimentConfig) -> Result<FigureOutput> {
    run_barplot_with(cfg, &barplot_settings(cfg))
}

pub fn run_barplot_with(cfg: &ExperimentConfig, settings: &[LassoSetting]) -> Result<FigureOutput> {
    let table = run_lasso_in_sample(cfg, settings, MethodSet::ALL)?;
    let svg = box_plot(&table, "In-sample prediction error estimates");
    Ok(FigureOutput {
        name: "barplot",
        curves: Some(summary_csv(&table.summarize())),
        table,
        svg,
        config: cfg.to_kv_string(),
    })
}

fn summary_csv(summaries: &[MethodSummary]) -> String {
    let mut out = String::from("experiment,method,count,mean,se,truth,truth_se,z\n");
    for s in summaries {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            s.experiment,
            s.method.as_str(),
            s.count,
            s.mean,
            s.se,
            s.truth,
            s.truth_se,
            if s.method == Method::Truth { 0.0 } else { s.z_score() }
        );
    }
    out
}

/// Kappa sweep on n = `cfg.n`, p = `cfg.p` (default 200), s in {10, 20} or `cfg.s`.
pub fn lambda_sweep_settings(cfg: &ExperimentConfig) -> Vec<LassoSetting> {
    let kappas = cfg.kappa_grid.clone().unwrap_or_else(|| LAMBDA_SWEEP_KAPPAS.to_vec());
    let ss = cfg.s.map_or(vec![10, 20], |s| vec![s]);
    let mut out = Vec::new();
    for (is, &s) in ss.iter().enumerate() {
        let key = grid_key(&[10, 20], s, is);
        for &kappa in &kappas {
            out.push(LassoSetting {
                id: format!("s{s}_kappa{kappa}"),
                design_key: key,
                n: cfg.n,
                p: cfg.p.unwrap_or(200),
                s,
                snr: cfg.snr,
                rho: cfg.rho,
                sigma: cfg.sigma,
                kappa,
            });
        }
    }
    out
}

pub fn run_fig_lambda_sweep(cfg: &ExperimentConfig) -> Result<FigureOutput> {
    run_lambda_sweep_with(cfg, &lambda_sweep_settings(cfg))
}

pub fn run_lambda_sweep_with(cfg: &ExperimentConfig, settings: &[LassoSetting]) -> Result<FigureOutput> {
    let methods = MethodSet {
        additive: true,
        cp: false,
        cv: true,
        bootstrap: false,
    };
    let table = run_lasso_in_sample(cfg, settings, methods)?;
    let mut curves = String::from(
        "experiment,s,kappa,additive_mean,additive_se,cv_mean,cv_se,cv_per_obs_mean,cv_per_obs_se,truth,truth_se,truth_per_obs\n",
    );
    type Curve = (String, Vec<(f64, f64, f64)>);
    let mut series: Vec<Curve> = Vec::new();
    let mut add_point = |name: String, pt: (f64, f64, f64)| match series.iter_mut().find(|(n, _)| *n == name) {
        Some((_, pts)) => pts.push(pt),
        None => series.push((name, vec![pt])),
    };
    for st in settings {
        let a = table.summary(&st.id, Method::Additive).expect("additive rows present");
        let c = table.summary(&st.id, Method::Cv).expect("cv rows present");
        let nf = st.n as f64;
        let _ = writeln!(
            curves,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            st.id,
            st.s,
            st.kappa,
            a.mean,
            a.se,
            c.mean,
            c.se,
            c.mean / nf,
            c.se / nf,
            a.truth,
            a.truth_se,
            a.truth / nf
        );
        add_point(format!("additive s={}", st.s), (st.kappa, a.mean, a.se));
        add_point(format!("cv s={}", st.s), (st.kappa, c.mean, c.se));
        add_point(format!("truth s={}", st.s), (st.kappa, a.truth, a.truth_se));
    }
    let series: Vec<Series<'_>> = series
        .iter()
        .map(|(name, pts)| Series {
            name,
            points: pts.clone(),
        })
        .collect();
    let svg = line_plot(&series, "Prediction error across the penalty grid", "kappa");
    Ok(FigureOutput {
        name: "lambda",
        table,
        curves: Some(curves),
        svg,
        config: cfg.to_kv_string(),
    })
}

/// Search degrees of freedom of the relaxed Lasso on a fixed design, with the
/// truth built from an OLS pilot fit of `pilot_y`. Methods in the table:
/// `additive` is the randomized df estimate, `cp` the naive |M(y)|, `truth`
/// the Monte-Carlo covariance df.
pub fn run_fig_df(cfg: &ExperimentConfig, x: &DesignMatrix, pilot_y: &DVector<f64>) -> Result<FigureOutput> {
    if x.nrows() < 2 {
        return Err(Error::InvalidInput("design needs at least two rows".into()));
    }
    let pilot = pilot_truth(x, pilot_y)?;
    let sigma = pilot.sigma2.sqrt();
    let alpha = figure_alpha(cfg);
    let kappas = cfg.kappa_grid.clone().unwrap_or_else(|| DF_KAPPAS.to_vec());
    let lm = lambda_min(x, sigma, cfg.lambda_min_draws, seed_for(cfg, 0, LAMBDA))?;
    let mut table = ResultTable::new();
    let mut curves = String::from("experiment,kappa,lambda,df_mean,df_se,naive_mean,naive_se,truth,truth_se\n");
    let mut pts = (Vec::new(), Vec::new(), Vec::new());
    for &kappa in &kappas {
        let id = format!("kappa{kappa}");
        let lambda = kappa * lm.value;
        let selector = Selector::Lasso { lambda };
        let spec = TruthSpec::new(pilot.mu.clone(), pilot.sigma2, cfg.truth_replications, seed_for(cfg, 0, TRUTH))?;
        let truth = mc_true_df(x, &spec, &selector)?;
        let vals: Vec<(f64, f64)> = (0..cfg.replications)
            .into_par_iter()
            .map(|r| {
                let run = || -> Result<(f64, f64)> {
                    let y = draw_response(&pilot.mu, sigma, replicate_seed(cfg, 0, RESPONSE, r));
                    let noise = noise_for(cfg, x, &y, pilot.sigma2)?;
                    let seed = replicate_seed(cfg, 0, ADDITIVE, r);
                    let est = search_df(x, &y, alpha, &selector, &noise, cfg.n_draws, seed)?;
                    Ok((est.df, est.naive_df() as f64))
                };
                run().map_err(|e| e.in_replicate(r))
            })
            .collect::<Result<_>>()?;
        let df: Vec<f64> = vals.iter().map(|v| v.0).collect();
        let naive: Vec<f64> = vals.iter().map(|v| v.1).collect();
        push_replicates(&mut table, &id, Method::Additive, &df, &truth);
        push_replicates(&mut table, &id, Method::Cp, &naive, &truth);
        push_truth(&mut table, &id, &truth);
        let a = McEstimate::from_values(&df);
        let nv = McEstimate::from_values(&naive);
        let _ = writeln!(
            curves,
            "{id},{kappa},{lambda},{},{},{},{},{},{}",
            a.mean, a.se, nv.mean, nv.se, truth.mean, truth.se
        );
        pts.0.push((kappa, a.mean, a.se));
        pts.1.push((kappa, nv.mean, nv.se));
        pts.2.push((kappa, truth.mean, truth.se));
    }
    let svg = line_plot(
        &[
            Series { name: "randomized df", points: pts.0 },
            Series { name: "naive |M|", points: pts.1 },
            Series { name: "true df", points: pts.2 },
        ],
        "Degrees of freedom of the relaxed Lasso",
        "kappa",
    );
    Ok(FigureOutput {
        name: "df",
        table,
        curves: Some(curves),
        svg,
        config: cfg.to_kv_string(),
    })
}

/// Low-dimensional out-of-sample settings, p in {20, 50} or `cfg.p`, s = `cfg.s`
/// (default 10, capped at p).
pub fn out_of_sample_settings(cfg: &ExperimentConfig) -> Vec<LassoSetting> {
    let ps = cfg.p.map_or(vec![20, 50], |p| vec![p]);
    ps.iter()
        .enumerate()
        .map(|(ip, &p)| LassoSetting {
            id: format!("n{}_p{p}", cfg.n),
            design_key: grid_key(&[20, 50], p, ip),
            n: cfg.n,
            p,
            s: cfg.s.unwrap_or(10).min(p),
            snr: cfg.snr,
            rho: cfg.rho,
            sigma: cfg.sigma,
            kappa: cfg.kappa.unwrap_or(1.1),
        })
        .collect()
}

pub fn run_fig_out_of_sample(cfg: &ExperimentConfig) -> Result<FigureOutput> {
    run_out_of_sample_with(cfg, &out_of_sample_settings(cfg))
}

/// Out-of-sample study: randomized estimator and LOO-CV against the
/// Monte-Carlo out-of-sample error at an independently drawn `X_new`.
pub fn run_out_of_sample_with(cfg: &ExperimentConfig, settings: &[LassoSetting]) -> Result<FigureOutput> {
    let alpha = figure_alpha(cfg);
    if let Some(st) = settings.iter().find(|st| st.p >= st.n) {
        return Err(Error::UnsupportedRegime(format!(
            "out-of-sample estimation needs p < n, setting {} has p = {}, n = {}",
            st.id, st.p, st.n
        )));
    }
    let mut table = ResultTable::new();
    for st in settings {
        let inst = lasso_instance(cfg, st)?;
        let x_new = gen_design(st.n, st.p, st.rho, seed_for(cfg, st.design_key, NEW_DESIGN))?;
        let beta0 = DVector::from_fn(st.p, |j, _| if j < st.s { st.snr } else { 0.0 });
        let mu_new = x_new.matrix() * beta0;
        let selector = Selector::Lasso {
            lambda: st.kappa * inst.lambda_min,
        };
        let sigma2 = st.sigma * st.sigma;
        let spec = TruthSpec::new(inst.mu.clone(), sigma2, cfg.truth_replications, seed_for(cfg, st.design_key, TRUTH))?;
        let truth = mc_true_err_out(&inst.x, &x_new, &mu_new, &spec, &selector, None)?;
        let vals: Vec<(f64, f64)> = (0..cfg.replications)
            .into_par_iter()
            .map(|r| {
                let run = || -> Result<(f64, f64)> {
                    let y = draw_response(&inst.mu, st.sigma, replicate_seed(cfg, st.design_key, RESPONSE, r));
                    let noise = noise_for(cfg, &inst.x, &y, sigma2)?;
                    let seed = replicate_seed(cfg, st.design_key, ADDITIVE, r);
                    let add = err_out_alpha(&inst.x, &x_new, &y, alpha, &selector, &noise, cfg.n_draws, seed)?.estimate;
                    let cv = loo_cv(&inst.x, &y, &selector)?;
                    Ok((add, cv))
                };
                run().map_err(|e| e.in_replicate(r))
            })
            .collect::<Result<_>>()?;
        let add: Vec<f64> = vals.iter().map(|v| v.0).collect();
        let cv: Vec<f64> = vals.iter().map(|v| v.1).collect();
        push_replicates(&mut table, &st.id, Method::Additive, &add, &truth);
        push_replicates(&mut table, &st.id, Method::Cv, &cv, &truth);
        push_truth(&mut table, &st.id, &truth);
    }
    let svg = box_plot(&table, "Out-of-sample prediction error");
    Ok(FigureOutput {
        name: "out",
        curves: Some(summary_csv(&table.summarize())),
        table,
        svg,
        config: cfg.to_kv_string(),
    })
}

/// Best subset of every size on an i.i.d. Gaussian n x 6 design with
/// coefficients (1, ..., 6): post-selection Cp and the randomized estimator
/// against the truth.
pub fn run_fig_best_subset(cfg: &ExperimentConfig) -> Result<FigureOutput> {
    let p = 6;
    let x = iid_gaussian_design(cfg.n, p, seed_for(cfg, 0, DESIGN))?;
    let beta = DVector::from_fn(p, |j, _| (j + 1) as f64);
    let mu = x.matrix() * beta;
    let sigma = cfg.sigma;
    let sigma2 = sigma * sigma;
    let alpha = figure_alpha(cfg);
    let mut table = ResultTable::new();
    let mut curves = String::from("experiment,k,additive_mean,additive_se,cp_mean,cp_se,truth,truth_se\n");
    let mut pts = (Vec::new(), Vec::new(), Vec::new());
    for k in 1..=p {
        let id = format!("k{k}");
        let selector = Selector::BestSubset {
            k,
            cap: DEFAULT_ENUMERATION_CAP,
        };
        let spec = TruthSpec::new(mu.clone(), sigma2, cfg.truth_replications, seed_for(cfg, k as u64, TRUTH))?;
        let truth = mc_true_err(&x, &spec, &selector)?;
        let vals: Vec<(f64, f64)> = (0..cfg.replications)
            .into_par_iter()
            .map(|r| {
                let run = || -> Result<(f64, f64)> {
                    let y = draw_response(&mu, sigma, replicate_seed(cfg, 0, RESPONSE, r));
                    let noise = noise_for(cfg, &x, &y, sigma2)?;
                    let seed = replicate_seed(cfg, k as u64, ADDITIVE, r);
                    let add = err_alpha_averaged(&x, &y, alpha, &selector, &noise, cfg.n_draws, seed)?.estimate;
                    let m_hat = selector.select(&x, &y)?;
                    let cp = cp_estimate(&x, &y, &m_hat, &noise)?;
                    Ok((add, cp))
                };
                run().map_err(|e| e.in_replicate(r))
            })
            .collect::<Result<_>>()?;
        let add: Vec<f64> = vals.iter().map(|v| v.0).collect();
        let cp: Vec<f64> = vals.iter().map(|v| v.1).collect();
        push_replicates(&mut table, &id, Method::Additive, &add, &truth);
        push_replicates(&mut table, &id, Method::Cp, &cp, &truth);
        push_truth(&mut table, &id, &truth);
        let a = McEstimate::from_values(&add);
        let c = McEstimate::from_values(&cp);
        let _ = writeln!(curves, "{id},{k},{},{},{},{},{},{}", a.mean, a.se, c.mean, c.se, truth.mean, truth.se);
        let kf = k as f64;
        pts.0.push((kf, a.mean, a.se));
        pts.1.push((kf, c.mean, c.se));
        pts.2.push((kf, truth.mean, truth.se));
    }
    let svg = line_plot(
        &[
            Series { name: "additive", points: pts.0 },
            Series { name: "cp", points: pts.1 },
            Series { name: "truth", points: pts.2 },
        ],
        "Best subset prediction error by subset size",
        "k",
    );
    Ok(FigureOutput {
        name: "best_subset",
        table,
        curves: Some(curves),
        svg,
        config: cfg.to_kv_string(),
    })
}
