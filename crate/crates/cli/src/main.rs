//! Command-line front end for randomized prediction-error estimation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use randrisk::baselines::sigma_ols;
use randrisk::harness::io::{read_matrix_csv, read_vector_csv, report_to_csv};
use randrisk::harness::{
    diabetes_like_design, diabetes_like_pilot, experiments, ExperimentConfig, FigureOutput, SelectorKind,
};
use randrisk::oracle::{mc_true_df, mc_true_err, mc_true_err_alpha, McEstimate, TruthSpec};
use randrisk::rand_est::{default_alpha, err_alpha_averaged, search_df, tune_lambda, bic_from_parts, NoiseLevel};
use randrisk::selection::{lambda_min, ResolveOptions, Selector, SelectorSpec, DEFAULT_ENUMERATION_CAP};
use randrisk::{DVector, DesignMatrix};

#[derive(Parser)]
#[command(name = "randrisk", version, about = "Prediction error after model search via additive randomization")]
struct Cli {
    /// Worker threads for replicate-level parallelism (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Randomized prediction-error estimate for one dataset.
    Estimate(Shared),
    /// Search degrees of freedom and the BIC-type criterion.
    Df(Shared),
    /// Pick the Lasso penalty minimizing the randomized estimate over a grid.
    Tune(TuneArgs),
    /// Monte-Carlo ground truth for a known mean vector.
    Oracle(OracleArgs),
    /// Run one of the simulation studies.
    Simulate(SimulateArgs),
}

#[derive(Args, Clone, Default)]
struct Shared {
    /// Flat `key = value` file; keys are flag names, flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Design matrix CSV with a header row.
    #[arg(long)]
    x_csv: Option<PathBuf>,
    /// Response CSV, one column with a header row.
    #[arg(long)]
    y_csv: Option<PathBuf>,
    /// Model-search procedure.
    #[arg(long, value_parser = ["lasso", "best-subset", "stepwise"])]
    selector: Option<String>,
    /// Lasso penalty.
    #[arg(long)]
    lambda: Option<f64>,
    /// Lasso penalty as a multiple of lambda_min.
    #[arg(long)]
    kappa: Option<f64>,
    /// Model size for best subset and stepwise.
    #[arg(long)]
    k: Option<usize>,
    /// Randomization scale (default n^(-1/4)).
    #[arg(long)]
    alpha: Option<f64>,
    /// Randomization draws averaged per estimate.
    #[arg(long)]
    n_draws: Option<usize>,
    /// Noise variance; estimated by OLS when omitted and p < n.
    #[arg(long)]
    sigma2: Option<f64>,
    /// Master RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default `results`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest number of subsets best subset may enumerate.
    #[arg(long)]
    enum_cap: Option<u128>,
    /// Monte-Carlo draws for lambda_min when --kappa is used.
    #[arg(long)]
    lambda_min_draws: Option<usize>,
}

#[derive(Args)]
struct TuneArgs {
    #[command(flatten)]
    shared: Shared,
    /// Comma-separated penalty grid.
    #[arg(long)]
    lambda_grid: Option<String>,
    /// Comma-separated multiples of lambda_min.
    #[arg(long)]
    kappa_grid: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    /// Err with selection on y.
    Err,
    /// Err_alpha with selection on the randomized response.
    ErrAlpha,
    /// Covariance degrees of freedom.
    Df,
}

impl Quantity {
    fn as_str(self) -> &'static str {
        match self {
            Quantity::Err => "err",
            Quantity::ErrAlpha => "err-alpha",
            Quantity::Df => "df",
        }
    }
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    shared: Shared,
    /// True coefficients; the mean is X beta.
    #[arg(long)]
    beta_csv: Option<PathBuf>,
    /// True mean vector.
    #[arg(long)]
    mu_csv: Option<PathBuf>,
    /// Quantity to estimate (default err).
    #[arg(long)]
    quantity: Option<Quantity>,
    /// Monte-Carlo replications.
    #[arg(long)]
    replications: Option<usize>,
    /// Reference `mean`/`se` file; the run fails unless it agrees within 3 combined SE.
    #[arg(long)]
    pin: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    /// In-sample estimators vs truth across (p, s) Lasso settings.
    Barplot,
    /// In-sample estimate and LOO CV along a lambda grid.
    Lambda,
    /// Search degrees of freedom along a lambda grid.
    Df,
    /// Out-of-sample estimator vs LOO CV, p < n.
    Out,
    /// Best subset of size k = 1..6, Cp vs the randomized estimate.
    BestSubset,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(value_enum)]
    figure: Figure,
    #[command(flatten)]
    shared: Shared,
    /// Observations per simulated dataset.
    #[arg(long)]
    n: Option<usize>,
    /// Restrict the Lasso studies to this number of columns.
    #[arg(long)]
    p: Option<usize>,
    /// Restrict the Lasso studies to this number of nonzero coefficients.
    #[arg(long)]
    s: Option<usize>,
    /// Value of each nonzero coefficient.
    #[arg(long)]
    snr: Option<f64>,
    /// Equicorrelation of the generated design columns.
    #[arg(long)]
    rho: Option<f64>,
    /// Simulated datasets per setting.
    #[arg(long)]
    replications: Option<usize>,
    /// Monte-Carlo replications for the ground truth.
    #[arg(long)]
    truth_replications: Option<usize>,
    /// Parametric bootstrap resamples.
    #[arg(long)]
    bootstrap: Option<usize>,
    /// Comma-separated multiples of lambda_min (lambda and df studies).
    #[arg(long)]
    kappa_grid: Option<String>,
    /// Noise variance used by the estimators: the known value or OLS (p < n).
    #[arg(long, value_parser = ["known", "ols"])]
    sigma2_source: Option<String>,
    /// Design for the degrees-of-freedom study.
    #[arg(long)]
    design_csv: Option<PathBuf>,
    /// Use a generated 442 x 64 stand-in design for the df study.
    #[arg(long)]
    synthetic_design: bool,
}

/// Merged settings: config file entries overridden by explicit flags.
struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    fn load(config: Option<&Path>) -> Result<Self> {
        let mut values = BTreeMap::new();
        if let Some(path) = config {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
            for (i, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| anyhow!("{}:{}: expected 'key = value'", path.display(), i + 1))?;
                values.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(Self { values })
    }

    fn flag<T: ToString>(&mut self, key: &str, v: &Option<T>) {
        if let Some(v) = v {
            self.values.insert(key.to_string(), v.to_string());
        }
    }

    fn flag_path(&mut self, key: &str, v: &Option<PathBuf>) {
        if let Some(v) = v {
            self.values.insert(key.to_string(), v.display().to_string());
        }
    }

    fn apply_shared(&mut self, s: &Shared) {
        self.flag_path("x-csv", &s.x_csv);
        self.flag_path("y-csv", &s.y_csv);
        self.flag("selector", &s.selector);
        self.flag("lambda", &s.lambda);
        self.flag("kappa", &s.kappa);
        self.flag("k", &s.k);
        self.flag("alpha", &s.alpha);
        self.flag("n-draws", &s.n_draws);
        self.flag("sigma2", &s.sigma2);
        self.flag("seed", &s.seed);
        self.flag_path("out", &s.out);
        self.flag("enum-cap", &s.enum_cap);
        self.flag("lambda-min-draws", &s.lambda_min_draws);
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.values
            .get(key)
            .map(|v| v.parse::<T>().map_err(|_| anyhow!("invalid value '{v}' for {key}")))
            .transpose()
    }

    fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| anyhow!("--{key} is required"))
    }

    fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        match self.values.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => bail!("unknown setting '{k}'"),
            None => Ok(()),
        }
    }
}

const SHARED_KEYS: [&str; 13] = [
    "x-csv",
    "y-csv",
    "selector",
    "lambda",
    "kappa",
    "k",
    "alpha",
    "n-draws",
    "sigma2",
    "seed",
    "out",
    "enum-cap",
    "lambda-min-draws",
];

fn keys(extra: &[&'static str]) -> Vec<&'static str> {
    SHARED_KEYS.iter().chain(extra).copied().collect()
}

/// Data, noise level and resolved selector shared by the data-driven commands.
struct Problem {
    x: DesignMatrix,
    y: DVector<f64>,
    noise: NoiseLevel,
    selector: Selector,
    alpha: f64,
    n_draws: usize,
    seed: u64,
    out: PathBuf,
}

fn load_design(path: &Path) -> Result<DesignMatrix> {
    let m = read_matrix_csv(path).with_context(|| format!("reading design {}", path.display()))?;
    Ok(DesignMatrix::new(m)?)
}

fn load_vector(path: &Path, what: &str) -> Result<DVector<f64>> {
    read_vector_csv(path).with_context(|| format!("reading {what} {}", path.display()))
}

fn noise_level(st: &Settings, x: &DesignMatrix, y: &DVector<f64>) -> Result<NoiseLevel> {
    match st.get::<f64>("sigma2")? {
        Some(s2) => Ok(NoiseLevel::known(s2)?),
        None if x.ncols() >= x.nrows() => bail!("sigma2 required when p >= n"),
        None => sigma_ols(x, y).context("estimating sigma2 by OLS"),
    }
}

fn selector_spec(st: &Settings) -> Result<SelectorSpec> {
    let cfg = ExperimentConfig {
        selector: st.get::<String>("selector")?.as_deref().unwrap_or("lasso").parse::<SelectorKind>()?,
        lambda: st.get("lambda")?,
        kappa: st.get("kappa")?,
        k: st.get("k")?,
        ..ExperimentConfig::default()
    };
    Ok(cfg.selector_spec()?)
}

fn resolve_options(st: &Settings, seed: u64) -> Result<ResolveOptions> {
    Ok(ResolveOptions {
        lambda_min_draws: st.get("lambda-min-draws")?.unwrap_or(randrisk::selection::DEFAULT_LAMBDA_MIN_DRAWS),
        seed,
        enumeration_cap: st.get("enum-cap")?.unwrap_or(DEFAULT_ENUMERATION_CAP),
    })
}

fn problem(st: &Settings) -> Result<Problem> {
    let x = load_design(&st.require::<PathBuf>("x-csv")?)?;
    let y = load_vector(&st.require::<PathBuf>("y-csv")?, "response")?;
    if y.len() != x.nrows() {
        bail!("response has {} rows but the design has {}", y.len(), x.nrows());
    }
    let noise = noise_level(st, &x, &y)?;
    let seed = st.get("seed")?.unwrap_or(0);
    let spec = selector_spec(st)?;
    let selector = spec
        .resolve(&x, noise.sigma(), &resolve_options(st, seed)?)
        .context("resolving selector")?;
    Ok(Problem {
        alpha: st.get("alpha")?.unwrap_or_else(|| default_alpha(x.nrows())),
        n_draws: st.get("n-draws")?.unwrap_or(randrisk::rand_est::DEFAULT_DRAWS),
        out: st.get("out")?.unwrap_or_else(|| PathBuf::from("results")),
        x,
        y,
        noise,
        selector,
        seed,
    })
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn describe(sel: &Selector) -> String {
    match sel {
        Selector::Lasso { lambda } => format!("lasso (lambda = {lambda})"),
        Selector::BestSubset { k, .. } => format!("best subset (k = {k})"),
        Selector::ForwardStepwise { k } => format!("forward stepwise (k = {k})"),
        Selector::Fixed(m) => format!("fixed support {{{m}}}"),
    }
}

fn cmd_estimate(args: &Shared) -> Result<()> {
    let mut st = Settings::load(args.config.as_deref())?;
    st.apply_shared(args);
    st.reject_unknown(&SHARED_KEYS)?;
    let pb = problem(&st)?;
    let report = err_alpha_averaged(&pb.x, &pb.y, pb.alpha, &pb.selector, &pb.noise, pb.n_draws, pb.seed)
        .context("estimate")?;
    let path = write_file(&pb.out, "estimate.csv", &report_to_csv(&report))?;
    println!("selector      {}", describe(&pb.selector));
    println!("n, p          {}, {}", pb.x.nrows(), pb.x.ncols());
    println!("sigma2        {} ({:?})", pb.noise.sigma2(), pb.noise.source());
    println!("alpha         {}", pb.alpha);
    println!("draws         {}", report.n_draws);
    println!("estimate      {} (se {})", report.estimate, report.mc_se);
    println!("per obs       {}", report.per_observation());
    println!("report        {}", path.display());
    Ok(())
}

fn cmd_df(args: &Shared) -> Result<()> {
    let mut st = Settings::load(args.config.as_deref())?;
    st.apply_shared(args);
    st.reject_unknown(&SHARED_KEYS)?;
    let pb = problem(&st)?;
    let est = search_df(&pb.x, &pb.y, pb.alpha, &pb.selector, &pb.noise, pb.n_draws, pb.seed).context("df")?;
    let bic = bic_from_parts(est.rss, est.df, pb.x.nrows(), pb.noise.sigma2());
    let path = write_file(&pb.out, "df.csv", &report_to_csv(&est.report))?;
    println!("selector      {}", describe(&pb.selector));
    println!("support       {{{}}}", est.support);
    println!("rss           {}", est.rss);
    println!("df            {}", est.df);
    println!("naive df      {}", est.naive_df());
    println!("bic           {bic}");
    println!("report        {}", path.display());
    Ok(())
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| anyhow!("invalid grid value '{t}'")))
        .collect()
}

fn cmd_tune(args: &TuneArgs) -> Result<()> {
    let mut st = Settings::load(args.shared.config.as_deref())?;
    st.apply_shared(&args.shared);
    st.flag("lambda-grid", &args.lambda_grid);
    st.flag("kappa-grid", &args.kappa_grid);
    st.reject_unknown(&keys(&["lambda-grid", "kappa-grid"]))?;
    let x = load_design(&st.require::<PathBuf>("x-csv")?)?;
    let y = load_vector(&st.require::<PathBuf>("y-csv")?, "response")?;
    let noise = noise_level(&st, &x, &y)?;
    let seed: u64 = st.get("seed")?.unwrap_or(0);
    let alpha = st.get("alpha")?.unwrap_or_else(|| default_alpha(x.nrows()));
    let n_draws = st.get("n-draws")?.unwrap_or(randrisk::rand_est::DEFAULT_DRAWS);
    let out: PathBuf = st.get("out")?.unwrap_or_else(|| PathBuf::from("results"));
    let lambdas = match (st.get::<String>("lambda-grid")?, st.get::<String>("kappa-grid")?) {
        (Some(g), None) => parse_grid(&g)?,
        (None, Some(g)) => {
            let draws = resolve_options(&st, seed)?.lambda_min_draws;
            let lm = lambda_min(&x, noise.sigma(), draws, seed).context("lambda_min")?;
            parse_grid(&g)?.into_iter().map(|k| k * lm.value).collect()
        }
        _ => bail!("give exactly one of --lambda-grid and --kappa-grid"),
    };
    let tuning = tune_lambda(&x, &y, alpha, &lambdas, &noise, n_draws, seed).context("tune")?;
    let mut csv = String::from("index,lambda,estimate,mc_se\n");
    for (i, (l, r)) in lambdas.iter().zip(&tuning.reports).enumerate() {
        csv.push_str(&format!("{i},{l},{},{}\n", r.estimate, r.mc_se));
    }
    let path = write_file(&out, "tune.csv", &csv)?;
    println!("best lambda   {} (grid index {})", tuning.lambda_optimal, tuning.best_index);
    println!("estimate      {}", tuning.reports[tuning.best_index].estimate);
    println!("curve         {}", path.display());
    Ok(())
}

/// Reads `mean = ...` and `se = ...` lines.
fn read_pin(path: &Path) -> Result<McEstimate> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading pin {}", path.display()))?;
    let mut mean = None;
    let mut se = None;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        if let Some((k, v)) = line.split_once('=') {
            let v: f64 = v.trim().parse().map_err(|_| anyhow!("pin {}: bad number '{}'", path.display(), v.trim()))?;
            match k.trim() {
                "mean" => mean = Some(v),
                "se" => se = Some(v),
                _ => {}
            }
        }
    }
    match (mean, se) {
        (Some(mean), Some(se)) => Ok(McEstimate { mean, se }),
        _ => bail!("pin {} needs 'mean' and 'se'", path.display()),
    }
}

fn cmd_oracle(args: &OracleArgs) -> Result<bool> {
    let mut st = Settings::load(args.shared.config.as_deref())?;
    st.apply_shared(&args.shared);
    st.flag_path("beta-csv", &args.beta_csv);
    st.flag_path("mu-csv", &args.mu_csv);
    st.flag("quantity", &args.quantity.map(Quantity::as_str));
    st.flag("replications", &args.replications);
    st.flag_path("pin", &args.pin);
    st.reject_unknown(&keys(&["beta-csv", "mu-csv", "quantity", "replications", "pin"]))?;

    let x = load_design(&st.require::<PathBuf>("x-csv")?)?;
    let mu = match (st.get::<PathBuf>("beta-csv")?, st.get::<PathBuf>("mu-csv")?) {
        (Some(b), None) => {
            let beta = load_vector(&b, "coefficients")?;
            if beta.len() != x.ncols() {
                bail!("coefficients have {} entries but the design has {} columns", beta.len(), x.ncols());
            }
            x.matrix() * beta
        }
        (None, Some(m)) => load_vector(&m, "mean")?,
        _ => bail!("give exactly one of --beta-csv and --mu-csv"),
    };
    let sigma2: f64 = st.get("sigma2")?.ok_or_else(|| anyhow!("--sigma2 is required for oracle runs"))?;
    let seed = st.get("seed")?.unwrap_or(0);
    let reps = st.get("replications")?.unwrap_or(randrisk::oracle::DEFAULT_TRUTH_REPLICATIONS);
    let quantity = match st.get::<String>("quantity")?.as_deref() {
        None | Some("err") => Quantity::Err,
        Some("err-alpha") => Quantity::ErrAlpha,
        Some("df") => Quantity::Df,
        Some(other) => bail!("unknown quantity '{other}'"),
    };
    let selector = selector_spec(&st)?
        .resolve(&x, sigma2.sqrt(), &resolve_options(&st, seed)?)
        .context("resolving selector")?;
    let truth = TruthSpec::new(mu, sigma2, reps, seed)?;
    let est = match quantity {
        Quantity::Err => mc_true_err(&x, &truth, &selector),
        Quantity::ErrAlpha => {
            let alpha = st.get("alpha")?.unwrap_or_else(|| default_alpha(x.nrows()));
            mc_true_err_alpha(&x, &truth, &selector, alpha)
        }
        Quantity::Df => mc_true_df(&x, &truth, &selector),
    }
    .context("oracle")?;
    let out: PathBuf = st.get("out")?.unwrap_or_else(|| PathBuf::from("results"));
    let csv = format!("quantity,replications,mean,se\n{},{reps},{},{}\n", quantity.as_str(), est.mean, est.se);
    let path = write_file(&out, "oracle.csv", &csv)?;
    println!("{:<13} {} (se {}, R = {reps})", quantity.as_str(), est.mean, est.se);
    println!("output        {}", path.display());
    if let Some(pin_path) = st.get::<PathBuf>("pin")? {
        let pin = read_pin(&pin_path)?;
        let se = (est.se.powi(2) + pin.se.powi(2)).sqrt();
        let z = (est.mean - pin.mean) / se;
        let ok = z.abs() <= 3.0;
        println!(
            "pin           {} (se {}): z = {z:.3} {}",
            pin.mean,
            pin.se,
            if ok { "agrees" } else { "DISAGREES" }
        );
        return Ok(ok);
    }
    Ok(true)
}

const SIMULATE_ONLY: [&str; 6] = ["x-csv", "y-csv", "sigma2", "enum-cap", "design-csv", "synthetic-design"];

/// Keys that shape the generated Lasso designs; the other studies fix their own.
const LASSO_STUDY_ONLY: [&str; 4] = ["p", "s", "snr", "rho"];

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let mut st = Settings::load(args.shared.config.as_deref())?;
    st.apply_shared(&args.shared);
    st.flag("n", &args.n);
    st.flag("p", &args.p);
    st.flag("s", &args.s);
    st.flag("snr", &args.snr);
    st.flag("rho", &args.rho);
    st.flag("replications", &args.replications);
    st.flag("truth-replications", &args.truth_replications);
    st.flag("bootstrap", &args.bootstrap);
    st.flag("kappa-grid", &args.kappa_grid);
    st.flag("sigma2-source", &args.sigma2_source);
    st.flag_path("design-csv", &args.design_csv);
    if args.synthetic_design {
        st.values.insert("synthetic-design".into(), "true".into());
    }
    if st.values.contains_key("sigma2") {
        bail!("simulate takes sigma and sigma2-source, not sigma2");
    }
    if st.values.contains_key("x-csv") {
        bail!("simulate uses --design-csv for the df study and generates designs otherwise");
    }
    if matches!(args.figure, Figure::BestSubset | Figure::Df) {
        if let Some(k) = LASSO_STUDY_ONLY.iter().find(|k| st.values.contains_key(**k)) {
            bail!("'{k}' only applies to the barplot, lambda and out studies");
        }
    }
    let mut cfg = ExperimentConfig::default();
    for (k, v) in &st.values {
        if !SIMULATE_ONLY.contains(&k.as_str()) {
            cfg.set(k, v).with_context(|| format!("setting {k}"))?;
        }
    }
    cfg.validate()?;
    let output: FigureOutput = match args.figure {
        Figure::Barplot => experiments::run_fig_barplot(&cfg),
        Figure::Lambda => experiments::run_fig_lambda_sweep(&cfg),
        Figure::Out => experiments::run_fig_out_of_sample(&cfg),
        Figure::BestSubset => experiments::run_fig_best_subset(&cfg),
        Figure::Df => {
            let synthetic = st.get::<bool>("synthetic-design")?.unwrap_or(false);
            let (x, y) = match (st.get::<PathBuf>("design-csv")?, synthetic) {
                (Some(path), false) => {
                    let x = load_design(&path)?;
                    let y = match st.get::<PathBuf>("y-csv")? {
                        Some(p) => load_vector(&p, "pilot response")?,
                        None => diabetes_like_pilot(&x, cfg.seed)?,
                    };
                    (x, y)
                }
                (None, true) => {
                    let x = diabetes_like_design(randrisk::harness::design::DIABETES_ROWS, cfg.seed)?;
                    let y = diabetes_like_pilot(&x, cfg.seed)?;
                    (x, y)
                }
                (Some(_), true) => bail!("give only one of --design-csv and --synthetic-design"),
                (None, false) => bail!("simulate df requires --design-csv (or --synthetic-design)"),
            };
            experiments::run_fig_df(&cfg, &x, &y)
        }
    }
    .context("simulation")?;
    let files = output.write(&cfg.out)?;
    for s in output.table.summarize() {
        println!(
            "{:<22} {:<10} mean {:>12.4} se {:>9.4} truth {:>12.4} (se {:.4})",
            s.experiment,
            s.method.as_str(),
            s.mean,
            s.se,
            s.truth,
            s.truth_se
        );
    }
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring thread pool")?;
    }
    match &cli.command {
        Command::Estimate(a) => cmd_estimate(a).map(|_| true),
        Command::Df(a) => cmd_df(a).map(|_| true),
        Command::Tune(a) => cmd_tune(a).map(|_| true),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Simulate(a) => cmd_simulate(a).map(|_| true),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

