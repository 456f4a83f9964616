//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use randrisk::baselines::{cp_estimate, parametric_bootstrap};
use randrisk::harness::experiments::{run_fig_best_subset, run_out_of_sample_with, LassoSetting};
use randrisk::harness::io::{read_matrix_csv, read_vector_csv};
use randrisk::harness::{diabetes_like_design, diabetes_like_pilot, gen_design, pilot_truth, ExperimentConfig, Method};
use randrisk::oracle::{mc_true_df, mc_true_err, mc_true_err_alpha, quadratic_variance_check, McEstimate, TruthSpec};
use randrisk::rand_est::{err_alpha_averaged, search_df, NoiseLevel};
use randrisk::rng::{derive_path, normal_vector, standard_normal_vector, stream};
use randrisk::selection::{best_subset, kkt_residual, lambda_min, lasso_fit, Selector, Support};
use randrisk::{DMatrix, DVector, DesignMatrix, Projection};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn known(s2: f64) -> NoiseLevel {
    NoiseLevel::known(s2).unwrap()
}

fn response(mu: &DVector<f64>, sigma: f64, seed: u64) -> DVector<f64> {
    mu + normal_vector(&mut stream(seed), mu.len(), sigma)
}

fn combined(a: f64, b: f64) -> f64 {
    (a * a + b * b).sqrt()
}

/// Mean of the single-draw estimator over fresh (y, w) pairs.
fn replicate_single_draws(
    x: &DesignMatrix,
    mu: &DVector<f64>,
    sel: &Selector,
    alpha: f64,
    reps: usize,
    seed: u64,
) -> Vec<f64> {
    let noise = known(1.0);
    (0..reps)
        .map(|r| {
            let y = response(mu, 1.0, derive_path(seed, &[r as u64, 0]));
            err_alpha_averaged(x, &y, alpha, sel, &noise, 1, derive_path(seed, &[r as u64, 1]))
                .unwrap()
                .estimate
        })
        .collect()
}

fn c1_unbiasedness() -> Outcome {
    let x = read_matrix_csv(&fixture("tiny_x.csv")).unwrap();
    let beta = read_vector_csv(&fixture("tiny_beta.csv")).unwrap();
    let mu = &x * beta;
    let x = DesignMatrix::new(x).unwrap();
    let sel = Selector::BestSubset { k: 2, cap: 1000 };
    let est = McEstimate::from_values(&replicate_single_draws(&x, &mu, &sel, 0.3, 2000, 101));
    let truth = mc_true_err_alpha(&x, &TruthSpec::new(mu, 1.0, 10_000, 102).unwrap(), &sel, 0.3).unwrap();
    let z = (est.mean - truth.mean) / combined(est.se, truth.se);
    outcome(
        z.abs() < 3.0,
        format!("mean {:.3} (se {:.3}) vs Err_alpha {:.3} (se {:.3}), z = {z:.2}", est.mean, est.se, truth.mean, truth.se),
    )
}

fn c2_best_subset_figure() -> Outcome {
    let cfg = ExperimentConfig {
        n: 100,
        sigma: 1.0,
        alpha: Some(0.25),
        n_draws: 50,
        replications: 500,
        truth_replications: 10_000,
        seed: 2017,
        ..ExperimentConfig::default()
    };
    let fig = run_fig_best_subset(&cfg).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for k in 1..=6 {
        let id = format!("k{k}");
        let a = fig.table.summary(&id, Method::Additive).unwrap();
        let c = fig.table.summary(&id, Method::Cp).unwrap();
        let za = (a.mean - a.truth) / combined(a.se, a.truth_se);
        let zc = (c.mean - c.truth) / combined(c.se, c.truth_se);
        let ok_a = za.abs() < 2.0;
        let ok_c = !(2..=4).contains(&k) || zc < -2.0;
        pass &= ok_a && ok_c;
        parts.push(format!("k={k}: z_add {za:+.2}{} z_cp {zc:+.2}{}", if ok_a { "" } else { "!" }, if ok_c { "" } else { "!" }));
    }
    outcome(pass, parts.join("; "))
}

fn c3_fixed_h() -> Outcome {
    let (n, p) = (50, 10);
    let x = gen_design(n, p, 0.3, 301).unwrap();
    let mu = x.matrix() * DVector::from_fn(p, |j, _| 1.0 + j as f64 * 0.5)
        + DVector::from_fn(n, |i, _| ((i as f64) * 0.7).sin());
    let m = Support::new(vec![0, 1, 2, 3], p).unwrap();
    let sel = Selector::Fixed(m.clone());
    let h = Projection::new(&x, &m).unwrap();
    let truth = (&mu - h.apply(&mu)).norm_squared() + (n as f64 + 4.0);
    let noise = known(1.0);
    let reps = 1000;
    let mut add = Vec::with_capacity(reps);
    let mut cp = Vec::with_capacity(reps);
    let mut boot = Vec::with_capacity(reps);
    for r in 0..reps {
        let y = response(&mu, 1.0, derive_path(302, &[r as u64]));
        add.push(err_alpha_averaged(&x, &y, 0.25, &sel, &noise, 20, derive_path(303, &[r as u64])).unwrap().estimate);
        cp.push(cp_estimate(&x, &y, &m, &noise).unwrap());
        boot.push(parametric_bootstrap(&x, &y, &sel, &noise, 100, derive_path(304, &[r as u64])).unwrap().estimate);
    }
    let mut pass = true;
    let mut parts = vec![format!("truth {truth:.3}")];
    for (name, v) in [("additive", &add), ("cp", &cp), ("bootstrap", &boot)] {
        let e = McEstimate::from_values(v);
        let z = (e.mean - truth) / e.se;
        pass &= z.abs() < 3.0;
        parts.push(format!("{name} {:.3} (z {z:+.2})", e.mean));
    }
    outcome(pass, parts.join(", "))
}

fn c4_quadratic_variance() -> Outcome {
    let mut g = stream(401);
    let b = DMatrix::from_fn(8, 8, |_, _| standard_normal_vector(&mut g, 1)[0]);
    let a = (&b + b.transpose()) * 0.5;
    let (emp, analytic) = quadratic_variance_check(&a, 1_000_000, 402).unwrap();
    let rel = emp / analytic - 1.0;
    outcome(rel.abs() < 0.05, format!("empirical {emp:.3} vs 2tr(A^4) {analytic:.3}, rel {rel:+.4}"))
}

fn c5_cp_variance() -> Outcome {
    let n = 30;
    let x = DesignMatrix::new(DMatrix::from_fn(n, 3, |i, j| ((i * (j + 2)) as f64 * 0.37).cos())).unwrap();
    let m = Support::full(3);
    let h = Projection::new(&x, &m).unwrap().matrix();
    let mu = DVector::from_fn(n, |i, _| (i as f64 / 4.0).sin() * 2.0);
    let s2 = 1.5;
    let noise = known(s2);
    let values: Vec<f64> = (0..10_000)
        .map(|r| cp_estimate(&x, &response(&mu, s2.sqrt(), derive_path(501, &[r])), &m, &noise).unwrap())
        .collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (values.len() - 1) as f64;
    let analytic = randrisk::oracle::cp_variance_analytic(&h, &mu, s2).unwrap();
    let rel = var / analytic - 1.0;
    outcome(rel.abs() < 0.10, format!("empirical {var:.3} vs analytic {analytic:.3}, rel {rel:+.4}"))
}

fn c6_bias_variance() -> Outcome {
    let (n, p, s) = (100, 50, 10);
    let x = gen_design(n, p, 0.3, 601).unwrap();
    let mu = x.matrix() * DVector::from_fn(p, |j, _| if j < s { 7.0 } else { 0.0 });
    let lam = 1.1 * lambda_min(&x, 1.0, 1000, 602).unwrap().value;
    let sel = Selector::Lasso { lambda: lam };
    let err = mc_true_err(&x, &TruthSpec::new(mu.clone(), 1.0, 10_000, 603).unwrap(), &sel).unwrap();
    let stats = |alpha: f64| {
        let v = replicate_single_draws(&x, &mu, &sel, alpha, 2000, 604);
        let e = McEstimate::from_values(&v);
        let var = v.iter().map(|a| (a - e.mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64;
        (e.mean - err.mean, combined(e.se, err.se), var)
    };
    let (b1, se1, v1) = stats(0.1);
    let (b5, se5, v5) = stats(0.5);
    let var_ok = v1 > v5;
    let bias_ok = b5.abs() >= b1.abs() - 2.0 * combined(se1, se5);
    outcome(
        var_ok && bias_ok,
        format!("var(0.1) {v1:.1} > var(0.5) {v5:.1}: {var_ok}; bias(0.1) {b1:+.2} (se {se1:.2}), bias(0.5) {b5:+.2} (se {se5:.2}): {bias_ok}"),
    )
}

fn c7_search_df() -> Outcome {
    let x = diabetes_like_design(442, 701).unwrap();
    let pilot = pilot_truth(&x, &diabetes_like_pilot(&x, 701).unwrap()).unwrap();
    let sigma = pilot.sigma2.sqrt();
    let lam = 0.15 * lambda_min(&x, sigma, 1000, 702).unwrap().value;
    let sel = Selector::Lasso { lambda: lam };
    let truth = mc_true_df(&x, &TruthSpec::new(pilot.mu.clone(), pilot.sigma2, 2000, 703).unwrap(), &sel).unwrap();
    let noise = known(pilot.sigma2);
    let reps = 200;
    let (mut df, mut naive) = (Vec::with_capacity(reps), Vec::with_capacity(reps));
    for r in 0..reps {
        let y = response(&pilot.mu, sigma, derive_path(704, &[r as u64]));
        let est = search_df(&x, &y, 0.25, &sel, &noise, 50, derive_path(705, &[r as u64])).unwrap();
        df.push(est.df);
        naive.push(est.naive_df() as f64);
    }
    let d = McEstimate::from_values(&df);
    let nv = McEstimate::from_values(&naive);
    let z_df = (d.mean - truth.mean) / combined(d.se, truth.se);
    let z_naive = (truth.mean - nv.mean) / combined(truth.se, nv.se);
    outcome(
        z_df.abs() < 3.0 && z_naive > 2.0,
        format!(
            "df-hat {:.2} (se {:.2}) vs true df {:.2} (se {:.2}), z {z_df:+.2}; naive {:.2}, true - naive z {z_naive:+.2}",
            d.mean, d.se, truth.mean, truth.se, nv.mean
        ),
    )
}

fn c8_out_of_sample() -> Outcome {
    let cfg = ExperimentConfig {
        n: 100,
        alpha: Some(0.25),
        n_draws: 50,
        replications: 500,
        truth_replications: 10_000,
        seed: 801,
        ..ExperimentConfig::default()
    };
    let setting = LassoSetting {
        id: "n100_p20".into(),
        design_key: 0,
        n: 100,
        p: 20,
        s: 10,
        snr: 7.0,
        rho: 0.3,
        sigma: 1.0,
        kappa: 1.1,
    };
    let fig = run_out_of_sample_with(&cfg, &[setting]).unwrap();
    let a = fig.table.summary("n100_p20", Method::Additive).unwrap();
    let z = (a.mean - a.truth) / combined(a.se, a.truth_se);
    outcome(
        z.abs() < 3.0,
        format!("Err_out-hat {:.3} (se {:.3}) vs truth {:.3} (se {:.3}), z {z:+.2}", a.mean, a.se, a.truth, a.truth_se),
    )
}

fn run_cli(args: &[&str], threads: usize, out: &Path) -> Vec<(String, Vec<u8>)> {
    let status = Command::new(env!("CARGO_BIN_EXE_randrisk"))
        .args(args)
        .arg("--threads")
        .arg(threads.to_string())
        .arg("--out")
        .arg(out)
        .output()
        .unwrap();
    assert!(status.status.success(), "{args:?}: {}", String::from_utf8_lossy(&status.stderr));
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn c9_reproducibility() -> Outcome {
    let x = fixture("tiny_x.csv");
    let y = fixture("tiny_y.csv");
    let beta = fixture("tiny_beta.csv");
    let (x, y, beta) = (x.to_str().unwrap(), y.to_str().unwrap(), beta.to_str().unwrap());
    let data = ["--x-csv", x, "--y-csv", y, "--seed", "9"];
    let small = [
        "--replications", "3", "--truth-replications", "20", "--n-draws", "4", "--bootstrap", "5",
        "--lambda-min-draws", "40", "--seed", "9",
    ];
    let runs: Vec<(&str, Vec<&str>)> = vec![
        ("estimate", [&["estimate", "--selector", "best-subset", "--k", "2"][..], &data].concat()),
        ("df", [&["df", "--kappa", "0.5", "--sigma2", "1"][..], &data].concat()),
        ("tune", [&["tune", "--kappa-grid", "0.3,0.6,1.2", "--sigma2", "1"][..], &data].concat()),
        (
            "oracle",
            vec![
                "oracle", "--x-csv", x, "--beta-csv", beta, "--sigma2", "1", "--selector", "stepwise", "--k", "2",
                "--replications", "500", "--seed", "9",
            ],
        ),
        ("simulate barplot", [&["simulate", "barplot", "--n", "40"][..], &small].concat()),
        ("simulate lambda", [&["simulate", "lambda", "--n", "40", "--kappa-grid", "0.5,1"][..], &small].concat()),
        ("simulate out", [&["simulate", "out", "--n", "60"][..], &small].concat()),
        ("simulate best-subset", [&["simulate", "best-subset", "--n", "40"][..], &small].concat()),
        ("simulate df", [&["simulate", "df", "--n", "40", "--synthetic-design", "--kappa-grid", "0.2"][..], &small].concat()),
    ];
    let root = std::env::temp_dir().join(format!("randrisk-accept-{}", std::process::id()));
    let mut failures = Vec::new();
    let mut files = 0;
    for (name, args) in &runs {
        let outs: Vec<_> = [(1, "a"), (1, "b"), (8, "c")]
            .iter()
            .map(|(t, tag)| run_cli(args, *t, &root.join(format!("{}-{tag}", name.replace(' ', "-")))))
            .collect();
        files += outs[0].len();
        if outs[0].is_empty() || outs[0] != outs[1] || outs[0] != outs[2] {
            failures.push(*name);
        }
    }
    let _ = std::fs::remove_dir_all(&root);
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} commands, {files} CSV files identical across reruns and 1 vs 8 threads", runs.len())
        } else {
            format!("differences in {failures:?}")
        },
    )
}

fn brute_force(x: &DMatrix<f64>, y: &DVector<f64>, k: usize) -> Vec<usize> {
    // Exhaustive search with an SVD-based least-squares fit.
    let p = x.ncols();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for mask in 0u32..(1 << p) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let cols: Vec<usize> = (0..p).filter(|j| mask >> j & 1 == 1).collect();
        let xm = x.select_columns(&cols);
        let coef = xm.clone().svd(true, true).solve(y, 1e-12).unwrap();
        let rss = (y - xm * coef).norm_squared();
        if best.as_ref().is_none_or(|(b, c)| rss < *b || (rss == *b && cols < *c)) {
            best = Some((rss, cols));
        }
    }
    best.unwrap().1
}

fn c10_solvers() -> Outcome {
    let mut worst_kkt: f64 = 0.0;
    let mut subset_mismatch = 0;
    let mut worst_proj: f64 = 0.0;
    for i in 0..100u64 {
        let mut g = stream(derive_path(1001, &[i]));
        let n = 20 + (i as usize % 5) * 10;
        let p = 10 + (i as usize % 7) * 15;
        let x = DesignMatrix::new(DMatrix::from_fn(n, p, |_, _| standard_normal_vector(&mut g, 1)[0])).unwrap();
        let y = x.matrix().column(0) * 2.0 + standard_normal_vector(&mut g, n);
        let lmax = x.tr_mul_vec(&y).amax();
        let lambda = lmax * (0.02 + 0.9 * (i as f64 / 100.0));
        let beta = lasso_fit(&x, &y, lambda).unwrap();
        worst_kkt = worst_kkt.max(kkt_residual(&x, &y, &beta, lambda));

        let (bn, bp) = (15 + i as usize % 10, 4 + i as usize % 9);
        let k = 1 + (i as usize % bp.min(5));
        let xb = DMatrix::from_fn(bn, bp, |_, _| standard_normal_vector(&mut g, 1)[0]);
        let yb = xb.column(1) * 1.5 + standard_normal_vector(&mut g, bn);
        let got = best_subset(&DesignMatrix::new(xb.clone()).unwrap(), &yb, k, 10_000).unwrap();
        if got.indices() != brute_force(&xb, &yb, k).as_slice() {
            subset_mismatch += 1;
        }

        let cols: Vec<usize> = (0..p.min(n - 1)).filter(|j| (j + i as usize).is_multiple_of(3)).collect();
        let h = Projection::new(&x, &Support::new(cols, p).unwrap()).unwrap().matrix();
        worst_proj = worst_proj.max((&h * &h - &h).amax()).max((&h - h.transpose()).amax());
    }
    outcome(
        worst_kkt < 1e-6 && subset_mismatch == 0 && worst_proj < 1e-8,
        format!("max KKT {worst_kkt:.2e}; best-subset mismatches {subset_mismatch}/100; max projection defect {worst_proj:.2e}"),
    )
}

fn main() {
    // Behave like a libtest target when only listing tests.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 10] = [
        ("1 randomized estimator unbiased for Err_alpha", c1_unbiasedness, Duration::from_secs(120)),
        ("2 best-subset figure: Cp low, additive on target", c2_best_subset_figure, Duration::from_secs(300)),
        ("3 fixed-H sanity", c3_fixed_h, Duration::from_secs(60)),
        ("4 Var ||AZ||^2 = 2 tr(A^4)", c4_quadratic_variance, Duration::MAX),
        ("5 Cp variance formula", c5_cp_variance, Duration::MAX),
        ("6 bias/variance trends in alpha", c6_bias_variance, Duration::MAX),
        ("7 search df direction", c7_search_df, Duration::MAX),
        ("8 out-of-sample estimator", c8_out_of_sample, Duration::MAX),
        ("9 deterministic CLI output", c9_reproducibility, Duration::MAX),
        ("10 solver correctness", c10_solvers, Duration::MAX),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = result.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "criterion {name}: {} [{:.1}s{}] {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over time budget" },
            result.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
