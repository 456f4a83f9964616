mod common;

use common::*;
use nalgebra::{DMatrix, DVector};
use randrisk::harness::io::{read_matrix_csv, read_vector_csv};
use randrisk::harness::{diabetes_like_design, diabetes_like_pilot, pilot_truth};
use randrisk::oracle::{
    cp_variance_analytic, mc_true_df, mc_true_err, mc_true_err_alpha, quadratic_variance_check, TruthSpec,
};
use randrisk::selection::{lambda_min, Selector, Support};
use randrisk::{DesignMatrix, Projection};

fn within(est: f64, se: f64, want: f64, k: f64) {
    assert!((est - want).abs() < k * se, "{est} (se {se}) vs {want}");
}

#[test]
fn constant_selector_truth_has_closed_form() {
    let (n, p) = (30, 5);
    let x = design(n, p, 1);
    let m = Support::new(vec![0, 3], p).unwrap();
    let sel = Selector::Fixed(m.clone());
    let s2 = 2.0;
    let zero = mc_true_err(&x, &TruthSpec::new(DVector::zeros(n), s2, 20_000, 2).unwrap(), &sel).unwrap();
    within(zero.mean, zero.se, (n + 2) as f64 * s2, 3.0);

    let mu = DVector::from_fn(n, |i, _| (i as f64 * 0.37).sin() * 3.0);
    let h = Projection::new(&x, &m).unwrap();
    let bias = (&mu - h.apply(&mu)).norm_squared();
    let general = mc_true_err(&x, &TruthSpec::new(mu.clone(), s2, 20_000, 3).unwrap(), &sel).unwrap();
    within(general.mean, general.se, bias + (n + 2) as f64 * s2, 3.0);

    // Selection never looks at the randomized response, so alpha is irrelevant.
    let spec = TruthSpec::new(mu, s2, 20_000, 3).unwrap();
    let randomized = mc_true_err_alpha(&x, &spec, &sel, 0.7).unwrap();
    assert_eq!(randomized, general);
}

fn tiny() -> (DesignMatrix, DVector<f64>) {
    let x = read_matrix_csv(&fixture("tiny_x.csv")).unwrap();
    let beta = read_vector_csv(&fixture("tiny_beta.csv")).unwrap();
    let mu = &x * beta;
    (DesignMatrix::new(x).unwrap(), mu)
}

#[test]
fn best_subset_truth_matches_pins() {
    let (x, mu) = tiny();
    let sel = Selector::BestSubset { k: 2, cap: 100 };
    let spec = TruthSpec::new(mu, 1.0, 10_000, 4).unwrap();
    for (name, est) in [
        ("best_subset_err.pin", mc_true_err(&x, &spec, &sel).unwrap()),
        ("best_subset_err-alpha.pin", mc_true_err_alpha(&x, &spec, &sel, 0.3).unwrap()),
    ] {
        let (pin, pin_se) = read_pin(name);
        within(est.mean, (est.se.powi(2) + pin_se.powi(2)).sqrt(), pin, 3.0);
    }
}

#[test]
fn vanishing_randomization_approaches_plain_truth() {
    let (x, mu) = tiny();
    let sel = Selector::BestSubset { k: 2, cap: 100 };
    let plain = mc_true_err(&x, &TruthSpec::new(mu.clone(), 1.0, 10_000, 5).unwrap(), &sel).unwrap();
    let tiny_alpha = mc_true_err_alpha(&x, &TruthSpec::new(mu, 1.0, 10_000, 6).unwrap(), &sel, 1e-4).unwrap();
    within(tiny_alpha.mean, (plain.se.powi(2) + tiny_alpha.se.powi(2)).sqrt(), plain.mean, 3.0);
}

#[test]
fn true_df_of_fixed_and_null_rules() {
    let (n, p) = (25, 6);
    let x = design(n, p, 7);
    let mu = DVector::from_fn(n, |i, _| i as f64 / 5.0);
    let fixed = Selector::Fixed(Support::new(vec![1, 2, 4], p).unwrap());
    let df = mc_true_df(&x, &TruthSpec::new(mu.clone(), 1.0, 20_000, 8).unwrap(), &fixed).unwrap();
    within(df.mean, df.se, 3.0, 3.0);
    let null = Selector::Fixed(Support::empty());
    let df0 = mc_true_df(&x, &TruthSpec::new(mu, 1.0, 20_000, 9).unwrap(), &null).unwrap();
    within(df0.mean, df0.se, 0.0, 3.0);
}

#[test]
fn relaxed_lasso_true_df_exceeds_model_size() {
    let x = diabetes_like_design(442, 10).unwrap();
    let pilot = pilot_truth(&x, &diabetes_like_pilot(&x, 10).unwrap()).unwrap();
    let sigma = pilot.sigma2.sqrt();
    let lam = 0.15 * lambda_min(&x, sigma, 300, 11).unwrap().value;
    let sel = Selector::Lasso { lambda: lam };
    let spec = TruthSpec::new(pilot.mu.clone(), pilot.sigma2, 300, 12).unwrap();
    let df = mc_true_df(&x, &spec, &sel).unwrap();
    let sizes: Vec<f64> = (0..300)
        .map(|r| sel.select(&x, &spec.response(r)).unwrap().len() as f64)
        .collect();
    let (size, size_se) = mean_se(&sizes);
    assert!(df.mean - size > 2.0 * (df.se.powi(2) + size_se.powi(2)).sqrt(), "df {df:?} vs |M| {size}");
}

#[test]
fn quadratic_form_variance_identity() {
    let (emp, analytic) = quadratic_variance_check(&DMatrix::identity(5, 5), 100_000, 1).unwrap();
    assert_eq!(analytic, 10.0);
    assert!((emp / analytic - 1.0).abs() < 0.05);
    let a = DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 1.0, 2.0]));
    let (emp, analytic) = quadratic_variance_check(&a, 200_000, 2).unwrap();
    assert!((analytic - 2.0 * (0.0625 + 1.0 + 16.0)).abs() < 1e-12);
    assert!((emp / analytic - 1.0).abs() < 0.05);
}

#[test]
fn cp_variance_formula_matches_simulation_for_an_empty_model() {
    // H = 0: Cp = ||y||^2, whose variance is 2 n s^4 + 4 ||mu||^2 s^2.
    let n = 10;
    let mu = DVector::from_fn(n, |i, _| i as f64 * 0.2);
    let analytic = cp_variance_analytic(&DMatrix::zeros(n, n), &mu, 1.0).unwrap();
    assert!((analytic - (20.0 + 4.0 * mu.norm_squared())).abs() < 1e-12);
}
