//! Configuration, synthetic data, figure runners and their file outputs.

pub mod config;
pub mod design;
pub mod experiments;
pub mod io;
pub mod plot;
pub mod table;

pub use config::{ExperimentConfig, SelectorKind, Sigma2Source};
pub use design::{
    diabetes_like_design, diabetes_like_pilot, gen_design, gen_response, iid_gaussian_design, pilot_truth,
    PilotTruth, SyntheticResponse,
};
pub use experiments::{
    run_fig_barplot, run_fig_best_subset, run_fig_df, run_fig_lambda_sweep, run_fig_out_of_sample, FigureOutput,
    LassoSetting, MethodSet, FIGURE_ALPHA,
};
pub use table::{Method, MethodSummary, ResultRow, ResultTable};
