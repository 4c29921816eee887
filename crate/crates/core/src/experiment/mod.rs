//! Budget sweeps over the solvers and their CSV, plot-data and summary
//! outputs.

mod config;
mod output;
mod runner;

pub use config::{Application, ExperimentConfig};
pub use output::{
    emit_outputs, laa_query_bound, means, read_results_csv, rla_extra_query_bound,
    write_results_csv, METRICS, RESULTS_FILE, SUMMARY_FILE,
};
pub use runner::{load_instances, run_bundles, run_experiment, solve, ResultRow, ResultTable};
