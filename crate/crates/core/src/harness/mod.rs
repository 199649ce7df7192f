//! Scenario configuration, closed-loop simulation, metrics and file output.

mod config;
mod metrics;
mod output;
mod sim;

pub use config::{euler_312, parse_number, quaternion_lambda, Chart, ControllerId, ScenarioConfig, SCENARIO_ANGLES};
pub use metrics::{
    compare_report, convergence_time, descent_delay, final_energy, peak_torque, sign_changes, CompareReport,
    RunSummary, REPORT_THRESHOLDS,
};
pub use output::{csv_bytes, emit_csv, emit_plot_script, read_csv, write_csv, WriteError, CSV_HEADER};
pub use sim::{
    run_from_error, run_scenario, simulate, step_count, Abort, Snapshot, Trajectory, TrajectorySample, SAMPLE_EVERY,
};
