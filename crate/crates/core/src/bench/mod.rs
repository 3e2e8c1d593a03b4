//! Experiment orchestration and time-to-solution statistics.
//!
//! A plan lists sizes, solvers, noise levels and restart counts. Running it
//! appends one JSON line per trajectory to a results file and writes a
//! per-(solver, size, noise) summary CSV with the optimal TTS.

mod calibrate;
mod experiment;
mod plan;
mod tts;

use thiserror::Error;

pub use calibrate::{calibrate_coupling, Calibration, CalibrationOptions, CalibrationPoint};
pub use experiment::{
    instance_seed, read_results, read_summary_csv, run_experiment, run_seed, summarize, write_summary_csv,
    write_summary_rows, ExperimentReport, GridSpec, RunOptions, Summary, SummaryRow, TrialKey, TrialRecord,
};
pub use plan::{ExperimentPlan, SolverSpec};
pub use tts::{estimate_success, geometric_grid, optimal_tts, tts_single, TtsCurve, TARGET_CONFIDENCE};

use crate::solvers::SolverError;
use crate::xorsat::XorSatError;

/// Checked-in plan reproducing the published protocol.
pub const FULL_PROTOCOL_PLAN: &str = include_str!("../../plans/full_protocol.toml");
/// Small plan touching every solver; runs in seconds.
pub const SMOKE_PLAN: &str = include_str!("../../plans/smoke.toml");
/// Baseline solvers on 32 to 256 spins with a bounded step cap.
pub const BASELINE_DESK_PLAN: &str = include_str!("../../plans/baseline_desk.toml");

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cutoff grid is empty")]
    EmptyGrid,
    #[error("no records")]
    NoRecords,
    #[error("invalid plan: {0}")]
    PlanInvalid(String),
    #[error("results file line {line}: {message}")]
    Results { line: usize, message: String },
    #[error("csv: {0}")]
    Csv(String),
    #[error("results writer stopped")]
    WriterStopped,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Instance(#[from] XorSatError),
}
