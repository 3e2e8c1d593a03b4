//! Solver portfolio behind a single [`solve`] entry point.
//!
//! Every solver evolves exactly one trajectory from one random initial state
//! and stops at the target energy or after `max_steps` steps. What a step
//! means depends on the solver (see [`StepUnit`]).

mod anneal;
mod config;
pub mod laser;
mod tabu;
mod tempering;

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use anneal::{geometric_temperature, metropolis_sweep, simulated_annealing, AnnealConfig};
pub use config::{SolverConfig, SolverDefaults, DEFAULTS_TOML};
pub use laser::{laser_step, readout, LaserConfig, LaserField};
pub use tabu::{tabu_search, TabuConfig};
pub use tempering::{parallel_tempering, replica_exchange, temperature_ladder, TemperingConfig};

use crate::ising::{IsingModel, SpinState};
use crate::rng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("laser field became non-finite at round trip {step}; gain or coupling is mis-tuned")]
    NonFiniteField { step: u64 },
    #[error("field has length {got}, model has {expected} spins")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unknown solver `{0}`; valid names are laser, sa, tabu, pt")]
    UnknownSolver(String),
    #[error("config file: {0}")]
    ConfigFile(String),
}

/// What one step counts for a given solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepUnit {
    RoundTrip,
    SaSweep,
    TabuMove,
    PtSweep,
}

/// Termination criteria shared by all solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunLimits {
    pub max_steps: u64,
    pub target_energy: f64,
}

impl RunLimits {
    pub fn new(max_steps: u64, target_energy: f64) -> Self {
        Self {
            max_steps,
            target_energy,
        }
    }
}

/// Summary of one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance_label: String,
    pub solver_id: String,
    pub seed: u64,
    pub steps_executed: u64,
    pub success: bool,
    pub best_energy: f64,
    pub step_of_solution: Option<u64>,
    /// Seconds.
    pub wall_time: f64,
    pub step_unit: StepUnit,
}

impl RunRecord {
    /// Equality ignoring wall time.
    pub fn same_outcome(&self, other: &RunRecord) -> bool {
        RunRecord {
            wall_time: 0.0,
            ..self.clone()
        } == RunRecord {
            wall_time: 0.0,
            ..other.clone()
        }
    }
}

/// A record together with the lowest-energy state visited and the
/// best-energy checkpoints.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub record: RunRecord,
    pub best_state: SpinState,
    /// `(step, best energy so far)` whenever the best energy improved.
    pub checkpoints: Vec<(u64, f64)>,
}

/// Best-energy bookkeeping shared by the solvers.
pub(crate) struct Tracker {
    target: f64,
    best: f64,
    best_state: Vec<i8>,
    solved_at: Option<u64>,
    checkpoints: Vec<(u64, f64)>,
}

impl Tracker {
    pub(crate) fn new(limits: &RunLimits, n: usize) -> Self {
        Self {
            target: limits.target_energy,
            best: f64::INFINITY,
            best_state: vec![1; n],
            solved_at: None,
            checkpoints: Vec::new(),
        }
    }

    /// Seed the best energy with the initial state; success is only
    /// declared after at least one step.
    pub(crate) fn start(&mut self, energy: f64, spins: &[i8]) {
        self.best = energy;
        self.best_state.copy_from_slice(spins);
        self.checkpoints.push((0, energy));
    }

    pub(crate) fn best(&self) -> f64 {
        self.best
    }

    pub(crate) fn target(&self) -> f64 {
        self.target
    }

    /// Record the energy reached after `step` steps; returns true once the
    /// target is hit.
    pub(crate) fn observe(&mut self, step: u64, energy: f64, spins: &[i8]) -> bool {
        if energy < self.best {
            self.best = energy;
            self.best_state.copy_from_slice(spins);
            self.checkpoints.push((step, energy));
        }
        if self.solved_at.is_none() && energy <= self.target {
            self.solved_at = Some(step);
        }
        self.solved_at.is_some()
    }

    pub(crate) fn finish(
        self,
        model: &IsingModel,
        solver_id: &str,
        seed: u64,
        steps_executed: u64,
        step_unit: StepUnit,
        started: Instant,
    ) -> Outcome {
        let record = RunRecord {
            instance_label: model.label().to_string(),
            solver_id: solver_id.to_string(),
            seed,
            steps_executed,
            success: self.solved_at.is_some(),
            best_energy: self.best,
            step_of_solution: self.solved_at,
            wall_time: started.elapsed().as_secs_f64(),
            step_unit,
        };
        Outcome {
            record,
            best_state: SpinState::new(self.best_state).expect("tracked spins are ±1"),
            checkpoints: self.checkpoints,
        }
    }
}

/// Uniformly random ±1 spins.
pub(crate) fn random_spins(n: usize, rng: &mut impl rand::Rng) -> Vec<i8> {
    (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect()
}

/// Run one trajectory and return its record.
pub fn solve(
    model: &IsingModel,
    config: &SolverConfig,
    seed: u64,
    limits: RunLimits,
) -> Result<RunRecord, SolverError> {
    solve_detailed(model, config, seed, limits).map(|o| o.record)
}

/// Run one trajectory and keep the best state and checkpoints.
pub fn solve_detailed(
    model: &IsingModel,
    config: &SolverConfig,
    seed: u64,
    limits: RunLimits,
) -> Result<Outcome, SolverError> {
    config.validate()?;
    let mut rng = rng::stream(seed);
    match config {
        SolverConfig::Laser(c) => run_laser(model, c, seed, limits, &mut rng),
        SolverConfig::SimAnneal(c) => Ok(simulated_annealing(model, c, seed, limits, &mut rng)),
        SolverConfig::Tabu(c) => Ok(tabu_search(model, c, seed, limits, &mut rng)),
        SolverConfig::ParTemp(c) => Ok(parallel_tempering(model, c, seed, limits, &mut rng)),
    }
}

/// Laser trajectory: one round trip per step, readout energy checked after
/// every round trip.
pub fn run_laser(
    model: &IsingModel,
    config: &LaserConfig,
    seed: u64,
    limits: RunLimits,
    rng: &mut rng::StreamRng,
) -> Result<Outcome, SolverError> {
    config.validate()?;
    let started = Instant::now();
    let n = model.n();
    let mut tracker = Tracker::new(&limits, n);
    let mut state = LaserField::random(n, *config, rng);
    let mut trip = laser::RoundTrip::new(n, config);
    let mut spins: Vec<i8> = readout(&state).spins().to_vec();
    tracker.start(model.energy_of(&spins), &spins);

    let mut steps = 0;
    while steps < limits.max_steps {
        trip.apply(&mut state, model, rng)?;
        steps += 1;
        for (s, e) in spins.iter_mut().zip(&state.field) {
            *s = laser::sign_of(*e);
        }
        if tracker.observe(steps, model.energy_of(&spins), &spins) {
            break;
        }
    }
    Ok(tracker.finish(model, "laser", seed, steps, StepUnit::RoundTrip, started))
}
