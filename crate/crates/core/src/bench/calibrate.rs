//! Per-size calibration of the laser coupling strength.
//!
//! The coupling is scored on a fixed set of (instance, seed) pairs by success
//! rate, then mean best energy, then smaller coupling. A geometric grid finds
//! the best bracket, which is then narrowed by evaluating the geometric
//! midpoints on either side of the current best.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::experiment::{instance_seed, run_seed};
use super::BenchError;
use crate::ising::{xorsat_to_ising, IsingModel};
use crate::solvers::{solve, LaserConfig, RunLimits, SolverConfig};
use crate::xorsat::generate_3r3x;

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationOptions {
    /// Spin count.
    pub n: usize,
    pub instances: usize,
    pub seeds_per_instance: usize,
    pub max_steps: u64,
    pub master_seed: u64,
    /// Initial couplings, strictly increasing.
    pub grid: Vec<f64>,
    pub refine_rounds: u32,
    /// Every other laser parameter.
    pub base: LaserConfig,
}

impl CalibrationOptions {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            instances: 10,
            seeds_per_instance: 4,
            max_steps: 100_000,
            master_seed: 0xCA1B,
            grid: (0..8).map(|k| 0.01 * 2f64.powi(k)).collect(),
            refine_rounds: 2,
            base: LaserConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPoint {
    pub coupling: f64,
    pub success_rate: f64,
    pub mean_best_energy: f64,
    pub median_step: Option<u64>,
}

impl CalibrationPoint {
    /// Whether `self` scores strictly better than `other`.
    fn beats(&self, other: &CalibrationPoint) -> bool {
        self.success_rate
            .total_cmp(&other.success_rate)
            .then(other.mean_best_energy.total_cmp(&self.mean_best_energy))
            .then(other.coupling.total_cmp(&self.coupling))
            .is_gt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub n: usize,
    pub best: CalibrationPoint,
    /// Every evaluated coupling, sorted by coupling.
    pub evaluated: Vec<CalibrationPoint>,
}

pub fn calibrate_coupling(options: &CalibrationOptions) -> Result<Calibration, BenchError> {
    if options.grid.is_empty() || options.grid.windows(2).any(|w| !(w[0] < w[1])) || !(options.grid[0] > 0.0) {
        return Err(BenchError::Domain("calibration grid must be positive and strictly increasing".into()));
    }
    if options.instances == 0 || options.seeds_per_instance == 0 {
        return Err(BenchError::Domain("calibration needs at least one instance and seed".into()));
    }
    let models: Vec<IsingModel> = (0..options.instances)
        .into_par_iter()
        .map(|i| Ok(xorsat_to_ising(&generate_3r3x(options.n, instance_seed(options.master_seed, options.n, i))?).0))
        .collect::<Result<_, BenchError>>()?;

    let mut evaluated: Vec<CalibrationPoint> = options
        .grid
        .iter()
        .map(|&k| evaluate(&models, options, k))
        .collect::<Result<_, _>>()?;

    for _ in 0..options.refine_rounds {
        evaluated.sort_by(|a, b| a.coupling.total_cmp(&b.coupling));
        let b = best_index(&evaluated);
        let k = evaluated[b].coupling;
        let lo = if b > 0 { evaluated[b - 1].coupling } else { k / 2.0 };
        let hi = evaluated.get(b + 1).map_or(k * 2.0, |p| p.coupling);
        for probe in [(lo * k).sqrt(), (k * hi).sqrt()] {
            evaluated.push(evaluate(&models, options, probe)?);
        }
    }
    evaluated.sort_by(|a, b| a.coupling.total_cmp(&b.coupling));
    let best = evaluated[best_index(&evaluated)].clone();
    Ok(Calibration {
        n: options.n,
        best,
        evaluated,
    })
}

fn best_index(points: &[CalibrationPoint]) -> usize {
    (1..points.len()).fold(0, |b, i| if points[i].beats(&points[b]) { i } else { b })
}

fn evaluate(models: &[IsingModel], options: &CalibrationOptions, coupling: f64) -> Result<CalibrationPoint, BenchError> {
    let config = SolverConfig::Laser(LaserConfig { coupling, noise: 0.0, ..options.base });
    let limits = RunLimits::new(options.max_steps, 0.0);
    let pairs: Vec<(usize, usize)> = (0..models.len())
        .flat_map(|i| (0..options.seeds_per_instance).map(move |s| (i, s)))
        .collect();
    let records = pairs
        .par_iter()
        .map(|&(i, s)| solve(&models[i], &config, run_seed(options.master_seed, options.n, i, s), limits))
        .collect::<Result<Vec<_>, _>>()?;
    let total = records.len() as f64;
    let mut steps: Vec<u64> = records.iter().filter_map(|r| r.step_of_solution).collect();
    steps.sort_unstable();
    Ok(CalibrationPoint {
        coupling,
        success_rate: steps.len() as f64 / total,
        mean_best_energy: records.iter().map(|r| r.best_energy).sum::<f64>() / total,
        median_step: steps.get(steps.len() / 2).copied(),
    })
}
