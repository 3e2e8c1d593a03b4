//! Time-to-solution statistics.

use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::solvers::RunRecord;

/// Confidence the TTS targets.
pub const TARGET_CONFIDENCE: f64 = 0.99;

/// Expected time to reach the target once with 99% confidence given runs of
/// length `t_f` that succeed with probability `p`. Infinite when `p == 0`;
/// clamped to `t_f` when a single run already reaches the target confidence.
pub fn tts_single(t_f: f64, p: f64) -> Result<f64, BenchError> {
    if !(t_f > 0.0) || t_f.is_infinite() {
        return Err(BenchError::Domain(format!("cutoff must be positive and finite, got {t_f}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(BenchError::Domain(format!("probability must lie in [0, 1], got {p}")));
    }
    Ok(if p == 0.0 {
        f64::INFINITY
    } else if p >= TARGET_CONFIDENCE {
        t_f
    } else {
        t_f * (1.0 - TARGET_CONFIDENCE).ln() / (1.0 - p).ln()
    })
}

/// Fraction of runs that reached the target within `t_f` steps. Runs that
/// hit their step cap count as failures at every cutoff.
pub fn estimate_success(records: &[RunRecord], t_f: f64) -> Result<f64, BenchError> {
    if records.is_empty() {
        return Err(BenchError::NoRecords);
    }
    let solved = records
        .iter()
        .filter(|r| r.success && r.step_of_solution.is_some_and(|s| s as f64 <= t_f))
        .count();
    Ok(solved as f64 / records.len() as f64)
}

/// Geometric cutoff grid with `per_decade` points per decade from 1 up to
/// `max_steps`; the last point is `max_steps` itself.
pub fn geometric_grid(max_steps: u64, per_decade: u32) -> Vec<f64> {
    let top = max_steps.max(1) as f64;
    let mut grid: Vec<f64> = (0..)
        .map(|k| 10f64.powf(k as f64 / per_decade.max(1) as f64))
        .take_while(|&t| t < top * (1.0 - 1e-12))
        .collect();
    grid.push(top);
    grid
}

/// TTS over a cutoff grid for a group of instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TtsCurve {
    pub grid: Vec<f64>,
    /// `success[g][i]`: success probability of instance `i` at `grid[g]`.
    pub success: Vec<Vec<f64>>,
    /// `per_instance[g][i]`: TTS of instance `i` at `grid[g]`.
    pub per_instance: Vec<Vec<f64>>,
    /// Mean over instances at each grid point.
    pub aggregate: Vec<f64>,
    /// Index into the grid of the optimum; `None` when every aggregate is
    /// infinite.
    pub optimal_index: Option<usize>,
    pub optimal_tts: f64,
}

impl TtsCurve {
    pub fn tf_star(&self) -> Option<f64> {
        self.optimal_index.map(|g| self.grid[g])
    }

    /// Mean success probability at the optimum, or at the largest cutoff
    /// when nothing was solved.
    pub fn mean_success(&self) -> f64 {
        let g = self.optimal_index.unwrap_or(self.grid.len() - 1);
        let row = &self.success[g];
        row.iter().sum::<f64>() / row.len() as f64
    }

    /// Per-instance TTS at the optimum.
    pub fn instance_tts_at_optimum(&self) -> Option<&[f64]> {
        self.optimal_index.map(|g| self.per_instance[g].as_slice())
    }
}

/// Optimal TTS: the minimum over the grid of the mean per-instance TTS.
/// `instances` holds the restarts of each instance.
pub fn optimal_tts<R: AsRef<[RunRecord]>>(instances: &[R], grid: &[f64]) -> Result<TtsCurve, BenchError> {
    if grid.is_empty() {
        return Err(BenchError::EmptyGrid);
    }
    if instances.is_empty() || instances.iter().any(|r| r.as_ref().is_empty()) {
        return Err(BenchError::NoRecords);
    }
    let mut success = Vec::with_capacity(grid.len());
    let mut per_instance = Vec::with_capacity(grid.len());
    let mut aggregate = Vec::with_capacity(grid.len());
    for &t_f in grid {
        let p: Vec<f64> = instances
            .iter()
            .map(|r| estimate_success(r.as_ref(), t_f))
            .collect::<Result<_, _>>()?;
        let tts: Vec<f64> = p.iter().map(|&p| tts_single(t_f, p)).collect::<Result<_, _>>()?;
        aggregate.push(tts.iter().sum::<f64>() / tts.len() as f64);
        success.push(p);
        per_instance.push(tts);
    }
    let optimal_index = aggregate
        .iter()
        .enumerate()
        .filter(|(_, a)| a.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(g, _)| g);
    let optimal_tts = optimal_index.map_or(f64::INFINITY, |g| aggregate[g]);
    Ok(TtsCurve {
        grid: grid.to_vec(),
        success,
        per_instance,
        aggregate,
        optimal_index,
        optimal_tts,
    })
}
