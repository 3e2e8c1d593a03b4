//! Parallel tempering (replica exchange Monte Carlo).

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::anneal::{sweep_tracked, LocalState};
use super::{random_spins, Outcome, RunLimits, SolverError, StepUnit, Tracker};
use crate::ising::IsingModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemperingConfig {
    pub num_replicas: usize,
    pub t_hi: f64,
    pub t_lo: f64,
    pub sweeps_between_swaps: u64,
}

impl TemperingConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.num_replicas < 2 {
            return Err(SolverError::InvalidConfig(
                "parallel tempering needs at least 2 replicas".into(),
            ));
        }
        if !(self.t_lo > 0.0 && self.t_hi > self.t_lo) {
            return Err(SolverError::InvalidConfig(
                "tempering requires t_hi > t_lo > 0".into(),
            ));
        }
        if self.sweeps_between_swaps == 0 {
            return Err(SolverError::InvalidConfig(
                "sweeps_between_swaps must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Geometric ladder from `t_lo` (index 0) up to `t_hi`.
pub fn temperature_ladder(t_lo: f64, t_hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![t_lo],
        _ => (0..count)
            .map(|r| t_lo * (t_hi / t_lo).powf(r as f64 / (count - 1) as f64))
            .collect(),
    }
}

/// Exchange acceptance `min(1, exp((β_a − β_b)(E_a − E_b)))`.
pub fn replica_exchange(beta_a: f64, energy_a: f64, beta_b: f64, energy_b: f64, rng: &mut impl Rng) -> bool {
    let log_ratio = (beta_a - beta_b) * (energy_a - energy_b);
    log_ratio >= 0.0 || rng.random::<f64>() < log_ratio.exp()
}

/// Run replicas at fixed `temperatures`. Each replica draws its initial
/// spins from `rng` in ladder order.
pub(crate) fn temper(
    model: &IsingModel,
    temperatures: &[f64],
    sweeps_between_swaps: u64,
    limits: RunLimits,
    rng: &mut impl Rng,
    tracker: &mut Tracker,
) -> u64 {
    let mut replicas: Vec<LocalState> = temperatures
        .iter()
        .map(|_| LocalState::new(model, random_spins(model.n(), rng)))
        .collect();
    let first = replicas
        .iter()
        .min_by(|a, b| a.energy.total_cmp(&b.energy))
        .expect("at least one replica");
    tracker.start(first.energy, &first.spins);

    let betas: Vec<f64> = temperatures.iter().map(|t| 1.0 / t).collect();
    let mut steps = 0;
    let mut odd_round = false;
    while steps < limits.max_steps {
        steps += 1;
        for (replica, &t) in replicas.iter_mut().zip(temperatures) {
            if sweep_tracked(model, replica, t, rng, tracker, steps) {
                return steps;
            }
        }
        debug_assert!(steps % 1000 != 0 || replicas.iter().all(|r| r.consistent(model)));
        if steps % sweeps_between_swaps == 0 && replicas.len() > 1 {
            let start = usize::from(odd_round);
            for a in (start..replicas.len() - 1).step_by(2) {
                if replica_exchange(betas[a], replicas[a].energy, betas[a + 1], replicas[a + 1].energy, rng) {
                    replicas.swap(a, a + 1);
                }
            }
            odd_round = !odd_round;
        }
    }
    steps
}

pub fn parallel_tempering(
    model: &IsingModel,
    config: &TemperingConfig,
    seed: u64,
    limits: RunLimits,
    rng: &mut impl Rng,
) -> Outcome {
    let started = Instant::now();
    let mut tracker = Tracker::new(&limits, model.n());
    let temps = temperature_ladder(config.t_lo, config.t_hi, config.num_replicas);
    let steps = temper(model, &temps, config.sweeps_between_swaps, limits, rng, &mut tracker);
    tracker.finish(model, "pt", seed, steps, StepUnit::PtSweep, started)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::xorsat_to_ising;
    use crate::rng::stream;
    use crate::solvers::anneal::anneal_with;
    use crate::xorsat::generate_3r3x;

    #[test]
    fn ladder_is_geometric() {
        let t = temperature_ladder(0.5, 2.0, 3);
        assert!((t[0] - 0.5).abs() < 1e-15 && (t[1] - 1.0).abs() < 1e-15 && (t[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn equal_energy_swap_always_accepted() {
        let mut rng = stream(1);
        for _ in 0..1000 {
            assert!(replica_exchange(2.0, -3.0, 0.5, -3.0, &mut rng));
        }
    }

    #[test]
    fn single_replica_matches_fixed_temperature_annealing() {
        let (model, _) = xorsat_to_ising(&generate_3r3x(48, 2).unwrap());
        let limits = RunLimits::new(300, 0.0);
        let t = 0.6;

        let mut rng_pt = stream(21);
        let mut tr_pt = Tracker::new(&limits, model.n());
        let steps_pt = temper(&model, &[t], 3, limits, &mut rng_pt, &mut tr_pt);

        let mut rng_sa = stream(21);
        let mut tr_sa = Tracker::new(&limits, model.n());
        let initial = random_spins(model.n(), &mut rng_sa);
        let (steps_sa, _) = anneal_with(&model, initial, |_| t, limits, &mut rng_sa, &mut tr_sa);

        assert_eq!(steps_pt, steps_sa);
        assert_eq!(tr_pt.best(), tr_sa.best());
        assert_eq!(tr_pt.checkpoints, tr_sa.checkpoints);
        assert_eq!(rng_pt.random::<u64>(), rng_sa.random::<u64>());
    }
}
