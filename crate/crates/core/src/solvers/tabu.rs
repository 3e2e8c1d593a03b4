//! Single-flip tabu search with aspiration.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::anneal::LocalState;
use super::{random_spins, Outcome, RunLimits, SolverError, StepUnit, Tracker};
use crate::ising::IsingModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabuConfig {
    pub tenure: u64,
    pub aspiration: bool,
}

impl TabuConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if self.tenure == 0 {
            return Err(SolverError::InvalidConfig("tabu tenure must be at least 1".into()));
        }
        Ok(())
    }
}

/// Spin to flip at `step`: the lowest-ΔE admissible spin (ties to the lowest
/// index). A tabu spin is admissible under aspiration when the move would
/// beat the best energy so far. When nothing is admissible the spin whose
/// tabu status started earliest is released.
fn choose_move(
    state: &LocalState,
    tabu_until: &[u64],
    step: u64,
    aspiration: bool,
    best: f64,
) -> usize {
    let mut choice: Option<(usize, f64)> = None;
    for k in 0..state.spins.len() {
        let delta = state.delta(k);
        let is_tabu = tabu_until[k] > step;
        if is_tabu && !(aspiration && state.energy + delta < best) {
            continue;
        }
        if choice.is_none_or(|(_, d)| delta < d) {
            choice = Some((k, delta));
        }
    }
    choice.map(|(k, _)| k).unwrap_or_else(|| {
        // stall guard
        (0..tabu_until.len())
            .min_by_key(|&k| tabu_until[k])
            .expect("model has spins")
    })
}

pub(crate) fn tabu_from(
    model: &IsingModel,
    config: &TabuConfig,
    initial: Vec<i8>,
    limits: RunLimits,
    tracker: &mut Tracker,
) -> u64 {
    let mut state = LocalState::new(model, initial);
    tracker.start(state.energy, &state.spins);
    let mut tabu_until = vec![0u64; model.n()];
    let mut steps = 0;
    while steps < limits.max_steps && model.n() > 0 {
        let k = choose_move(&state, &tabu_until, steps, config.aspiration, tracker.best());
        state.flip(model, k);
        tabu_until[k] = steps + 1 + config.tenure;
        steps += 1;
        debug_assert!(steps % 1000 != 0 || state.consistent(model));
        if tracker.observe(steps, state.energy, &state.spins) {
            break;
        }
    }
    steps
}

pub fn tabu_search(
    model: &IsingModel,
    config: &TabuConfig,
    seed: u64,
    limits: RunLimits,
    rng: &mut impl Rng,
) -> Outcome {
    let started = Instant::now();
    let mut tracker = Tracker::new(&limits, model.n());
    let initial = random_spins(model.n(), rng);
    let steps = tabu_from(model, config, initial, limits, &mut tracker);
    tracker.finish(model, "tabu", seed, steps, StepUnit::TabuMove, started)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::Coupling;

    #[test]
    fn single_spin_first_move() {
        let model = IsingModel::new(vec![1.0], vec![], 0.0).unwrap();
        let limits = RunLimits::new(1, -1.0);
        let mut tracker = Tracker::new(&limits, 1);
        let steps = tabu_from(
            &model,
            &TabuConfig { tenure: 1, aspiration: true },
            vec![1],
            limits,
            &mut tracker,
        );
        assert_eq!(steps, 1);
        assert_eq!(tracker.best(), -1.0);
    }

    #[test]
    fn stall_guard_keeps_moving() {
        let model = IsingModel::new(
            vec![0.0, 0.0],
            vec![Coupling { i: 0, j: 1, value: 1.0 }],
            0.0,
        )
        .unwrap();
        let limits = RunLimits::new(50, -10.0);
        let mut tracker = Tracker::new(&limits, 2);
        let config = TabuConfig { tenure: 5, aspiration: false };
        let steps = tabu_from(&model, &config, vec![1, 1], limits, &mut tracker);
        assert_eq!(steps, 50);
        assert_eq!(tracker.best(), -1.0);
    }

    #[test]
    fn release_picks_oldest() {
        let model = IsingModel::new(vec![0.0; 3], vec![], 0.0).unwrap();
        let state = LocalState::new(&model, vec![1, 1, 1]);
        let tabu = [9, 7, 8];
        assert_eq!(choose_move(&state, &tabu, 3, false, 0.0), 1);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let model = IsingModel::new(vec![1.0, 1.0, 1.0], vec![], 0.0).unwrap();
        let state = LocalState::new(&model, vec![1, 1, 1]);
        assert_eq!(choose_move(&state, &[0, 0, 0], 0, true, 3.0), 0);
        assert_eq!(choose_move(&state, &[5, 0, 0], 0, false, 3.0), 1);
        // aspiration lifts the tabu on spin 0 when it would set a new best
        assert_eq!(choose_move(&state, &[5, 0, 0], 0, true, 3.0), 0);
    }
}
