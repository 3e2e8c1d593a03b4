//! Metropolis single-spin-flip simulated annealing on a geometric ladder.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{random_spins, RunLimits, StepUnit, Outcome, SolverError, Tracker};
use crate::ising::IsingModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnealConfig {
    pub t_hi: f64,
    pub t_lo: f64,
    pub sweeps_per_temp: u64,
}

impl AnnealConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.t_lo > 0.0 && self.t_hi > self.t_lo) {
            return Err(SolverError::InvalidConfig(
                "annealing requires t_hi > t_lo > 0".into(),
            ));
        }
        if self.sweeps_per_temp == 0 {
            return Err(SolverError::InvalidConfig(
                "sweeps_per_temp must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Temperature of ladder level `level` out of `levels`, geometric from
/// `t_hi` (level 0) to `t_lo` (last level).
pub fn geometric_temperature(t_hi: f64, t_lo: f64, level: u64, levels: u64) -> f64 {
    if levels <= 1 {
        return t_lo;
    }
    let frac = level.min(levels - 1) as f64 / (levels - 1) as f64;
    t_hi * (t_lo / t_hi).powf(frac)
}

/// Spins with cached local fields and energy.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LocalState {
    pub spins: Vec<i8>,
    pub fields: Vec<f64>,
    pub energy: f64,
}

impl LocalState {
    pub fn new(model: &IsingModel, spins: Vec<i8>) -> Self {
        let fields = (0..model.n()).map(|k| model.local_field(&spins, k)).collect();
        let energy = model.energy_of(&spins);
        Self {
            spins,
            fields,
            energy,
        }
    }

    #[inline]
    pub fn delta(&self, k: usize) -> f64 {
        -2.0 * f64::from(self.spins[k]) * self.fields[k]
    }

    #[inline]
    pub fn flip(&mut self, model: &IsingModel, k: usize) {
        self.energy += self.delta(k);
        self.spins[k] = -self.spins[k];
        let twice = 2.0 * f64::from(self.spins[k]);
        for &(j, v) in model.neighbors(k) {
            self.fields[j] += twice * v;
        }
    }

    /// Whether the cached energy matches a full recomputation.
    pub fn consistent(&self, model: &IsingModel) -> bool {
        let full = model.energy_of(&self.spins);
        (full - self.energy).abs() <= 1e-9 * full.abs().max(1.0)
    }
}

/// Metropolis acceptance: always for `delta <= 0`, else with probability
/// `exp(-delta / temperature)`. A random number is drawn only when needed.
#[inline]
pub fn metropolis_accept(delta: f64, temperature: f64, rng: &mut impl Rng) -> bool {
    delta <= 0.0 || (temperature > 0.0 && rng.random::<f64>() < (-delta / temperature).exp())
}

/// One sequential sweep over all spins at `temperature`. Reports every new
/// best energy to the tracker and returns true as soon as the target is hit.
pub(crate) fn sweep_tracked(
    model: &IsingModel,
    state: &mut LocalState,
    temperature: f64,
    rng: &mut impl Rng,
    tracker: &mut Tracker,
    step: u64,
) -> bool {
    for k in 0..model.n() {
        let delta = state.delta(k);
        if metropolis_accept(delta, temperature, rng) {
            state.flip(model, k);
            if (state.energy < tracker.best() || state.energy <= tracker.target())
                && tracker.observe(step, state.energy, &state.spins)
            {
                return true;
            }
        }
    }
    false
}

/// Untracked sweep; returns the number of accepted flips.
pub fn metropolis_sweep(
    model: &IsingModel,
    spins: &mut Vec<i8>,
    temperature: f64,
    rng: &mut impl Rng,
) -> usize {
    let mut state = LocalState::new(model, std::mem::take(spins));
    let mut accepted = 0;
    for k in 0..model.n() {
        if metropolis_accept(state.delta(k), temperature, rng) {
            state.flip(model, k);
            accepted += 1;
        }
    }
    *spins = state.spins;
    accepted
}

/// Anneal from `initial` with the temperature of each sweep given by
/// `schedule(sweep_index)`.
pub(crate) fn anneal_with(
    model: &IsingModel,
    initial: Vec<i8>,
    schedule: impl Fn(u64) -> f64,
    limits: RunLimits,
    rng: &mut impl Rng,
    tracker: &mut Tracker,
) -> (u64, LocalState) {
    let mut state = LocalState::new(model, initial);
    tracker.start(state.energy, &state.spins);
    let mut steps = 0;
    while steps < limits.max_steps {
        let t = schedule(steps);
        steps += 1;
        let done = sweep_tracked(model, &mut state, t, rng, tracker, steps);
        debug_assert!(steps % 1000 != 0 || state.consistent(model));
        if done {
            break;
        }
    }
    (steps, state)
}

pub fn simulated_annealing(
    model: &IsingModel,
    config: &AnnealConfig,
    seed: u64,
    limits: RunLimits,
    rng: &mut impl Rng,
) -> Outcome {
    let started = Instant::now();
    let mut tracker = Tracker::new(&limits, model.n());
    let initial = random_spins(model.n(), rng);
    let levels = limits.max_steps.div_ceil(config.sweeps_per_temp).max(1);
    let schedule = |sweep: u64| {
        geometric_temperature(config.t_hi, config.t_lo, sweep / config.sweeps_per_temp, levels)
    };
    let (steps, _) = anneal_with(model, initial, schedule, limits, rng, &mut tracker);
    tracker.finish(model, "sa", seed, steps, StepUnit::SaSweep, started)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::{xorsat_to_ising, Coupling};
    use crate::rng::stream;
    use crate::xorsat::generate_3r3x;

    #[test]
    fn ladder_endpoints() {
        assert_eq!(geometric_temperature(2.0, 0.1, 0, 10), 2.0);
        assert!((geometric_temperature(2.0, 0.1, 9, 10) - 0.1).abs() < 1e-15);
        assert!((geometric_temperature(4.0, 1.0, 1, 3) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_temperature_never_climbs() {
        let (model, _) = xorsat_to_ising(&generate_3r3x(32, 1).unwrap());
        let mut rng = stream(3);
        let mut state = LocalState::new(&model, super::super::random_spins(32, &mut rng));
        for _ in 0..50 {
            for k in 0..model.n() {
                let before = state.energy;
                let delta = state.delta(k);
                if metropolis_accept(delta, 0.0, &mut rng) {
                    assert!(delta <= 0.0);
                    state.flip(&model, k);
                    assert!(state.energy <= before);
                }
            }
        }
    }

    #[test]
    fn acceptance_frequency_matches_boltzmann() {
        let mut rng = stream(17);
        let trials = 200_000;
        let hits = (0..trials)
            .filter(|_| metropolis_accept(2.0, 2.0, &mut rng))
            .count();
        let p = (-1.0f64).exp();
        let freq = hits as f64 / trials as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((freq - p).abs() < 4.0 * sigma, "freq {freq} vs {p}");
    }

    #[test]
    fn incremental_energy_is_exact() {
        let (model, _) = xorsat_to_ising(&generate_3r3x(128, 4).unwrap());
        let mut rng = stream(5);
        let mut state = LocalState::new(&model, super::super::random_spins(128, &mut rng));
        for step in 1..=5000u64 {
            let k = rng.random_range(0..model.n());
            state.flip(&model, k);
            if step % 1000 == 0 {
                assert_eq!(state.energy, model.energy_of(&state.spins));
            }
        }
    }

    #[test]
    fn untracked_sweep_at_zero_temperature_descends() {
        let model = IsingModel::new(
            vec![0.0, 0.0],
            vec![Coupling { i: 0, j: 1, value: -1.0 }],
            0.0,
        )
        .unwrap();
        let mut spins = vec![1, -1];
        let mut rng = stream(0);
        metropolis_sweep(&model, &mut spins, 1e-9, &mut rng);
        assert_eq!(model.energy_of(&spins), -1.0);
    }

    #[test]
    fn rejects_bad_ladder() {
        let bad = AnnealConfig { t_hi: 1.0, t_lo: 1.0, sweeps_per_temp: 1 };
        assert!(bad.validate().is_err());
        let bad = AnnealConfig { t_hi: 1.0, t_lo: 0.0, sweeps_per_temp: 1 };
        assert!(bad.validate().is_err());
    }
}
