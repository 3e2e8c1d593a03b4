//! Coupled-laser dynamics surrogate.
//!
//! Each spin is a laser mode with a complex amplitude. One round trip applies
//! linear coupling through the Ising matrix, optional Gaussian noise and a
//! saturable gain. Spins are read out from the sign of the real part, i.e. the
//! phase relative to a fixed reference field `r = +a_sat` that implements the
//! linear term.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::SolverError;
use crate::ising::{IsingModel, SpinState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LaserConfig {
    /// Small-signal gain `g0 > 1`.
    pub gain: f64,
    /// Coupling strength `κ > 0`.
    pub coupling: f64,
    /// Noise std per quadrature, as a fraction of the saturated amplitude.
    pub noise: f64,
    /// Initial amplitude as a fraction of the saturated amplitude.
    pub init_scale: f64,
    /// Saturated amplitude `a_sat`.
    pub saturation: f64,
}

impl Default for LaserConfig {
    fn default() -> Self {
        Self {
            gain: 2.0,
            coupling: 0.1,
            noise: 0.0,
            init_scale: 0.1,
            saturation: 1.0,
        }
    }
}

/// Largest noise amplitude in the studied range; larger values are allowed.
pub const STUDIED_NOISE_MAX: f64 = 0.07;

impl LaserConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |what: &str| Err(SolverError::InvalidConfig(what.to_string()));
        if !(self.gain > 1.0 && self.gain.is_finite()) {
            return bad("laser gain must exceed 1");
        }
        if !(self.coupling > 0.0 && self.coupling.is_finite()) {
            return bad("laser coupling must be positive");
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return bad("laser noise must be non-negative");
        }
        if !(self.saturation > 0.0 && self.saturation.is_finite()) {
            return bad("saturated amplitude must be positive");
        }
        if !(self.init_scale > 0.0 && self.init_scale.is_finite()) {
            return bad("initial scale must be positive");
        }
        Ok(())
    }

    /// Whether the noise amplitude lies outside the studied range.
    pub fn noise_flagged(&self) -> bool {
        self.noise > STUDIED_NOISE_MAX
    }

    /// Steady-state amplitude of an uncoupled mode, `a_sat·sqrt(g0 − 1)`.
    pub fn steady_amplitude(&self) -> f64 {
        self.saturation * (self.gain - 1.0).sqrt()
    }
}

/// Complex field of all modes plus the round-trip counter.
#[derive(Debug, Clone, PartialEq)]
pub struct LaserField {
    pub field: Vec<Complex64>,
    pub config: LaserConfig,
    pub step_count: u64,
}

impl LaserField {
    /// Uniform random phases at amplitude `init_scale·a_sat`.
    pub fn random(n: usize, config: LaserConfig, rng: &mut impl Rng) -> Self {
        let amp = config.init_scale * config.saturation;
        let field = (0..n)
            .map(|_| {
                let phase = rng.random_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(amp, phase)
            })
            .collect();
        Self::from_field(field, config)
    }

    pub fn from_field(field: Vec<Complex64>, config: LaserConfig) -> Self {
        Self {
            field,
            config,
            step_count: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.field.len()
    }

    pub fn is_empty(&self) -> bool {
        self.field.is_empty()
    }

    pub fn max_amplitude(&self) -> f64 {
        self.field.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }
}

/// Sign of the real part of each mode; exact zeros read as +1.
pub fn readout(state: &LaserField) -> SpinState {
    SpinState::new(state.field.iter().map(|e| sign_of(*e)).collect()).expect("readout produces ±1")
}

#[inline]
pub(crate) fn sign_of(e: Complex64) -> i8 {
    if e.re < 0.0 {
        -1
    } else {
        1
    }
}

/// Reusable buffers for round trips on one model.
pub(crate) struct RoundTrip {
    injected: Vec<Complex64>,
    noise: Option<Normal<f64>>,
}

impl RoundTrip {
    pub(crate) fn new(n: usize, config: &LaserConfig) -> Self {
        let sigma = config.noise * config.saturation;
        Self {
            injected: vec![Complex64::new(0.0, 0.0); n],
            noise: (sigma > 0.0).then(|| Normal::new(0.0, sigma).expect("finite sigma")),
        }
    }

    pub(crate) fn apply(
        &mut self,
        state: &mut LaserField,
        model: &IsingModel,
        rng: &mut impl Rng,
    ) -> Result<(), SolverError> {
        let cfg = state.config;
        let reference = cfg.saturation;
        let a_sat2 = cfg.saturation * cfg.saturation;

        // J e + h r, computed from the field before this round trip
        for (k, out) in self.injected.iter_mut().enumerate() {
            let mut acc = Complex64::new(model.h()[k] * reference, 0.0);
            for &(j, v) in model.neighbors(k) {
                acc += state.field[j] * v;
            }
            *out = acc;
        }

        for (e, injected) in state.field.iter_mut().zip(&self.injected) {
            let mut f = *e - injected * cfg.coupling;
            if let Some(dist) = &self.noise {
                f.re += dist.sample(rng);
                f.im += dist.sample(rng);
            }
            f *= cfg.gain / (1.0 + f.norm_sqr() / a_sat2);
            if !(f.re.is_finite() && f.im.is_finite()) {
                return Err(SolverError::NonFiniteField {
                    step: state.step_count,
                });
            }
            *e = f;
        }
        state.step_count += 1;
        Ok(())
    }
}

/// One round trip: coupling, noise, then saturable gain.
pub fn laser_step(
    state: &LaserField,
    model: &IsingModel,
    rng: &mut impl Rng,
) -> Result<LaserField, SolverError> {
    if state.len() != model.n() {
        return Err(SolverError::LengthMismatch {
            expected: model.n(),
            got: state.len(),
        });
    }
    state.config.validate()?;
    let mut next = state.clone();
    RoundTrip::new(model.n(), &state.config).apply(&mut next, model, rng)?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::Coupling;
    use crate::rng::stream;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn uncoupled_fixed_point_is_unchanged() {
        let cfg = LaserConfig { gain: 2.5, saturation: 1.7, ..Default::default() };
        let a = cfg.steady_amplitude();
        let model = IsingModel::new(vec![0.0; 3], vec![], 0.0).unwrap();
        let state = LaserField::from_field(
            vec![c(a, 0.0), Complex64::from_polar(a, 2.0), c(0.0, -a)],
            cfg,
        );
        let next = laser_step(&state, &model, &mut stream(0)).unwrap();
        for (x, y) in state.field.iter().zip(&next.field) {
            assert!((x - y).norm() < 1e-12);
        }
        assert_eq!(next.step_count, 1);
    }

    #[test]
    fn ferromagnet_aligns() {
        let model = IsingModel::new(
            vec![0.0, 0.0],
            vec![Coupling { i: 0, j: 1, value: -1.0 }],
            0.0,
        )
        .unwrap();
        let cfg = LaserConfig { coupling: 0.2, ..Default::default() };
        for seed in 0..50 {
            let mut rng = stream(seed);
            let mut state = LaserField::random(2, cfg, &mut rng);
            for _ in 0..500 {
                state = laser_step(&state, &model, &mut rng).unwrap();
            }
            let s = readout(&state);
            assert_eq!(s.get(0), s.get(1), "seed {seed}");
            assert_eq!(model.energy(&s).unwrap(), -1.0);
        }
    }

    #[test]
    fn noise_has_requested_std() {
        // a zero field with no coupling receives only noise; undo the gain
        // exactly to recover the injected sample
        let model = IsingModel::new(vec![0.0], vec![], 0.0).unwrap();
        for eta in [0.03, 0.07] {
            let cfg = LaserConfig { noise: eta, saturation: 2.0, ..Default::default() };
            let mut trip = RoundTrip::new(1, &cfg);
            let mut rng = stream(9);
            let samples = 100_000;
            let (mut sum, mut sum2) = (0.0, 0.0);
            for _ in 0..samples / 2 {
                let mut st = LaserField::from_field(vec![c(0.0, 0.0)], cfg);
                trip.apply(&mut st, &model, &mut rng).unwrap();
                let pre = solve_pre_gain(st.field[0], &cfg);
                for v in [pre.re, pre.im] {
                    sum += v;
                    sum2 += v * v;
                }
            }
            let mean = sum / samples as f64;
            let std = (sum2 / samples as f64 - mean * mean).sqrt();
            let sigma = eta * cfg.saturation;
            assert!((std - sigma).abs() < 0.02 * sigma, "eta {eta}: std {std}");
            assert!(mean.abs() < 3.0 * sigma / (samples as f64).sqrt());
        }
    }

    /// Pre-gain field from a post-gain field: |out| = g0 |f| / (1 + |f|²/a²)
    /// has the small-|f| root |f| = (g0 − sqrt(g0² − 4|out|²/a²)) a² / (2|out|).
    fn solve_pre_gain(out: Complex64, cfg: &LaserConfig) -> Complex64 {
        let r = out.norm();
        if r == 0.0 {
            return out;
        }
        let a2 = cfg.saturation * cfg.saturation;
        let g = cfg.gain;
        let f = (g - (g * g - 4.0 * r * r / a2).sqrt()) * a2 / (2.0 * r);
        out * (f / r)
    }

    #[test]
    fn readout_cases() {
        let cfg = LaserConfig::default();
        let s = readout(&LaserField::from_field(vec![c(1.0, 0.0); 3], cfg));
        assert_eq!(s.spins(), &[1, 1, 1]);
        let s = readout(&LaserField::from_field(vec![c(-0.5, 0.0), c(0.0, 0.0), c(0.0, 1.0)], cfg));
        assert_eq!(s.spins(), &[-1, 1, 1]);
        let s = readout(&LaserField::from_field(vec![c(-1e-9, 1.0), c(1e-9, -1.0)], cfg));
        assert_eq!(s.spins(), &[-1, 1]);
    }

    #[test]
    fn gain_saturates() {
        let model = IsingModel::new(
            vec![1.0, -2.0, 0.5],
            vec![
                Coupling { i: 0, j: 1, value: 3.0 },
                Coupling { i: 1, j: 2, value: -4.0 },
            ],
            0.0,
        )
        .unwrap();
        let cfg = LaserConfig { coupling: 5.0, noise: 0.5, gain: 3.0, saturation: 0.7, ..Default::default() };
        let mut rng = stream(4);
        let mut state = LaserField::random(3, cfg, &mut rng);
        for _ in 0..2000 {
            state = laser_step(&state, &model, &mut rng).unwrap();
            assert!(state.max_amplitude() <= cfg.gain * cfg.saturation);
        }
    }

    #[test]
    fn steady_state_amplitude_bound() {
        let model = IsingModel::new(vec![0.0; 4], vec![], 0.0).unwrap();
        let cfg = LaserConfig::default();
        let mut rng = stream(2);
        let mut state = LaserField::random(4, cfg, &mut rng);
        for _ in 0..200 {
            state = laser_step(&state, &model, &mut rng).unwrap();
        }
        assert!(state.max_amplitude() <= cfg.steady_amplitude() * (1.0 + 1e-9));
        assert!(state.max_amplitude() >= cfg.steady_amplitude() * (1.0 - 1e-9));
    }

    #[test]
    fn rejects_bad_config_and_length() {
        assert!(LaserConfig { gain: 1.0, ..Default::default() }.validate().is_err());
        assert!(LaserConfig { coupling: 0.0, ..Default::default() }.validate().is_err());
        assert!(LaserConfig { noise: -0.1, ..Default::default() }.validate().is_err());
        assert!(LaserConfig { noise: 0.2, ..Default::default() }.noise_flagged());
        let model = IsingModel::new(vec![0.0; 2], vec![], 0.0).unwrap();
        let state = LaserField::from_field(vec![c(0.1, 0.0)], LaserConfig::default());
        assert!(matches!(
            laser_step(&state, &model, &mut stream(0)),
            Err(SolverError::LengthMismatch { expected: 2, got: 1 })
        ));
    }
}
