//! Solver configuration and the checked-in defaults file.
//!
//! Config files are TOML with a `solver` key naming the variant and the
//! variant's parameters alongside it:
//!
//! ```toml
//! solver = "laser"
//! gain = 2.0
//! coupling = 0.12
//! noise = 0.03
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AnnealConfig, LaserConfig, SolverError, TabuConfig, TemperingConfig};
use crate::ising::IsingModel;

/// Contents of `defaults/solvers.toml`.
pub const DEFAULTS_TOML: &str = include_str!("../../defaults/solvers.toml");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "solver", rename_all = "lowercase")]
pub enum SolverConfig {
    Laser(LaserConfig),
    #[serde(rename = "sa")]
    SimAnneal(AnnealConfig),
    Tabu(TabuConfig),
    #[serde(rename = "pt")]
    ParTemp(TemperingConfig),
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        match self {
            SolverConfig::Laser(c) => c.validate(),
            SolverConfig::SimAnneal(c) => c.validate(),
            SolverConfig::Tabu(c) => c.validate(),
            SolverConfig::ParTemp(c) => c.validate(),
        }
    }

    /// Short solver id used in records and summaries.
    pub fn id(&self) -> &'static str {
        match self {
            SolverConfig::Laser(_) => "laser",
            SolverConfig::SimAnneal(_) => "sa",
            SolverConfig::Tabu(_) => "tabu",
            SolverConfig::ParTemp(_) => "pt",
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, SolverError> {
        let config: SolverConfig =
            toml::from_str(text).map_err(|e| SolverError::ConfigFile(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("solver configs serialize")
    }

    /// Noise amplitude for laser configs, zero otherwise.
    pub fn noise(&self) -> f64 {
        match self {
            SolverConfig::Laser(c) => c.noise,
            _ => 0.0,
        }
    }

    /// Same config with the laser noise amplitude replaced.
    pub fn with_noise(self, noise: f64) -> Self {
        match self {
            SolverConfig::Laser(c) => SolverConfig::Laser(LaserConfig { noise, ..c }),
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaserDefaults {
    pub gain: f64,
    pub init_scale: f64,
    pub saturation: f64,
    /// Fallback coupling when no calibrated entry is close.
    pub coupling: f64,
    /// Calibrated coupling per spin count; keys are decimal spin counts.
    #[serde(default)]
    pub coupling_by_n: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnealDefaults {
    pub t_hi_over_max_coupling: f64,
    pub t_lo: f64,
    pub sweeps_per_temp: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemperingDefaults {
    pub min_replicas: usize,
    pub t_hi_over_max_coupling: f64,
    pub t_lo: f64,
    pub sweeps_between_swaps: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitDefaults {
    pub noise_free_max_steps: u64,
    pub noisy_max_steps: u64,
}

/// Default hyperparameters, resolved against a model where they depend on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverDefaults {
    pub laser: LaserDefaults,
    pub anneal: AnnealDefaults,
    pub tabu: TabuConfig,
    pub tempering: TemperingDefaults,
    pub limits: LimitDefaults,
}

impl Default for SolverDefaults {
    fn default() -> Self {
        Self::from_toml(DEFAULTS_TOML).expect("shipped defaults parse")
    }
}

impl SolverDefaults {
    pub fn from_toml(text: &str) -> Result<Self, SolverError> {
        toml::from_str(text).map_err(|e| SolverError::ConfigFile(e.to_string()))
    }

    /// Calibrated coupling for `n` spins: the entry with the nearest spin
    /// count on a log scale, or the fallback when the table is empty.
    pub fn laser_coupling(&self, n: usize) -> f64 {
        self.laser
            .coupling_by_n
            .iter()
            .filter_map(|(k, &v)| k.parse::<usize>().ok().map(|m| (m, v)))
            .min_by(|a, b| {
                let da = ((a.0 as f64).ln() - (n as f64).ln()).abs();
                let db = ((b.0 as f64).ln() - (n as f64).ln()).abs();
                da.total_cmp(&db)
            })
            .map(|(_, v)| v)
            .unwrap_or(self.laser.coupling)
    }

    pub fn laser(&self, n: usize, noise: f64) -> LaserConfig {
        LaserConfig {
            gain: self.laser.gain,
            coupling: self.laser_coupling(n),
            noise,
            init_scale: self.laser.init_scale,
            saturation: self.laser.saturation,
        }
    }

    pub fn anneal(&self, model: &IsingModel) -> AnnealConfig {
        AnnealConfig {
            t_hi: self.anneal.t_hi_over_max_coupling * model.max_abs_coupling().max(f64::MIN_POSITIVE),
            t_lo: self.anneal.t_lo,
            sweeps_per_temp: self.anneal.sweeps_per_temp,
        }
    }

    pub fn tempering(&self, model: &IsingModel) -> TemperingConfig {
        let log2n = (model.n().max(2) as f64).log2().round() as usize;
        TemperingConfig {
            num_replicas: self.tempering.min_replicas.max(log2n),
            t_hi: self.tempering.t_hi_over_max_coupling * model.max_abs_coupling().max(f64::MIN_POSITIVE),
            t_lo: self.tempering.t_lo,
            sweeps_between_swaps: self.tempering.sweeps_between_swaps,
        }
    }

    /// Default config for a solver name (`laser`, `sa`, `tabu`, `pt`).
    pub fn for_solver(&self, name: &str, model: &IsingModel, noise: f64) -> Result<SolverConfig, SolverError> {
        Ok(match name {
            "laser" => SolverConfig::Laser(self.laser(model.n(), noise)),
            "sa" => SolverConfig::SimAnneal(self.anneal(model)),
            "tabu" => SolverConfig::Tabu(self.tabu),
            "pt" => SolverConfig::ParTemp(self.tempering(model)),
            other => return Err(SolverError::UnknownSolver(other.to_string())),
        })
    }

    /// Step cap: the noise-free budget, or the larger one when noise is on.
    pub fn max_steps(&self, noise: f64) -> u64 {
        if noise > 0.0 {
            self.limits.noisy_max_steps
        } else {
            self.limits.noise_free_max_steps
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_defaults_parse() {
        let d = SolverDefaults::default();
        assert_eq!(d.tabu.tenure, 10);
        assert_eq!(d.limits.noise_free_max_steps, 100_000);
        assert_eq!(d.limits.noisy_max_steps, 500_000);
        assert_eq!(d.max_steps(0.03), 500_000);
    }

    #[test]
    fn config_file_roundtrip() {
        let cfg = SolverConfig::from_toml("solver = \"tabu\"\ntenure = 7\naspiration = false\n").unwrap();
        assert_eq!(cfg, SolverConfig::Tabu(TabuConfig { tenure: 7, aspiration: false }));
        assert_eq!(SolverConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);

        let laser = SolverConfig::from_toml("solver = \"laser\"\nnoise = 0.03\n").unwrap();
        assert_eq!(laser.noise(), 0.03);
        assert!(SolverConfig::from_toml("solver = \"sa\"\nt_hi = 0.1\nt_lo = 1.0\nsweeps_per_temp = 1\n").is_err());
        assert!(SolverConfig::from_toml("solver = \"qaoa\"\n").is_err());
    }

    #[test]
    fn nearest_calibrated_coupling() {
        let mut d = SolverDefaults::default();
        d.laser.coupling_by_n = [("16".to_string(), 1.0), ("64".to_string(), 2.0)].into();
        assert_eq!(d.laser_coupling(16), 1.0);
        assert_eq!(d.laser_coupling(20), 1.0);
        assert_eq!(d.laser_coupling(50), 2.0);
        assert_eq!(d.laser_coupling(4096), 2.0);
        d.laser.coupling_by_n.clear();
        assert_eq!(d.laser_coupling(16), d.laser.coupling);
    }
}
