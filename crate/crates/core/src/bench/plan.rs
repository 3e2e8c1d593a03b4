//! Experiment plans.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::ising::IsingModel;
use crate::solvers::{SolverConfig, SolverDefaults};

/// A solver in a plan: a bare name resolved against the defaults for every
/// model, or a fully explicit config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SolverSpec {
    Name(String),
    Config(SolverConfig),
}

impl SolverSpec {
    pub fn id(&self) -> &str {
        match self {
            SolverSpec::Name(name) => name,
            SolverSpec::Config(c) => c.id(),
        }
    }

    pub fn is_laser(&self) -> bool {
        self.id() == "laser"
    }

    /// Concrete config for `model` at noise level `noise`.
    pub fn resolve(&self, defaults: &SolverDefaults, model: &IsingModel, noise: f64) -> Result<SolverConfig, BenchError> {
        Ok(match self {
            SolverSpec::Name(name) => defaults.for_solver(name, model, noise)?,
            SolverSpec::Config(c) => c.with_noise(if c.id() == "laser" { noise } else { 0.0 }),
        })
    }
}

fn default_instances() -> usize {
    25
}

fn default_restarts() -> usize {
    50
}

fn default_noise() -> Vec<f64> {
    vec![0.0]
}

fn default_per_decade() -> u32 {
    20
}

fn default_output() -> PathBuf {
    PathBuf::from("results.jsonl")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    /// Spin counts of the quadratized models.
    pub sizes: Vec<usize>,
    #[serde(default = "default_instances")]
    pub instances_per_size: usize,
    #[serde(default = "default_restarts")]
    pub restarts_per_instance: usize,
    pub solvers: Vec<SolverSpec>,
    /// Noise amplitudes; only the laser solver is run at more than one.
    #[serde(default = "default_noise")]
    pub noise_levels: Vec<f64>,
    #[serde(default)]
    pub master_seed: u64,
    /// Step cap for every run. Unset means the noise-dependent default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u64>,
    /// Explicit cutoff grid in steps. Unset means a geometric grid up to the
    /// step cap.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff_grid: Option<Vec<f64>>,
    #[serde(default = "default_per_decade")]
    pub grid_per_decade: u32,
    /// Results file (JSON lines).
    #[serde(default = "default_output")]
    pub output: PathBuf,
    /// Summary CSV. Unset means `<output stem>.summary.csv` next to it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<PathBuf>,
}

impl ExperimentPlan {
    pub fn from_toml(text: &str) -> Result<Self, BenchError> {
        let plan: ExperimentPlan = toml::from_str(text).map_err(|e| BenchError::PlanInvalid(e.to_string()))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plans serialize")
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: String| Err(BenchError::PlanInvalid(m));
        if self.sizes.is_empty() {
            return bad("no sizes".into());
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n % 2 != 0 || n < 8) {
            return bad(format!("size {n} must be even and at least 8"));
        }
        if self.instances_per_size == 0 {
            return bad("instances_per_size must be at least 1".into());
        }
        if self.restarts_per_instance == 0 {
            return bad("restarts_per_instance must be at least 1".into());
        }
        if self.solvers.is_empty() {
            return bad("no solvers".into());
        }
        for (i, s) in self.solvers.iter().enumerate() {
            if let SolverSpec::Name(name) = s {
                if !["laser", "sa", "tabu", "pt"].contains(&name.as_str()) {
                    return bad(format!("unknown solver `{name}`; valid names are laser, sa, tabu, pt"));
                }
            }
            if let SolverSpec::Config(c) = s {
                c.validate()?;
            }
            if self.solvers[..i].iter().any(|o| o.id() == s.id()) {
                return bad(format!("solver `{}` listed twice", s.id()));
            }
        }
        if self.noise_levels.is_empty() {
            return bad("noise_levels must not be empty".into());
        }
        if self.noise_levels.iter().any(|&e| !(e >= 0.0 && e.is_finite())) {
            return bad("noise levels must be finite and non-negative".into());
        }
        let mut sorted = self.noise_levels.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return bad("duplicate noise level".into());
        }
        if let Some(grid) = &self.cutoff_grid {
            if grid.is_empty() || !(grid[0] > 0.0) || grid.windows(2).any(|w| !(w[0] < w[1])) {
                return bad("cutoff_grid must be non-empty, positive and strictly increasing".into());
            }
        }
        if self.grid_per_decade == 0 {
            return bad("grid_per_decade must be at least 1".into());
        }
        if self.max_steps == Some(0) {
            return bad("max_steps must be at least 1".into());
        }
        Ok(())
    }

    /// Noise levels a solver runs at: all of them for the laser, a single
    /// noise-free level otherwise.
    pub fn noise_levels_for(&self, solver: &SolverSpec) -> Vec<f64> {
        if solver.is_laser() {
            self.noise_levels.clone()
        } else {
            vec![0.0]
        }
    }

    pub fn max_steps_for(&self, defaults: &SolverDefaults, noise: f64) -> u64 {
        self.max_steps.unwrap_or_else(|| defaults.max_steps(noise))
    }

    pub fn summary_path(&self) -> PathBuf {
        self.summary.clone().unwrap_or_else(|| sibling(&self.output, "summary.csv"))
    }

    /// Sidecar file holding the resolved plan and defaults.
    pub fn echo_path(&self) -> PathBuf {
        sibling(&self.output, "plan.toml")
    }

    /// Number of runs the plan asks for.
    pub fn total_runs(&self) -> usize {
        let per_size = self.instances_per_size * self.restarts_per_instance;
        self.solvers
            .iter()
            .map(|s| self.noise_levels_for(s).len() * per_size * self.sizes.len())
            .sum()
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"
sizes = [32]
instances_per_size = 1
restarts_per_instance = 2
solvers = ["sa", { solver = "tabu", tenure = 5, aspiration = true }]
master_seed = 7
output = "out/run.jsonl"
"#;

    #[test]
    fn parses_with_defaults() {
        let plan = ExperimentPlan::from_toml(TINY).unwrap();
        assert_eq!(plan.noise_levels, vec![0.0]);
        assert_eq!(plan.grid_per_decade, 20);
        assert_eq!(plan.solvers[1].id(), "tabu");
        assert_eq!(plan.total_runs(), 4);
        assert_eq!(plan.summary_path(), PathBuf::from("out/run.summary.csv"));
        assert_eq!(ExperimentPlan::from_toml(&plan.to_toml()).unwrap(), plan);
    }

    #[test]
    fn noise_multiplies_laser_runs_only() {
        let mut plan = ExperimentPlan::from_toml(TINY).unwrap();
        plan.noise_levels = vec![0.0, 0.03, 0.07];
        assert_eq!(plan.total_runs(), 4);
        plan.solvers = vec![SolverSpec::Name("laser".into())];
        assert_eq!(plan.total_runs(), 6);
    }

    #[test]
    fn rejects_bad_plans() {
        for bad in [
            "sizes = [33]\nsolvers = [\"sa\"]\n",
            "sizes = [32]\nsolvers = []\n",
            "sizes = [32]\nsolvers = [\"qaoa\"]\n",
            "sizes = [32]\nsolvers = [\"sa\"]\ninstances_per_size = 0\n",
            "sizes = [32]\nsolvers = [\"sa\"]\ncutoff_grid = [1.0, 1.0]\n",
            "sizes = [32]\nsolvers = [\"sa\", \"sa\"]\n",
            "sizes = [32]\nsolvers = [\"sa\"]\nbogus = 1\n",
        ] {
            assert!(matches!(ExperimentPlan::from_toml(bad), Err(BenchError::PlanInvalid(_))), "{bad}");
        }
    }
}
