//! Running plans, the results file and per-group summaries.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::mpsc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::plan::{ExperimentPlan, SolverSpec};
use super::tts::{geometric_grid, optimal_tts, TtsCurve};
use super::BenchError;
use crate::ising::{xorsat_to_ising, IsingModel};
use crate::rng::derive_seed;
use crate::solvers::{solve, RunLimits, RunRecord, SolverDefaults};
use crate::xorsat::generate_3r3x;

/// One line of the results file: the run record plus the trial it belongs
/// to and when it finished.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    #[serde(flatten)]
    pub record: RunRecord,
    pub n: usize,
    pub noise: f64,
    pub instance: usize,
    pub restart: usize,
    /// ISO-8601, UTC.
    pub timestamp: String,
}

impl TrialRecord {
    pub fn key(&self) -> TrialKey {
        TrialKey {
            solver: self.record.solver_id.clone(),
            n: self.n,
            noise_bits: self.noise.to_bits(),
            instance: self.instance,
            restart: self.restart,
        }
    }
}

/// Identity of a trial for resuming.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrialKey {
    pub solver: String,
    pub n: usize,
    pub noise_bits: u64,
    pub instance: usize,
    pub restart: usize,
}

/// Seed of instance `index` at size `n`; shared by all solvers.
pub fn instance_seed(master: u64, n: usize, index: usize) -> u64 {
    derive_seed(master, &[n as u64, index as u64])
}

/// Seed of one run; shared by all solvers and noise levels.
pub fn run_seed(master: u64, n: usize, index: usize, restart: usize) -> u64 {
    derive_seed(master, &[n as u64, index as u64, restart as u64])
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Keep existing records and skip their trials.
    pub resume: bool,
    /// Worker threads; `None` uses all cores.
    pub threads: Option<usize>,
    pub defaults: SolverDefaults,
}

/// What a finished experiment produced.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub executed: usize,
    pub skipped: usize,
    pub records: Vec<TrialRecord>,
    pub summaries: Vec<Summary>,
}

struct WorkItem<'a> {
    solver: &'a SolverSpec,
    n: usize,
    noise: f64,
    instance: usize,
    restart: usize,
}

/// Run every trial of `plan`, appending one JSON line per run to the plan's
/// output, then summarize all records and write the summary CSV.
pub fn run_experiment(plan: &ExperimentPlan, options: &RunOptions) -> Result<ExperimentReport, BenchError> {
    plan.validate()?;
    let defaults = &options.defaults;
    if let Some(dir) = plan.output.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }

    let existing = if options.resume && plan.output.exists() {
        read_results_repairing(&plan.output)?
    } else {
        File::create(&plan.output)?;
        Vec::new()
    };
    let done: HashSet<TrialKey> = existing.iter().map(TrialRecord::key).collect();

    std::fs::write(plan.echo_path(), resolved_echo(plan, defaults))?;

    let mut items = Vec::new();
    let mut skipped = 0;
    for &n in &plan.sizes {
        for solver in &plan.solvers {
            for noise in plan.noise_levels_for(solver) {
                for instance in 0..plan.instances_per_size {
                    for restart in 0..plan.restarts_per_instance {
                        let key = TrialKey {
                            solver: solver.id().to_string(),
                            n,
                            noise_bits: noise.to_bits(),
                            instance,
                            restart,
                        };
                        if done.contains(&key) {
                            skipped += 1;
                        } else {
                            items.push(WorkItem { solver, n, noise, instance, restart });
                        }
                    }
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads.unwrap_or(0))
        .build()
        .map_err(|e| BenchError::PlanInvalid(e.to_string()))?;

    let models = pool.install(|| build_models(plan, &items))?;

    let file = OpenOptions::new().append(true).open(&plan.output)?;
    let (tx, rx) = mpsc::channel::<TrialRecord>();
    let mut new_records = std::thread::scope(|scope| -> Result<Vec<TrialRecord>, BenchError> {
        let writer = scope.spawn(move || -> Result<Vec<TrialRecord>, BenchError> {
            let mut out = BufWriter::new(file);
            let mut written = Vec::new();
            for rec in rx {
                serde_json::to_writer(&mut out, &rec).map_err(|e| BenchError::Io(e.into()))?;
                out.write_all(b"\n")?;
                out.flush()?;
                written.push(rec);
            }
            Ok(written)
        });
        let produced = pool.install(|| {
            items.par_iter().try_for_each_with(tx, |tx, item| -> Result<(), BenchError> {
                let model = &models[&(item.n, item.instance)];
                let config = item.solver.resolve(defaults, model, item.noise)?;
                let limits = RunLimits::new(plan.max_steps_for(defaults, item.noise), 0.0);
                let seed = run_seed(plan.master_seed, item.n, item.instance, item.restart);
                let record = solve(model, &config, seed, limits)?;
                let trial = TrialRecord {
                    record,
                    n: item.n,
                    noise: item.noise,
                    instance: item.instance,
                    restart: item.restart,
                    timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
                };
                tx.send(trial).map_err(|_| BenchError::WriterStopped)
            })
        });
        let written = writer.join().expect("writer thread panicked");
        // a writer failure shows up on the producer side as WriterStopped;
        // report the writer's own error instead
        let written = written?;
        produced?;
        Ok(written)
    })?;
    let executed = new_records.len();

    let mut records = existing;
    records.append(&mut new_records);
    records.sort_by_key(TrialRecord::key);
    let summaries = summarize(&records, &GridSpec::from_plan(plan))?;
    write_summary_csv(&plan.summary_path(), &summaries)?;
    Ok(ExperimentReport {
        executed,
        skipped,
        records,
        summaries,
    })
}

fn build_models(plan: &ExperimentPlan, items: &[WorkItem<'_>]) -> Result<HashMap<(usize, usize), IsingModel>, BenchError> {
    let needed: Vec<(usize, usize)> = items
        .iter()
        .map(|w| (w.n, w.instance))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    needed
        .into_par_iter()
        .map(|(n, i)| {
            let instance = generate_3r3x(n, instance_seed(plan.master_seed, n, i))?;
            Ok(((n, i), xorsat_to_ising(&instance).0))
        })
        .collect()
}

fn resolved_echo(plan: &ExperimentPlan, defaults: &SolverDefaults) -> String {
    #[derive(Serialize)]
    struct Echo<'a> {
        plan: &'a ExperimentPlan,
        defaults: &'a SolverDefaults,
    }
    format!(
        "# resolved plan and solver defaults\n{}",
        toml::to_string(&Echo { plan, defaults }).expect("echo serializes")
    )
}

/// Read a results file.
pub fn read_results(path: &Path) -> Result<Vec<TrialRecord>, BenchError> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| BenchError::Results {
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

/// Read a results file, dropping a torn final line left by an interrupted
/// write. Damage anywhere else is an error.
fn read_results_repairing(path: &Path) -> Result<Vec<TrialRecord>, BenchError> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    let mut offset = 0;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        let complete = line.ends_with('\n');
        if !line.trim().is_empty() {
            match serde_json::from_str::<TrialRecord>(line.trim_end()) {
                Ok(rec) => out.push(rec),
                Err(_) if !complete => {
                    OpenOptions::new().write(true).open(path)?.set_len(offset as u64)?;
                    return Ok(out);
                }
                Err(e) => {
                    return Err(BenchError::Results {
                        line: i + 1,
                        message: e.to_string(),
                    })
                }
            }
        }
        if !complete {
            OpenOptions::new().append(true).open(path)?.write_all(b"\n")?;
        }
        offset += line.len();
    }
    Ok(out)
}

/// How cutoff grids are chosen when summarizing.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Explicit(Vec<f64>),
    /// Geometric up to the largest step count seen in the group.
    Geometric { per_decade: u32 },
}

impl GridSpec {
    pub fn from_plan(plan: &ExperimentPlan) -> Self {
        match &plan.cutoff_grid {
            Some(g) => GridSpec::Explicit(g.clone()),
            None => GridSpec::Geometric {
                per_decade: plan.grid_per_decade,
            },
        }
    }

    fn grid_for(&self, records: &[&TrialRecord]) -> Vec<f64> {
        match self {
            GridSpec::Explicit(g) => g.clone(),
            GridSpec::Geometric { per_decade } => {
                let cap = records.iter().map(|r| r.record.steps_executed).max().unwrap_or(1);
                geometric_grid(cap, *per_decade)
            }
        }
    }
}

/// One row of the summary CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub solver: String,
    pub n: usize,
    pub noise: f64,
    /// Optimal cutoff in steps; infinite when nothing was solved.
    pub tf_star: f64,
    pub tts_steps: f64,
    pub tts_seconds: f64,
    pub mean_p: f64,
    pub instances: usize,
    pub restarts: usize,
}

/// A summary row with the curve it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub row: SummaryRow,
    pub curve: TtsCurve,
    /// Mean wall time per step over the group.
    pub seconds_per_step: f64,
}

/// Group records by (solver, n, noise), then by instance, and compute the
/// optimal TTS of each group.
pub fn summarize(records: &[TrialRecord], grid: &GridSpec) -> Result<Vec<Summary>, BenchError> {
    if records.is_empty() {
        return Err(BenchError::NoRecords);
    }
    type Group<'a> = BTreeMap<usize, Vec<&'a TrialRecord>>;
    let mut groups: BTreeMap<(String, usize, u64), Group<'_>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.record.solver_id.clone(), r.n, r.noise.to_bits()))
            .or_default()
            .entry(r.instance)
            .or_default()
            .push(r);
    }
    groups
        .into_par_iter()
        .map(|((solver, n, noise_bits), by_instance)| {
            let all: Vec<&TrialRecord> = by_instance.values().flatten().copied().collect();
            let grid = grid.grid_for(&all);
            let runs: Vec<Vec<RunRecord>> = by_instance
                .values()
                .map(|v| v.iter().map(|t| t.record.clone()).collect())
                .collect();
            let curve = optimal_tts(&runs, &grid)?;
            let timed: Vec<f64> = all
                .iter()
                .filter(|t| t.record.steps_executed > 0)
                .map(|t| t.record.wall_time / t.record.steps_executed as f64)
                .collect();
            let seconds_per_step = if timed.is_empty() {
                0.0
            } else {
                timed.iter().sum::<f64>() / timed.len() as f64
            };
            let row = SummaryRow {
                solver,
                n,
                noise: f64::from_bits(noise_bits),
                tf_star: curve.tf_star().unwrap_or(f64::INFINITY),
                tts_steps: curve.optimal_tts,
                tts_seconds: curve.optimal_tts * seconds_per_step,
                mean_p: curve.mean_success(),
                instances: runs.len(),
                restarts: runs.iter().map(Vec::len).max().unwrap_or(0),
            };
            Ok(Summary {
                row,
                curve,
                seconds_per_step,
            })
        })
        .collect()
}

pub fn write_summary_csv(path: &Path, summaries: &[Summary]) -> Result<(), BenchError> {
    let rows: Vec<&SummaryRow> = summaries.iter().map(|s| &s.row).collect();
    write_summary_rows(path, &rows)
}

pub fn write_summary_rows(path: &Path, rows: &[&SummaryRow]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_summary_csv(path: &Path) -> Result<Vec<SummaryRow>, BenchError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().map(|row| row.map_err(csv_err)).collect()
}

fn csv_err(e: csv::Error) -> BenchError {
    BenchError::Csv(e.to_string())
}
