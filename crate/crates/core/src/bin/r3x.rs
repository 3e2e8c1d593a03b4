//! `r3x`: generate, convert, solve, benchmark and fit planted 3R3X problems.
//!
//! Exit codes: 0 success, 1 domain failure (inconsistent, unsatisfied, no
//! data, unreadable input), 2 usage error.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use r3x::analysis::{self, FitReport, Quantity};
use r3x::bench::{self, ExperimentPlan, GridSpec, RunOptions};
use r3x::ising::{decode, write_ising, xorsat_to_ising};
use r3x::solvers::{solve_detailed, RunLimits, SolverConfig, SolverDefaults};
use r3x::xorsat::{self, evaluate, gf2_solve, XorSatError, XorSatInstance};

#[derive(Parser, Debug)]
#[command(name = "r3x", version, about = "Planted 3-regular 3-XORSAT benchmark toolkit")]
struct Cli {
    /// Master seed (instance generation, solver runs, bootstrap)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; defaults to all cores
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// TOML file with defaults for any flag; explicit flags win
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path; its meaning depends on the subcommand
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write planted instances (output is a directory, default `.`)
    Generate {
        /// Spin count of the quadratized model (twice the variable count)
        #[arg(short)]
        n: Option<usize>,
        /// Number of instances
        #[arg(long)]
        count: Option<usize>,
    },
    /// Quadratize an instance and write the Ising model (output is a file,
    /// default stdout)
    Convert { instance: PathBuf },
    /// Solve one instance with one trajectory; the record is printed and,
    /// with --output, appended to a results file
    Solve {
        instance: PathBuf,
        /// laser, sa, tabu or pt
        #[arg(long)]
        solver: Option<String>,
        /// Laser noise amplitude as a fraction of the saturated amplitude
        #[arg(long)]
        noise: Option<f64>,
        /// Step cap; defaults to 100000, or 500000 when noise is on
        #[arg(long)]
        max_steps: Option<u64>,
        /// Explicit solver config file (TOML with a `solver` key)
        #[arg(long)]
        solver_config: Option<PathBuf>,
        /// Replacement for the shipped solver defaults file
        #[arg(long)]
        defaults: Option<PathBuf>,
    },
    /// Run an experiment plan; output overrides the plan's results file
    Bench {
        plan: PathBuf,
        /// Keep existing results and run only missing trials
        #[arg(long)]
        resume: bool,
        /// Replacement for the shipped solver defaults file
        #[arg(long)]
        defaults: Option<PathBuf>,
    },
    /// Fit scaling laws to a results file (.jsonl) or summary (.csv);
    /// output is the fits file, default `fits.toml`
    Fit {
        input: PathBuf,
        /// TTS column to fit; defaults to wall-clock seconds
        #[arg(long, value_enum)]
        quantity: Option<QuantityArg>,
        /// Bootstrap resamples
        #[arg(long)]
        resamples: Option<usize>,
    },
    /// Exact GF(2) check of an instance, optionally of an assignment
    Verify {
        instance: PathBuf,
        /// Bit string, one character per variable
        #[arg(long)]
        assignment: Option<String>,
    },
    /// Emit plot data and a gnuplot script from a fits file (output is a
    /// directory, default `plots`)
    Report { fits: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "lowercase")]
enum QuantityArg {
    Steps,
    Seconds,
}

/// Flag defaults read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    threads: Option<usize>,
    output: Option<PathBuf>,
    generate: GenerateFile,
    solve: SolveFile,
    bench: BenchFile,
    fit: FitFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct GenerateFile {
    n: Option<usize>,
    count: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SolveFile {
    solver: Option<String>,
    noise: Option<f64>,
    max_steps: Option<u64>,
    solver_config: Option<PathBuf>,
    defaults: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct BenchFile {
    resume: Option<bool>,
    defaults: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct FitFile {
    quantity: Option<QuantityArg>,
    resamples: Option<usize>,
}

enum Failure {
    Usage(String),
    Domain(String),
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn domain(e: impl Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn instance_error(e: XorSatError) -> Failure {
    match e {
        XorSatError::OddSize(_) | XorSatError::TooSmall(_) | XorSatError::LengthMismatch { .. } => usage(e),
        other => domain(other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

/// Print the resolved configuration as commented TOML on stderr.
fn echo(command: &str, resolved: &impl Serialize) {
    let body = toml::to_string(resolved).unwrap_or_default();
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "# r3x {command}");
    for line in body.lines() {
        let _ = writeln!(err, "# {line}");
    }
}

fn load_defaults(path: Option<&Path>) -> Result<SolverDefaults, Failure> {
    match path {
        None => Ok(SolverDefaults::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| domain(format!("{}: {e}", p.display())))?;
            SolverDefaults::from_toml(&text).map_err(usage)
        }
    }
}

fn read_instance(path: &Path) -> Result<XorSatInstance, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| domain(format!("{}: {e}", path.display())))?;
    xorsat::parse(&text).map_err(|e| domain(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let file: FileConfig = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        None => FileConfig::default(),
    };
    let seed = cli.seed.or(file.seed);
    let threads = cli.threads.or(file.threads);
    let output = cli.output.clone().or(file.output.clone());
    if let Some(t) = threads {
        if t == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(usage)?;
    }

    match cli.command {
        Command::Generate { n, count } => {
            let n = n.or(file.generate.n).ok_or_else(|| usage("generate needs -n"))?;
            let count = count.or(file.generate.count).unwrap_or(1);
            let seed = seed.unwrap_or(0);
            let dir = output.unwrap_or_else(|| PathBuf::from("."));
            #[derive(Serialize)]
            struct Resolved<'a> {
                n: usize,
                count: usize,
                seed: u64,
                output: &'a Path,
            }
            echo("generate", &Resolved { n, count, seed, output: &dir });
            std::fs::create_dir_all(&dir).map_err(domain)?;
            for index in 0..count {
                let instance_seed = bench::instance_seed(seed, n, index);
                let instance = xorsat::generate_3r3x(n, instance_seed).map_err(instance_error)?;
                let path = dir.join(format!("3r3x-n{n}-i{index}-s{instance_seed}.xor"));
                std::fs::write(&path, xorsat::serialize(&instance)).map_err(domain)?;
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Convert { instance } => {
            let inst = read_instance(&instance)?;
            let (model, _) = xorsat_to_ising(&inst);
            #[derive(Serialize)]
            struct Resolved<'a> {
                instance: &'a Path,
                spins: usize,
                output: String,
            }
            let out_name = output.as_ref().map_or("stdout".to_string(), |p| p.display().to_string());
            echo("convert", &Resolved { instance: &instance, spins: model.n(), output: out_name });
            let text = write_ising(&model);
            match output {
                Some(p) => std::fs::write(p, text).map_err(domain)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Solve { instance, solver, noise, max_steps, solver_config, defaults } => {
            let inst = read_instance(&instance)?;
            let (model, map) = xorsat_to_ising(&inst);
            let defaults = load_defaults(defaults.as_deref().or(file.solve.defaults.as_deref()))?;
            let noise = noise.or(file.solve.noise);
            if noise.is_some_and(|e| !(e >= 0.0 && e.is_finite())) {
                return Err(usage("--noise must be finite and non-negative"));
            }
            let config = match solver_config.or(file.solve.solver_config) {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
                    let c = SolverConfig::from_toml(&text).map_err(usage)?;
                    match noise {
                        Some(e) => c.with_noise(e),
                        None => c,
                    }
                }
                None => {
                    let name = solver.or(file.solve.solver).unwrap_or_else(|| "laser".to_string());
                    defaults.for_solver(&name, &model, noise.unwrap_or(0.0)).map_err(usage)?
                }
            };
            if noise.is_some_and(|e| e > 0.0) && !matches!(config, SolverConfig::Laser(_)) {
                return Err(usage("--noise applies to the laser solver only"));
            }
            config.validate().map_err(usage)?;
            if let SolverConfig::Laser(c) = &config {
                if c.noise_flagged() {
                    eprintln!("warning: noise {} is outside the studied range 0..0.07", c.noise);
                }
            }
            let max_steps = max_steps.or(file.solve.max_steps).unwrap_or_else(|| defaults.max_steps(config.noise()));
            let seed = seed.unwrap_or(0);
            #[derive(Serialize)]
            struct Resolved<'a> {
                instance: &'a Path,
                seed: u64,
                max_steps: u64,
                config: &'a SolverConfig,
            }
            echo("solve", &Resolved { instance: &instance, seed, max_steps, config: &config });

            let outcome = solve_detailed(&model, &config, seed, RunLimits::new(max_steps, 0.0)).map_err(domain)?;
            let record = &outcome.record;
            let line = serde_json::to_string(record).map_err(domain)?;
            println!("{line}");
            if record.success {
                let unsat = evaluate(&inst, &decode(&outcome.best_state, &map)).map_err(domain)?;
                println!("verified: unsat={unsat}");
                if unsat != 0 {
                    return Err(domain("decoded ground state does not satisfy the instance"));
                }
            }
            if let Some(path) = output {
                let mut f = std::fs::OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(&path)
                    .map_err(domain)?;
                writeln!(f, "{line}").map_err(domain)?;
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Bench { plan, resume, defaults } => {
            let mut p = ExperimentPlan::load(&plan).map_err(|e| match e {
                bench::BenchError::Io(io) => domain(format!("{}: {io}", plan.display())),
                other => usage(other),
            })?;
            if let Some(s) = seed {
                p.master_seed = s;
            }
            if let Some(o) = output {
                p.output = o;
            }
            let options = RunOptions {
                resume: resume || file.bench.resume.unwrap_or(false),
                threads,
                defaults: load_defaults(defaults.as_deref().or(file.bench.defaults.as_deref()))?,
            };
            echo("bench", &p);
            eprintln!("# {} runs planned, resume = {}", p.total_runs(), options.resume);
            let report = bench::run_experiment(&p, &options).map_err(|e| match e {
                bench::BenchError::PlanInvalid(_) => usage(e),
                other => domain(other),
            })?;
            eprintln!("# executed {} runs, skipped {}", report.executed, report.skipped);
            println!("{}", p.output.display());
            println!("{}", p.summary_path().display());
            Ok(ExitCode::SUCCESS)
        }

        Command::Fit { input, quantity, resamples } => {
            let quantity = match quantity.or(file.fit.quantity).unwrap_or(QuantityArg::Seconds) {
                QuantityArg::Steps => Quantity::Steps,
                QuantityArg::Seconds => Quantity::Seconds,
            };
            let resamples = resamples.or(file.fit.resamples).unwrap_or(1000);
            let seed = seed.unwrap_or(0);
            let out = output.unwrap_or_else(|| PathBuf::from("fits.toml"));
            #[derive(Serialize)]
            struct Resolved<'a> {
                input: &'a Path,
                quantity: Quantity,
                resamples: usize,
                seed: u64,
                output: &'a Path,
            }
            echo("fit", &Resolved { input: &input, quantity, resamples, seed, output: &out });
            if resamples < 2 {
                return Err(usage("--resamples must be at least 2"));
            }
            let is_csv = input.extension().is_some_and(|e| e == "csv");
            let series = if is_csv {
                let rows = bench::read_summary_csv(&input).map_err(domain)?;
                analysis::series_from_rows(&rows, quantity)
            } else {
                let records = bench::read_results(&input).map_err(domain)?;
                let summaries =
                    bench::summarize(&records, &GridSpec::Geometric { per_decade: 20 }).map_err(domain)?;
                analysis::series_from_summaries(&summaries, quantity, resamples, seed).map_err(domain)?
            };
            let report = analysis::fit_series(series, quantity, resamples, seed).map_err(domain)?;
            for s in &report.series {
                match &s.comparison {
                    Some(c) => println!(
                        "{} eta={}: k={:.4} ± {:.4} (r2 {:.4}), alpha={:.6} ± {:.6} (r2 {:.4}), preferred {}{}",
                        s.solver,
                        s.noise,
                        c.power.exponent,
                        c.power.exponent_stderr,
                        c.power.r_squared,
                        c.exponential.exponent,
                        c.exponential.exponent_stderr,
                        c.exponential.r_squared,
                        c.preferred.name(),
                        if c.indeterminate { " (indeterminate)" } else { "" }
                    ),
                    None => println!("{} eta={}: no fit ({})", s.solver, s.noise, s.note.as_deref().unwrap_or("")),
                }
            }
            std::fs::write(&out, report.to_toml()).map_err(domain)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify { instance, assignment } => {
            let inst = read_instance(&instance)?;
            #[derive(Serialize)]
            struct Resolved<'a> {
                instance: &'a Path,
                assignment: bool,
            }
            echo("verify", &Resolved { instance: &instance, assignment: assignment.is_some() });
            let assignment = match assignment {
                Some(bits) => {
                    let parsed: Option<Vec<bool>> = bits
                        .chars()
                        .map(|c| match c {
                            '0' => Some(false),
                            '1' => Some(true),
                            _ => None,
                        })
                        .collect();
                    let parsed = parsed.ok_or_else(|| usage("--assignment must contain only 0 and 1"))?;
                    if parsed.len() != inst.num_vars() {
                        return Err(usage(format!(
                            "--assignment has {} bits, instance has {} variables",
                            parsed.len(),
                            inst.num_vars()
                        )));
                    }
                    Some(parsed)
                }
                None => None,
            };
            let space = match gf2_solve(&inst) {
                Ok(space) => space,
                Err(XorSatError::Inconsistent) => {
                    println!("inconsistent");
                    return Ok(ExitCode::from(1));
                }
                Err(e) => return Err(domain(e)),
            };
            let log2_count = space.log2_solution_count();
            print!("satisfiable, rank={}, log2(solutions)={log2_count}", space.rank);
            if let Some(planted) = inst.planted() {
                print!(", unsat(planted)={}", evaluate(&inst, planted).map_err(domain)?);
            }
            println!();
            if let Some(a) = assignment {
                let unsat = evaluate(&inst, &a).map_err(instance_error)?;
                println!("unsat(assignment)={unsat}");
                if unsat > 0 {
                    return Ok(ExitCode::from(1));
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Report { fits } => {
            let text = std::fs::read_to_string(&fits).map_err(|e| domain(format!("{}: {e}", fits.display())))?;
            let report = FitReport::from_toml(&text).map_err(domain)?;
            let dir = output.unwrap_or_else(|| PathBuf::from("plots"));
            #[derive(Serialize)]
            struct Resolved<'a> {
                fits: &'a Path,
                output: &'a Path,
            }
            echo("report", &Resolved { fits: &fits, output: &dir });
            let files = analysis::emit_plot_data(&report, &dir).map_err(domain)?;
            for f in files {
                println!("{}", f.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
