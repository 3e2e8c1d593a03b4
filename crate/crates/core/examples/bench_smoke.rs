//! Run the bundled smoke plan and print the summary table.
//!
//! ```text
//! cargo run --release --example bench_smoke -- results/smoke.jsonl
//! ```

use r3x::bench::{run_experiment, ExperimentPlan, RunOptions, SMOKE_PLAN};

fn main() {
    let mut plan = ExperimentPlan::from_toml(SMOKE_PLAN).unwrap();
    plan.output = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("r3x-smoke/smoke.jsonl"), Into::into);

    let report = run_experiment(&plan, &RunOptions::default()).expect("smoke plan runs");
    println!("{} runs written to {}", report.executed, plan.output.display());
    println!("{:>6} {:>5} {:>5} {:>10} {:>12} {:>6}", "solver", "n", "eta", "t_f*", "TTS", "p");
    for s in &report.summaries {
        let r = &s.row;
        println!(
            "{:>6} {:>5} {:>5} {:>10.0} {:>12.0} {:>6.2}",
            r.solver, r.n, r.noise, r.tf_star, r.tts_steps, r.mean_p
        );
    }
}

