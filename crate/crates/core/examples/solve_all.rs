//! Run every solver on the same instance with shared seeds and print the
//! per-run records.
//!
//! ```text
//! cargo run --release --example solve_all -- 32
//! ```

use r3x::ising::{decode, xorsat_to_ising};
use r3x::solvers::{solve_detailed, RunLimits, SolverDefaults};
use r3x::xorsat::{evaluate, generate_3r3x};

fn main() {
    let n: usize = std::env::args().nth(1).map_or(32, |a| a.parse().expect("spin count"));
    let inst = generate_3r3x(n, 12).unwrap();
    let (model, map) = xorsat_to_ising(&inst);
    let defaults = SolverDefaults::default();

    for name in ["laser", "sa", "tabu", "pt"] {
        let config = defaults.for_solver(name, &model, 0.0).unwrap();
        let mut solved = 0;
        for seed in 0..5 {
            let out = solve_detailed(&model, &config, seed, RunLimits::new(defaults.max_steps(0.0), 0.0)).unwrap();
            let r = &out.record;
            if r.success {
                solved += 1;
                assert_eq!(evaluate(&inst, &decode(&out.best_state, &map)).unwrap(), 0);
            }
            println!(
                "{name:>5} seed {seed}: best {:>4} after {:>6} {:?} in {:.3}s{}",
                r.best_energy,
                r.steps_executed,
                r.step_unit,
                r.wall_time,
                r.step_of_solution.map_or(String::new(), |s| format!(", solved at {s}"))
            );
        }
        println!("{name}: {solved}/5 solved\n");
    }
}
