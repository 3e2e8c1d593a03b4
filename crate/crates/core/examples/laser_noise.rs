//! Laser dynamics at several noise amplitudes on one 32-spin instance:
//! success counts and the median step of solution.

use r3x::ising::xorsat_to_ising;
use r3x::solvers::{solve, RunLimits, SolverDefaults};
use r3x::xorsat::generate_3r3x;

fn main() {
    let defaults = SolverDefaults::default();
    let inst = generate_3r3x(32, 5).unwrap();
    let (model, _) = xorsat_to_ising(&inst);
    let cap = defaults.max_steps(0.0);

    for eta in [0.0, 0.01, 0.03, 0.05, 0.07] {
        let config = defaults.for_solver("laser", &model, eta).unwrap();
        let mut steps: Vec<f64> = (0..10)
            .map(|seed| {
                let r = solve(&model, &config, seed, RunLimits::new(cap, 0.0)).unwrap();
                r.step_of_solution.map_or(f64::INFINITY, |s| s as f64)
            })
            .collect();
        steps.sort_by(f64::total_cmp);
        let solved = steps.iter().filter(|s| s.is_finite()).count();
        println!("eta {eta:.2}: {solved}/10 solved, median step {}", steps[steps.len() / 2]);
    }
}
