use proptest::prelude::*;

use r3x::analysis::{bootstrap_ci, fit, ModelKind};
use r3x::bench::{estimate_success, tts_single};
use r3x::ising::{encode, optimal_ancilla, parse_ising, write_ising, xorsat_to_ising};
use r3x::solvers::{solve, solve_detailed, RunLimits, RunRecord, SolverDefaults, StepUnit};
use r3x::xorsat::{self, evaluate, generate_3r3x, gf2_solve};
use r3x::SpinState;

fn even_size() -> impl Strategy<Value = usize> {
    (4usize..40).prop_map(|h| 2 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instance_text_roundtrip(n in even_size(), seed in any::<u64>()) {
        let inst = generate_3r3x(n, seed).unwrap();
        let back = xorsat::parse(&xorsat::serialize(&inst)).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert!(inst.degrees().iter().all(|&d| d == 3));
        prop_assert_eq!(evaluate(&inst, inst.planted().unwrap()).unwrap(), 0);
    }

    #[test]
    fn oracle_solution_satisfies(n in even_size(), seed in any::<u64>()) {
        let inst = generate_3r3x(n, seed).unwrap();
        let space = gf2_solve(&inst).unwrap();
        prop_assert_eq!(evaluate(&inst, &space.particular).unwrap(), 0);
        prop_assert!(space.contains(inst.planted().unwrap()));
    }

    #[test]
    fn energy_with_optimal_ancillas_counts_violations(
        n in even_size(),
        seed in any::<u64>(),
        bits in prop::collection::vec(any::<bool>(), 40),
    ) {
        let inst = generate_3r3x(n, seed).unwrap();
        let (model, map) = xorsat_to_ising(&inst);
        let assignment = &bits[..inst.num_vars()];
        let state = encode(&inst, &map, assignment);
        let unsat = evaluate(&inst, assignment).unwrap() as f64;
        prop_assert!((model.energy(&state).unwrap() - unsat).abs() < 1e-9);
        // any other ancilla choice is no better
        for (c, clause) in inst.clauses().iter().enumerate() {
            let v = clause.vars.map(|i| assignment[i]);
            let mut flipped = state.clone();
            flipped.flip(map.ancilla_spin[c]);
            prop_assert!(model.energy(&flipped).unwrap() >= unsat - 1e-9, "{:?} {}", v, optimal_ancilla(v, clause.parity));
        }
    }

    #[test]
    fn ising_text_roundtrip(n in even_size(), seed in any::<u64>(), mask in any::<u64>()) {
        let (model, _) = xorsat_to_ising(&generate_3r3x(n, seed).unwrap());
        let back = parse_ising(&write_ising(&model)).unwrap();
        let s = SpinState::from_mask(model.n(), mask);
        prop_assert!((back.energy(&s).unwrap() - model.energy(&s).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn tts_monotone(t in 1.0f64..1e6, p in 0.001f64..0.98, dp in 0.0f64..0.5, scale in 1.0f64..10.0) {
        let p2 = (p + dp).min(1.0);
        prop_assert!(tts_single(t, p2).unwrap() <= tts_single(t, p).unwrap());
        prop_assert!(tts_single(t * scale, p).unwrap() >= tts_single(t, p).unwrap());
        prop_assert!(tts_single(t, p).unwrap() >= t);
    }

    #[test]
    fn success_estimate_monotone(
        steps in prop::collection::vec(prop::option::of(1u64..1000), 1..40),
        t in 1.0f64..1000.0,
        dt in 0.0f64..500.0,
    ) {
        let records: Vec<RunRecord> = steps
            .iter()
            .map(|s| RunRecord {
                instance_label: String::new(),
                solver_id: "sa".into(),
                seed: 0,
                steps_executed: s.unwrap_or(1000),
                success: s.is_some(),
                best_energy: if s.is_some() { 0.0 } else { 1.0 },
                step_of_solution: *s,
                wall_time: 0.0,
                step_unit: StepUnit::SaSweep,
            })
            .collect();
        let a = estimate_success(&records, t).unwrap();
        let b = estimate_success(&records, t + dt).unwrap();
        prop_assert!((0.0..=1.0).contains(&a) && a <= b);
    }

    #[test]
    fn fit_exponent_invariant_under_scaling(
        tts in prop::collection::vec(1.0f64..1e6, 4..12),
        c in 1e-3f64..1e3,
    ) {
        let pts: Vec<(f64, f64)> = tts.iter().enumerate().map(|(i, &t)| (16.0 * (i + 1) as f64, t)).collect();
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(n, t)| (n, t * c)).collect();
        for kind in [ModelKind::Power, ModelKind::Exponential] {
            let a = fit(&pts, kind).unwrap();
            let b = fit(&scaled, kind).unwrap();
            prop_assert!((a.exponent - b.exponent).abs() < 1e-9 * (1.0 + a.exponent.abs()));
            prop_assert!((a.r_squared - b.r_squared).abs() < 1e-9);
        }
    }

    #[test]
    fn bootstrap_interval_ordered_and_reproducible(
        tts in prop::collection::vec(1.0f64..1e6, 4..12),
        seed in any::<u64>(),
    ) {
        let pts: Vec<(f64, f64)> = tts.iter().enumerate().map(|(i, &t)| (16.0 * (i + 1) as f64, t)).collect();
        let (lo, hi) = bootstrap_ci(&pts, ModelKind::Power, 200, seed).unwrap();
        prop_assert!(lo <= hi);
        prop_assert_eq!(bootstrap_ci(&pts, ModelKind::Power, 200, seed).unwrap(), (lo, hi));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn best_energy_never_increases(solver in prop::sample::select(vec!["laser", "sa", "tabu", "pt"]), seed in any::<u64>()) {
        let (model, _) = xorsat_to_ising(&generate_3r3x(24, seed).unwrap());
        let config = SolverDefaults::default().for_solver(solver, &model, 0.03 * f64::from(u8::from(solver == "laser"))).unwrap();
        let out = solve_detailed(&model, &config, seed, RunLimits::new(3000, 0.0)).unwrap();
        for w in out.checkpoints.windows(2) {
            prop_assert!(w[0].0 <= w[1].0 && w[1].1 < w[0].1);
        }
        prop_assert_eq!(out.checkpoints.last().unwrap().1, out.record.best_energy);
        prop_assert!((model.energy(&out.best_state).unwrap() - out.record.best_energy).abs() < 1e-9);
        prop_assert_eq!(out.record.success, out.record.best_energy <= 0.0);
    }

    #[test]
    fn runs_are_deterministic(solver in prop::sample::select(vec!["laser", "sa", "tabu", "pt"]), seed in any::<u64>()) {
        let (model, _) = xorsat_to_ising(&generate_3r3x(16, seed ^ 1).unwrap());
        let config = SolverDefaults::default().for_solver(solver, &model, 0.0).unwrap();
        let a = solve(&model, &config, seed, RunLimits::new(2000, 0.0)).unwrap();
        let b = solve(&model, &config, seed, RunLimits::new(2000, 0.0)).unwrap();
        prop_assert!(a.same_outcome(&b));
    }
}
