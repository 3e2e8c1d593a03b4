//! Calibrate the laser coupling strength per size and print a table that can
//! be pasted under `[laser.coupling_by_n]` in `defaults/solvers.toml`.
//!
//! ```text
//! cargo run --release --example calibrate_laser -- 16 32 64
//! ```

use r3x::bench::{calibrate_coupling, CalibrationOptions};

fn main() {
    let sizes: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("sizes are spin counts"))
        .collect();
    let sizes = if sizes.is_empty() { vec![16, 32, 64] } else { sizes };

    let mut table = Vec::new();
    for n in sizes {
        let cal = calibrate_coupling(&CalibrationOptions::new(n)).expect("calibration runs");
        eprintln!("n = {n}");
        for p in &cal.evaluated {
            eprintln!(
                "  coupling {:.4}  success {:.3}  mean best {:.3}  median step {:?}",
                p.coupling, p.success_rate, p.mean_best_energy, p.median_step
            );
        }
        table.push((n, cal.best.coupling));
    }
    println!("[laser.coupling_by_n]");
    for (n, k) in table {
        println!("\"{n}\" = {k:.4}");
    }
}
