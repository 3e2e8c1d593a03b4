//! Fit power-law and exponential models to synthetic TTS series and write
//! plot files.
//!
//! ```text
//! cargo run --release --example fit_plot -- plots
//! ```

use r3x::analysis::{emit_plot_data, fit_series, Quantity, SeriesPoint};
use r3x::rng::stream;
use rand_distr::{Distribution, Normal};

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "plots".into());
    let mut rng = stream(3);
    let noise = Normal::new(0.0, 0.1).unwrap();
    let sizes = [32.0, 64.0, 128.0, 256.0, 512.0, 1024.0];

    let mut series = Vec::new();
    for (name, law) in [
        ("power", Box::new(|n: f64| 0.5 * n.powf(2.31)) as Box<dyn Fn(f64) -> f64>),
        ("exponential", Box::new(|n: f64| 10f64.powf(1.0 + 0.01 * n))),
    ] {
        let points = sizes
            .iter()
            .map(|&n| {
                let t = law(n) * (1.0 + noise.sample(&mut rng));
                SeriesPoint { n, tts: t, ci_low: t * 0.8, ci_high: t * 1.25 }
            })
            .collect();
        series.push((name.to_string(), 0.0, points));
    }

    let report = fit_series(series, Quantity::Steps, 500, 1).unwrap();
    for s in &report.series {
        let c = s.comparison.as_ref().unwrap();
        println!(
            "{}: k = {:.3} {:?}, alpha = {:.5} {:?}, preferred {}{}",
            s.solver,
            c.power.exponent,
            s.power_ci,
            c.exponential.exponent,
            s.exponential_ci,
            c.preferred.name(),
            if c.indeterminate { " (indeterminate)" } else { "" }
        );
    }
    for f in emit_plot_data(&report, std::path::Path::new(&out)).unwrap() {
        println!("wrote {}", f.display());
    }
}
