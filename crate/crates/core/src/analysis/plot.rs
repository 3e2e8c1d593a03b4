//! Plot-ready CSV files and a gnuplot script.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{AnalysisError, FitReport, ModelKind, Quantity, SeriesFit, SeriesPoint};

/// Published scaling constants drawn as labelled literature lines: the
/// laser-platform power `k` and the range of exponential prefactors `α`.
pub const REFERENCE_LINES: [(&str, ModelKind, f64); 3] = [
    ("literature k=2.31", ModelKind::Power, 2.31),
    ("literature alpha=0.0171", ModelKind::Exponential, 0.0171),
    ("literature alpha=0.08", ModelKind::Exponential, 0.08),
];

const CURVE_SAMPLES: usize = 50;

pub fn series_file_name(solver: &str, noise: f64) -> String {
    format!("series_{}.csv", tag(solver, noise))
}

fn fit_file_name(solver: &str, noise: f64) -> String {
    format!("fit_{}.csv", tag(solver, noise))
}

fn tag(solver: &str, noise: f64) -> String {
    format!("{solver}_eta{}", noise.to_string().replace('.', "p"))
}

/// Write one series file and one fitted-curve file per series, the
/// literature reference lines and `plot.gp`. Returns the files written.
pub fn emit_plot_data(report: &FitReport, out_dir: &Path) -> Result<Vec<PathBuf>, AnalysisError> {
    if report.series.is_empty() || report.series.iter().all(|s| s.points.is_empty()) {
        return Err(AnalysisError::NoData);
    }
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    for s in &report.series {
        let path = out_dir.join(series_file_name(&s.solver, s.noise));
        let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
        for p in &s.points {
            w.serialize(p).map_err(csv_err)?;
        }
        if s.points.is_empty() {
            w.write_record(["n", "tts", "ci_low", "ci_high"]).map_err(csv_err)?;
        }
        w.flush()?;
        written.push(path);

        let path = out_dir.join(fit_file_name(&s.solver, s.noise));
        let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
        w.write_record(["model", "n", "tts"]).map_err(csv_err)?;
        if let Some((lo, hi)) = n_range(std::slice::from_ref(s)) {
            for kind in [ModelKind::Power, ModelKind::Exponential] {
                if let Some(f) = s.fit_for(kind) {
                    for n in log_samples(lo, hi) {
                        w.write_record([kind.name().to_string(), n.to_string(), f.predict(n).to_string()])
                            .map_err(csv_err)?;
                    }
                }
            }
        }
        w.flush()?;
        written.push(path);
    }

    let path = out_dir.join("reference_lines.csv");
    let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
    w.write_record(["label", "model", "exponent", "n", "tts"]).map_err(csv_err)?;
    if let (Some((lo, hi)), Some(anchor)) = (n_range(&report.series), anchor(&report.series)) {
        for (label, kind, exponent) in REFERENCE_LINES {
            for n in log_samples(lo, hi) {
                let tts = match kind {
                    ModelKind::Power => anchor.tts * (n / anchor.n).powf(exponent),
                    ModelKind::Exponential => anchor.tts * 10f64.powf(exponent * (n - anchor.n)),
                };
                w.write_record([label.to_string(), kind.name().to_string(), exponent.to_string(), n.to_string(), tts.to_string()])
                    .map_err(csv_err)?;
            }
        }
    }
    w.flush()?;
    written.push(path);

    let path = out_dir.join("plot.gp");
    std::fs::write(&path, gnuplot_script(report))?;
    written.push(path);
    Ok(written)
}

/// Re-read a series file written by [`emit_plot_data`].
pub fn read_series_csv(path: &Path) -> Result<Vec<SeriesPoint>, AnalysisError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().map(|p| p.map_err(csv_err)).collect()
}

fn csv_err(e: csv::Error) -> AnalysisError {
    AnalysisError::Csv(e.to_string())
}

fn n_range(series: &[SeriesFit]) -> Option<(f64, f64)> {
    let ns = series.iter().flat_map(|s| s.points.iter().map(|p| p.n));
    let lo = ns.clone().fold(f64::INFINITY, f64::min);
    let hi = ns.fold(f64::NEG_INFINITY, f64::max);
    (lo <= hi).then_some((lo, hi))
}

/// First finite point of the first series that has one.
fn anchor(series: &[SeriesFit]) -> Option<&SeriesPoint> {
    series.iter().flat_map(|s| s.points.iter()).find(|p| p.tts.is_finite())
}

fn log_samples(lo: f64, hi: f64) -> Vec<f64> {
    if lo == hi {
        return vec![lo];
    }
    (0..CURVE_SAMPLES)
        .map(|i| lo * (hi / lo).powf(i as f64 / (CURVE_SAMPLES - 1) as f64))
        .collect()
}

fn gnuplot_script(report: &FitReport) -> String {
    let unit = match report.quantity {
        Quantity::Steps => "steps",
        Quantity::Seconds => "seconds",
    };
    let mut s = String::new();
    let _ = writeln!(s, "# Fit method: {}", report.method);
    let _ = writeln!(s, "# Reference lines are literature values, anchored at the first measured point.");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set logscale y");
    let _ = writeln!(s, "set xlabel 'n'");
    let _ = writeln!(s, "set ylabel 'TTS ({unit})'");
    let _ = writeln!(s, "set terminal pngcairo size 1000,700");

    let noise_free: Vec<&SeriesFit> = report.series.iter().filter(|s| s.noise == 0.0).collect();
    let noisy: Vec<&SeriesFit> = report.series.iter().filter(|s| s.solver == "laser").collect();

    let _ = writeln!(s, "\nset output 'tts_by_solver.png'");
    let mut parts = Vec::new();
    for sf in &noise_free {
        parts.push(format!(
            "'{}' using 1:2:3:4 with yerrorlines title '{}'",
            series_file_name(&sf.solver, sf.noise),
            sf.solver
        ));
        for kind in [ModelKind::Power, ModelKind::Exponential] {
            if sf.fit_for(kind).is_some() {
                parts.push(format!(
                    "'{}' using (strcol(1) eq '{}' ? $2 : NaN):3 with lines dashtype 2 title '{} {} fit'",
                    fit_file_name(&sf.solver, sf.noise),
                    kind.name(),
                    sf.solver,
                    kind.name()
                ));
            }
        }
    }
    for (label, _, _) in REFERENCE_LINES {
        parts.push(format!(
            "'reference_lines.csv' using (strcol(1) eq '{label}' ? $4 : NaN):5 with lines dashtype 3 title '{label}'"
        ));
    }
    let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));

    if noisy.len() > 1 {
        let _ = writeln!(s, "\nset output 'tts_by_noise.png'");
        let parts: Vec<String> = noisy
            .iter()
            .map(|sf| {
                format!(
                    "'{}' using 1:2:3:4 with yerrorlines title 'eta = {}'",
                    series_file_name(&sf.solver, sf.noise),
                    sf.noise
                )
            })
            .collect();
        let _ = writeln!(s, "plot {}", parts.join(", \\\n     "));
    }
    s
}
