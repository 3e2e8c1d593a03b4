//! Scaling fits of TTS against problem size and plot-ready output.
//!
//! Fits are ordinary least squares in log10 space. Points with infinite TTS
//! are left out and counted. Uncertainties come both from the fit's standard
//! error and from a percentile bootstrap over points.

mod fit;
mod plot;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fit::{
    bootstrap_ci, bootstrap_mean_ci, compare_models, fit, fit_exponential, fit_power_law, ModelComparison, ModelKind,
    ScalingFit, INDETERMINATE_BAND,
};
pub use plot::{emit_plot_data, read_series_csv, series_file_name, REFERENCE_LINES};

use crate::bench::{Summary, SummaryRow};

/// Description written alongside every fit.
pub const FIT_METHOD: &str = "ordinary least squares of log10(tts) on log10(n) (power) or n (exponential); \
infinite tts excluded; 95% percentile bootstrap over points";

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("need at least 3 finite points, got {got} ({excluded} infinite excluded)")]
    InsufficientPoints { got: usize, excluded: usize },
    #[error("non-positive or non-finite value {value} at n = {n}")]
    NonPositiveValue { n: f64, value: f64 },
    #[error("all points share the same size")]
    DegenerateAbscissa,
    #[error("bootstrap needs at least 2 resamples, got {0}")]
    InsufficientResamples(usize),
    #[error("no data")]
    NoData,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(String),
    #[error("fits file: {0}")]
    Format(String),
}

/// Which TTS column a series uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Steps,
    Seconds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub n: f64,
    pub tts: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// TTS against size for one (solver, noise) pair, with fits when there are
/// enough finite points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesFit {
    pub solver: String,
    pub noise: f64,
    pub points: Vec<SeriesPoint>,
    pub comparison: Option<ModelComparison>,
    pub power_ci: Option<(f64, f64)>,
    pub exponential_ci: Option<(f64, f64)>,
    /// Why fits are missing, if they are.
    pub note: Option<String>,
}

impl SeriesFit {
    pub fn fit_for(&self, kind: ModelKind) -> Option<&ScalingFit> {
        self.comparison.as_ref().map(|c| match kind {
            ModelKind::Power => &c.power,
            ModelKind::Exponential => &c.exponential,
        })
    }
}

/// Contents of a fits file. Stored as TOML, which keeps infinite TTS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub method: String,
    pub quantity: Quantity,
    pub resamples: usize,
    pub seed: u64,
    pub series: Vec<SeriesFit>,
}

impl FitReport {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("fit reports serialize")
    }

    pub fn from_toml(text: &str) -> Result<Self, AnalysisError> {
        toml::from_str(text).map_err(|e| AnalysisError::Format(e.to_string()))
    }
}

/// Series from full summaries. Each point's interval is a bootstrap over
/// instances of the mean TTS at the optimal cutoff.
pub fn series_from_summaries(
    summaries: &[Summary],
    quantity: Quantity,
    resamples: usize,
    seed: u64,
) -> Result<Vec<(String, f64, Vec<SeriesPoint>)>, AnalysisError> {
    let mut out: Vec<(String, f64, Vec<SeriesPoint>)> = Vec::new();
    for s in summaries {
        let scale = match quantity {
            Quantity::Steps => 1.0,
            Quantity::Seconds => s.seconds_per_step,
        };
        let tts = s.row.tts_steps * scale;
        let (ci_low, ci_high) = match s.curve.instance_tts_at_optimum() {
            Some(values) => {
                let (lo, hi) = bootstrap_mean_ci(values, resamples, seed)?;
                (lo * scale, hi * scale)
            }
            None => (f64::INFINITY, f64::INFINITY),
        };
        push_point(&mut out, &s.row, SeriesPoint { n: s.row.n as f64, tts, ci_low, ci_high });
    }
    Ok(out)
}

/// Series from summary rows alone; intervals collapse to the point.
pub fn series_from_rows(rows: &[SummaryRow], quantity: Quantity) -> Vec<(String, f64, Vec<SeriesPoint>)> {
    let mut out = Vec::new();
    for row in rows {
        let tts = match quantity {
            Quantity::Steps => row.tts_steps,
            Quantity::Seconds => row.tts_seconds,
        };
        push_point(&mut out, row, SeriesPoint { n: row.n as f64, tts, ci_low: tts, ci_high: tts });
    }
    out
}

fn push_point(out: &mut Vec<(String, f64, Vec<SeriesPoint>)>, row: &SummaryRow, point: SeriesPoint) {
    match out.iter_mut().find(|(s, e, _)| *s == row.solver && e.to_bits() == row.noise.to_bits()) {
        Some((_, _, pts)) => pts.push(point),
        None => out.push((row.solver.clone(), row.noise, vec![point])),
    }
}

/// Fit both models to every series.
pub fn fit_series(
    series: Vec<(String, f64, Vec<SeriesPoint>)>,
    quantity: Quantity,
    resamples: usize,
    seed: u64,
) -> Result<FitReport, AnalysisError> {
    if series.is_empty() {
        return Err(AnalysisError::NoData);
    }
    let series = series
        .into_iter()
        .map(|(solver, noise, mut points)| {
            points.sort_by(|a, b| a.n.total_cmp(&b.n));
            let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.n, p.tts)).collect();
            let (comparison, power_ci, exponential_ci, note) = match compare_models(&xy) {
                Ok(c) => (
                    Some(c),
                    bootstrap_ci(&xy, ModelKind::Power, resamples, seed).ok(),
                    bootstrap_ci(&xy, ModelKind::Exponential, resamples, seed).ok(),
                    None,
                ),
                Err(e) => (None, None, None, Some(e.to_string())),
            };
            SeriesFit {
                solver,
                noise,
                points,
                comparison,
                power_ci,
                exponential_ci,
                note,
            }
        })
        .collect();
    Ok(FitReport {
        method: FIT_METHOD.to_string(),
        quantity,
        resamples,
        seed,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_roundtrips_with_infinite_points() {
        let pts = |k: f64| {
            vec![
                SeriesPoint { n: 32.0, tts: 10.0 * k, ci_low: 9.0, ci_high: 11.5 },
                SeriesPoint { n: 64.0, tts: 90.0 * k, ci_low: 80.0, ci_high: 100.0 },
                SeriesPoint { n: 128.0, tts: 1000.0 * k, ci_low: 900.0, ci_high: 1200.0 },
                SeriesPoint { n: 256.0, tts: f64::INFINITY, ci_low: f64::INFINITY, ci_high: f64::INFINITY },
            ]
        };
        let rep = fit_series(
            vec![("sa".into(), 0.0, pts(1.0)), ("laser".into(), 0.03, pts(2.0)), ("pt".into(), 0.0, vec![])],
            Quantity::Steps,
            30,
            5,
        )
        .unwrap();
        assert!(rep.series[2].note.is_some());
        assert_eq!(rep.series[0].comparison.as_ref().unwrap().power.excluded, 1);
        assert_eq!(FitReport::from_toml(&rep.to_toml()).unwrap(), rep);
    }
}
