//! Power-law and exponential fits by least squares in log10 space.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::rng::{stream, substream_seed};
use rand::Rng;

/// Width of the r² band inside which neither model is preferred.
pub const INDETERMINATE_BAND: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// `tts = 10^intercept · n^k`
    Power,
    /// `tts = 10^(intercept + α·n)`
    Exponential,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Power => "power",
            ModelKind::Exponential => "exponential",
        }
    }

    fn abscissa(self, n: f64) -> f64 {
        match self {
            ModelKind::Power => n.log10(),
            ModelKind::Exponential => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub model_kind: ModelKind,
    /// `k` for the power law, `α` for the exponential.
    pub exponent: f64,
    /// In log10 units.
    pub intercept: f64,
    pub exponent_stderr: f64,
    pub r_squared: f64,
    pub n_points: usize,
    /// Points dropped because their TTS was infinite.
    pub excluded: usize,
}

impl ScalingFit {
    /// Fitted TTS at size `n`.
    pub fn predict(&self, n: f64) -> f64 {
        10f64.powf(self.intercept + self.exponent * self.model_kind.abscissa(n))
    }
}

pub fn fit_power_law(points: &[(f64, f64)]) -> Result<ScalingFit, AnalysisError> {
    fit(points, ModelKind::Power)
}

pub fn fit_exponential(points: &[(f64, f64)]) -> Result<ScalingFit, AnalysisError> {
    fit(points, ModelKind::Exponential)
}

/// Ordinary least squares of `log10(tts)` on `log10(n)` (power) or `n`
/// (exponential). Infinite TTS values are skipped and counted.
pub fn fit(points: &[(f64, f64)], kind: ModelKind) -> Result<ScalingFit, AnalysisError> {
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    let mut excluded = 0;
    for &(n, tts) in points {
        if tts == f64::INFINITY {
            excluded += 1;
            continue;
        }
        if !(tts > 0.0 && tts.is_finite()) {
            return Err(AnalysisError::NonPositiveValue { n, value: tts });
        }
        if !(n > 0.0 && n.is_finite()) {
            return Err(AnalysisError::NonPositiveValue { n, value: n });
        }
        xs.push(kind.abscissa(n));
        ys.push(tts.log10());
    }
    let m = xs.len();
    if m < 3 {
        return Err(AnalysisError::InsufficientPoints { got: m, excluded });
    }
    let (slope, intercept, stderr, r2) = ols(&xs, &ys).ok_or(AnalysisError::DegenerateAbscissa)?;
    Ok(ScalingFit {
        model_kind: kind,
        exponent: slope,
        intercept,
        exponent_stderr: stderr,
        r_squared: r2,
        n_points: m,
        excluded,
    })
}

/// Slope, intercept, slope standard error and r². `None` when all x agree.
fn ols(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64, f64)> {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = if xs.len() > 2 {
        (ss_res / (m - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    let r2 = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    Some((slope, intercept, stderr, r2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelComparison {
    pub power: ScalingFit,
    pub exponential: ScalingFit,
    /// Model with the higher r².
    pub preferred: ModelKind,
    /// `|r²_exp − r²_power|`.
    pub delta_r_squared: f64,
    /// Whether the difference is inside [`INDETERMINATE_BAND`].
    pub indeterminate: bool,
}

pub fn compare_models(points: &[(f64, f64)]) -> Result<ModelComparison, AnalysisError> {
    let power = fit_power_law(points)?;
    let exponential = fit_exponential(points)?;
    let preferred = if exponential.r_squared > power.r_squared {
        ModelKind::Exponential
    } else {
        ModelKind::Power
    };
    let delta = (exponential.r_squared - power.r_squared).abs();
    Ok(ModelComparison {
        power,
        exponential,
        preferred,
        delta_r_squared: delta,
        indeterminate: delta < INDETERMINATE_BAND,
    })
}

/// 95% percentile bootstrap interval of the fitted exponent, resampling
/// points with replacement. Resamples whose sizes all coincide are redrawn.
pub fn bootstrap_ci(
    points: &[(f64, f64)],
    kind: ModelKind,
    resamples: usize,
    seed: u64,
) -> Result<(f64, f64), AnalysisError> {
    if resamples < 2 {
        return Err(AnalysisError::InsufficientResamples(resamples));
    }
    let finite: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.1 != f64::INFINITY).collect();
    fit(&finite, kind)?;
    let mut exponents: Vec<f64> = (0..resamples as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(substream_seed(seed, r));
            loop {
                let sample: Vec<(f64, f64)> =
                    (0..finite.len()).map(|_| finite[rng.random_range(0..finite.len())]).collect();
                if let Ok(f) = fit(&sample, kind) {
                    return f.exponent;
                }
            }
        })
        .collect();
    exponents.sort_by(f64::total_cmp);
    Ok((percentile(&exponents, 0.025), percentile(&exponents, 0.975)))
}

/// 95% percentile bootstrap interval of the mean of `values`.
pub fn bootstrap_mean_ci(values: &[f64], resamples: usize, seed: u64) -> Result<(f64, f64), AnalysisError> {
    if resamples < 2 {
        return Err(AnalysisError::InsufficientResamples(resamples));
    }
    if values.is_empty() {
        return Err(AnalysisError::NoData);
    }
    let mut means: Vec<f64> = (0..resamples as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(substream_seed(seed, r));
            (0..values.len()).map(|_| values[rng.random_range(0..values.len())]).sum::<f64>() / values.len() as f64
        })
        .collect();
    means.sort_by(f64::total_cmp);
    Ok((percentile(&means, 0.025), percentile(&means, 0.975)))
}

/// Linear-interpolated percentile of sorted data.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi || sorted[lo] == sorted[hi] {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}
