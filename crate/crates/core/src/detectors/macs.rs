use serde::{Deserialize, Serialize};

use super::{apply_filter, filter_threshold, Diagnostics, Verdicts};
use crate::bounds::band_from_stats;
use crate::error::{Error, Result};
use crate::model::{AttentionWeights, ConfidenceBand, RunConfig, ScoreSeries, Windows};
use crate::stats::RollingStats;

const MEAN_SHIFT_LIMIT: f64 = 2.0;
const STD_SHIFT_LIMIT: f64 = 1.5;
const SHIFT_EPS: f64 = 1e-8;

/// Per-point MACS diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacsPoint {
    /// Short, medium and long bands; `None` while a scale has fewer than two points.
    pub scale_bands: [Option<ConfidenceBand>; 3],
    pub weights: AttentionWeights,
    pub combined: Option<ConfidenceBand>,
    pub violations: u8,
    pub attention_anomaly: bool,
    pub regime: bool,
    pub raw: bool,
}

/// Rolling state of the multi-scale detector.
///
/// Scale bands at step `t` cover the trailing `min(w, t)` scores before `t`.
/// Regime detection compares the short window ending at `t` against the long
/// window ending `short` steps earlier, and stays off until `t >= long + short`.
#[derive(Debug, Clone)]
pub struct MacsState {
    windows: Windows,
    confidence_level: f64,
    violation_threshold: usize,
    scales: [RollingStats; 3],
    current: RollingStats,
    history: RollingStats,
    t: usize,
}

impl MacsState {
    pub fn new(config: &RunConfig) -> Self {
        let w = config.windows;
        Self {
            windows: w,
            confidence_level: config.confidence_level,
            violation_threshold: config.violation_threshold,
            scales: w.as_array().map(RollingStats::new),
            current: RollingStats::new(w.short),
            history: RollingStats::new(w.long),
            t: 0,
        }
    }

    /// Consumes the next score with its normalised local variance.
    pub fn step(&mut self, score: f64, local_variance: f64) -> MacsPoint {
        let weights = AttentionWeights::for_local_variance(local_variance);

        let scale_bands = [0, 1, 2].map(|i| {
            let s = &self.scales[i];
            (s.len() >= 2).then(|| band_from_stats(s.mean(), s.std(), self.confidence_level))
        });

        let mut violations = 0u8;
        let (mut center, mut width, mut total) = (0.0, 0.0, 0.0);
        for (band, w) in scale_bands.iter().zip(weights.as_array()) {
            if let Some(b) = band {
                violations += u8::from(b.violated_by(score));
                center += w * b.center();
                width += w * b.width;
                total += w;
            }
        }
        let combined = (total > 0.0).then(|| ConfidenceBand::around(center / total, width / total));
        let attention_anomaly = combined.is_some_and(|b| b.violated_by(score));

        if let Some(old) = self.current.push(score) {
            self.history.push(old);
        }
        let regime = self.t >= self.windows.long + self.windows.short && self.regime_shift();

        let raw = if regime {
            usize::from(violations) >= self.violation_threshold && attention_anomaly
        } else {
            attention_anomaly
        };

        for s in &mut self.scales {
            s.push(score);
        }
        self.t += 1;

        MacsPoint {
            scale_bands,
            weights,
            combined,
            violations,
            attention_anomaly,
            regime,
            raw,
        }
    }

    fn regime_shift(&self) -> bool {
        let hist_std = self.history.std();
        let mean_change = (self.current.mean() - self.history.mean()) / (hist_std + SHIFT_EPS);
        let std_change = (self.current.std() - hist_std) / (hist_std + SHIFT_EPS);
        mean_change.abs() > MEAN_SHIFT_LIMIT || std_change.abs() > STD_SHIFT_LIMIT
    }
}

/// Rolling sample variance over `min(short, n / 10)` points ending at each
/// index, min-max normalised over the series. A flat profile maps to zero.
pub fn local_variance_profile(scores: &[f64], short: usize) -> Vec<f64> {
    let window = short.min(scores.len() / 10).max(1);
    let mut rolling = RollingStats::new(window);
    let raw: Vec<f64> = scores
        .iter()
        .map(|&s| {
            rolling.push(s);
            rolling.variance()
        })
        .collect();
    let lo = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    if span <= 0.0 {
        return vec![0.0; raw.len()];
    }
    raw.iter()
        .map(|v| ((v - lo) / span).clamp(0.0, 1.0))
        .collect()
}

/// Runs MACS over the whole series in one pass.
pub fn macs_detect(scores: &ScoreSeries, config: &RunConfig) -> Result<Verdicts> {
    config.validate()?;
    let values = scores.scores();
    if values.len() < 2 {
        return Err(Error::SeriesTooShort {
            min: 2,
            len: values.len(),
        });
    }
    let variance = local_variance_profile(values, config.windows.short);
    let mut state = MacsState::new(config);
    let points: Vec<MacsPoint> = values
        .iter()
        .zip(&variance)
        .map(|(&s, &v)| state.step(s, v))
        .collect();

    let threshold = filter_threshold(values, config.filter_percentile)?;
    Ok(Verdicts::compose(
        points.iter().map(|p| p.raw).collect(),
        apply_filter(values, threshold),
        points.iter().map(|p| p.combined).collect(),
        threshold,
        Diagnostics::Macs { points },
    ))
}
