//! Shared domain types.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scoring::ScorerSpec;
use crate::stats;

/// One raw observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSample {
    pub index: usize,
    pub timestamp: Option<String>,
    pub value: f64,
}

/// A densely indexed univariate series with finite values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Series {
    samples: Vec<SeriesSample>,
}

impl Series {
    /// Builds a series from plain values; indices are assigned `0..n`.
    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Result<Self> {
        Self::from_pairs(values.into_iter().map(|v| (None, v)))
    }

    pub fn from_pairs(rows: impl IntoIterator<Item = (Option<String>, f64)>) -> Result<Self> {
        let mut samples = Vec::new();
        for (index, (timestamp, value)) in rows.into_iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::config(format!("non-finite value at index {index}")));
            }
            samples.push(SeriesSample {
                index,
                timestamp,
                value,
            });
        }
        Ok(Self { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[SeriesSample] {
        &self.samples
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.value).collect()
    }

    /// Chronological prefix/suffix split at `at`; indices of the suffix restart at 0.
    pub(crate) fn split_at(&self, at: usize) -> (Series, Series) {
        let reindex = |part: &[SeriesSample]| Series {
            samples: part
                .iter()
                .enumerate()
                .map(|(i, s)| SeriesSample {
                    index: i,
                    timestamp: s.timestamp.clone(),
                    value: s.value,
                })
                .collect(),
        };
        (reindex(&self.samples[..at]), reindex(&self.samples[at..]))
    }
}

/// Anomaly scores, index-aligned with the series they were computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreSeries {
    scores: Vec<f64>,
    scorer_id: String,
}

impl ScoreSeries {
    pub fn new(scores: Vec<f64>, scorer_id: impl Into<String>) -> Result<Self> {
        if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
            return Err(Error::config(format!("non-finite score at index {i}")));
        }
        Ok(Self {
            scores,
            scorer_id: scorer_id.into(),
        })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn scorer_id(&self) -> &str {
        &self.scorer_id
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Ground-truth flags; `true` marks an anomalous index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSeries(pub Vec<bool>);

impl LabelSeries {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn anomalies(&self) -> usize {
        self.0.iter().filter(|&&l| l).count()
    }
}

/// Symmetric band `center ± width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceBand {
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
}

impl ConfidenceBand {
    pub fn around(center: f64, width: f64) -> Self {
        debug_assert!(width >= 0.0);
        Self {
            lower: center - width,
            upper: center + width,
            width,
        }
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    /// Strictly outside the band.
    pub fn violated_by(&self, x: f64) -> bool {
        x < self.lower || x > self.upper
    }
}

/// A contiguous half-open range `[start, end)` of a score series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub mean: f64,
    pub std: f64,
    pub band: ConfidenceBand,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    pub fn contains(&self, index: usize) -> bool {
        (self.start..self.end).contains(&index)
    }
}

/// Convex weights over the short, medium and long scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttentionWeights {
    pub short: f64,
    pub medium: f64,
    pub long: f64,
}

impl AttentionWeights {
    pub const HIGH_VARIANCE: Self = Self {
        short: 0.6,
        medium: 0.3,
        long: 0.1,
    };
    pub const MEDIUM_VARIANCE: Self = Self {
        short: 0.2,
        medium: 0.6,
        long: 0.2,
    };
    pub const LOW_VARIANCE: Self = Self {
        short: 0.1,
        medium: 0.3,
        long: 0.6,
    };

    /// Weight table keyed by normalised local variance in `[0, 1]`.
    pub fn for_local_variance(normalized: f64) -> Self {
        if normalized > 0.7 {
            Self::HIGH_VARIANCE
        } else if normalized > 0.3 {
            Self::MEDIUM_VARIANCE
        } else {
            Self::LOW_VARIANCE
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.short, self.medium, self.long]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fp: u64, tn: u64, fn_: u64) -> Self {
        Self { tp, fp, tn, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentationMethod {
    Apca,
    Kmeans,
}

/// Short, medium and long rolling-window lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Windows {
    pub short: usize,
    pub medium: usize,
    pub long: usize,
}

impl Default for Windows {
    fn default() -> Self {
        Self {
            short: 50,
            medium: 100,
            long: 500,
        }
    }
}

impl Windows {
    pub fn as_array(&self) -> [usize; 3] {
        [self.short, self.medium, self.long]
    }
}

/// Every tunable of the detectors and the evaluation harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// In (0, 1); 0.99 and 0.95 are the usual settings.
    pub confidence_level: f64,
    pub segmentation_method: SegmentationMethod,
    /// Number of K-means clusters.
    pub n_segments: usize,
    pub min_segment_length: usize,
    pub windows: Windows,
    /// `None` disables the percentile filter.
    pub filter_percentile: Option<f64>,
    pub baseline_percentile: f64,
    pub scorer: ScorerSpec,
    pub seed: u64,
    /// Scale violations required by the regime-gated rule.
    pub violation_threshold: usize,
    /// K-means sliding window; derived from the series length when absent.
    pub kmeans_window: Option<usize>,
    pub kmeans_stride: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            confidence_level: 0.99,
            segmentation_method: SegmentationMethod::Apca,
            n_segments: 5,
            min_segment_length: 10,
            windows: Windows::default(),
            filter_percentile: None,
            baseline_percentile: 0.99,
            scorer: ScorerSpec::default(),
            seed: 0,
            violation_threshold: 2,
            kmeans_window: None,
            kmeans_stride: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |x: f64| x > 0.0 && x < 1.0;
        if !open_unit(self.confidence_level) {
            return Err(Error::config("confidence out of range"));
        }
        if !open_unit(self.baseline_percentile) {
            return Err(Error::config("baseline percentile out of range"));
        }
        if let Some(p) = self.filter_percentile {
            if !open_unit(p) {
                return Err(Error::config("filter percentile out of range"));
            }
        }
        if self.n_segments == 0 {
            return Err(Error::config("n_segments must be positive"));
        }
        if self.min_segment_length == 0 {
            return Err(Error::config("min_segment_length must be positive"));
        }
        let w = self.windows;
        if w.short == 0 || !(w.short < w.medium && w.medium < w.long) {
            return Err(Error::config(
                "windows must be positive and strictly increasing",
            ));
        }
        if !(1..=3).contains(&self.violation_threshold) {
            return Err(Error::config("violation threshold must be in 1..=3"));
        }
        match (self.kmeans_window, self.kmeans_stride) {
            (Some(0), _) | (_, Some(0)) => {
                return Err(Error::config("k-means window and stride must be positive"))
            }
            (Some(w), Some(s)) if s > w => {
                return Err(Error::config("k-means stride exceeds window"))
            }
            _ => {}
        }
        self.scorer.validate()
    }
}

/// Mean and sample standard deviation of a non-empty slice.
pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    (stats::mean(values), stats::sample_std(values))
}
