//! Adaptive thresholds for anomaly detection in nonstationary time series.
//!
//! Two detectors are provided next to a fixed-percentile baseline:
//!
//! * **SCS** (segmented confidence sequences) splits the scores into locally
//!   stationary segments, by adaptive piecewise-constant approximation or by
//!   K-means over sliding-window features, and flags points outside their
//!   segment's band.
//! * **MACS** (multi-scale adaptive confidence segments) keeps short, medium
//!   and long rolling bands, mixes them with variance-driven attention weights,
//!   and becomes conservative while a regime shift is under way.
//!
//! [`evaluation`] turns verdicts into confusion counts, metrics and
//! proportional deltas against the baseline.

pub mod bounds;
pub mod detectors;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod model;
pub mod pipeline;
pub mod report;
pub mod rng;
pub mod scoring;
pub mod segmentation;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use model::{
    AttentionWeights, ConfidenceBand, ConfusionCounts, LabelSeries, MetricSet, RunConfig,
    ScoreSeries, Segment, SegmentationMethod, Series, SeriesSample, Windows,
};
pub use pipeline::{run_method, Method, MethodRun};
pub use scoring::{ScorerKind, ScorerSpec};
