//! Per-point anomaly verdicts from the percentile baseline, segmented
//! confidence sequences (SCS) and multi-scale adaptive confidence segments
//! (MACS).
//!
//! Every detector yields a raw bound-violation flag, a percentile-filter
//! pass flag, and their conjunction as the final verdict.

mod baseline;
mod macs;
mod scs;

use serde::{Deserialize, Serialize};

pub use baseline::{baseline_detect, baseline_fit};
pub use macs::{local_variance_profile, macs_detect, MacsPoint, MacsState};
pub use scs::{scs_detect, scs_fit, ScsModel, ScsStream};

use crate::error::Result;
use crate::model::ConfidenceBand;
use crate::stats::percentile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Diagnostics {
    Baseline { threshold: f64 },
    Scs { segment_ids: Vec<usize> },
    Macs { points: Vec<MacsPoint> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    /// Bound violation before filtering.
    pub raw: Vec<bool>,
    /// Score above the fitted percentile threshold; all true with the filter off.
    pub filter_pass: Vec<bool>,
    /// `raw && filter_pass`.
    pub flagged: Vec<bool>,
    /// Band the point was judged against, when the method has one.
    pub bands: Vec<Option<ConfidenceBand>>,
    pub filter_threshold: Option<f64>,
    pub diagnostics: Diagnostics,
}

impl Verdicts {
    fn compose(
        raw: Vec<bool>,
        filter_pass: Vec<bool>,
        bands: Vec<Option<ConfidenceBand>>,
        filter_threshold: Option<f64>,
        diagnostics: Diagnostics,
    ) -> Self {
        let flagged = raw
            .iter()
            .zip(&filter_pass)
            .map(|(r, f)| *r && *f)
            .collect();
        Self {
            raw,
            filter_pass,
            flagged,
            bands,
            filter_threshold,
            diagnostics,
        }
    }

    pub fn len(&self) -> usize {
        self.flagged.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flagged.is_empty()
    }

    pub fn anomaly_count(&self) -> usize {
        self.flagged.iter().filter(|&&f| f).count()
    }

    pub fn anomaly_indices(&self) -> Vec<usize> {
        self.flagged
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| f.then_some(i))
            .collect()
    }
}

/// Threshold of the percentile filter, fitted once on `fit_scores`.
pub fn filter_threshold(fit_scores: &[f64], percentile_level: Option<f64>) -> Result<Option<f64>> {
    percentile_level
        .map(|p| percentile(fit_scores, p))
        .transpose()
}

/// Pointwise `score > threshold`; all true when the filter is disabled.
pub fn apply_filter(scores: &[f64], threshold: Option<f64>) -> Vec<bool> {
    match threshold {
        Some(th) => scores.iter().map(|&s| s > th).collect(),
        None => vec![true; scores.len()],
    }
}

/// Percentile filter mask with the threshold fitted on `fit_scores`.
pub fn percentile_filter(
    scores: &[f64],
    fit_scores: &[f64],
    percentile_level: Option<f64>,
) -> Result<Vec<bool>> {
    Ok(apply_filter(
        scores,
        filter_threshold(fit_scores, percentile_level)?,
    ))
}
