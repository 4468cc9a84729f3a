//! Score, fit and detect for one named method.
//!
//! The baseline threshold and SCS segments are fitted on the chronological
//! training prefix; verdicts cover the whole series so every method is
//! evaluated on the same points. MACS is rolling and never needs a fit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::detectors::{baseline_detect, baseline_fit, macs_detect, scs_detect, scs_fit, Verdicts};
use crate::error::{Error, Result};
use crate::evaluation::{confusion, metrics};
use crate::model::{LabelSeries, RunConfig, ScoreSeries, SegmentationMethod};
use crate::report::MethodReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Baseline,
    ScsApca,
    ScsKmeans,
    Macs,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Baseline,
        Method::ScsApca,
        Method::ScsKmeans,
        Method::Macs,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Baseline => "baseline",
            Method::ScsApca => "scs-apca",
            Method::ScsKmeans => "scs-kmeans",
            Method::Macs => "macs",
        }
    }

    pub fn uses_confidence(&self) -> bool {
        !matches!(self, Method::Baseline)
    }

    /// Report key, e.g. `scs-apca@0.99`.
    pub fn key(&self, confidence_level: f64) -> String {
        if self.uses_confidence() {
            format!("{}@{}", self.as_str(), confidence_level)
        } else {
            self.as_str().to_string()
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct MethodRun {
    pub method: Method,
    pub confidence_level: f64,
    /// Baseline cut-off, when the method has one.
    pub threshold: Option<f64>,
    pub verdicts: Verdicts,
}

impl MethodRun {
    pub fn key(&self) -> String {
        self.method.key(self.confidence_level)
    }

    pub fn to_report(&self, labels: Option<&LabelSeries>) -> Result<MethodReport> {
        let confusion = labels
            .map(|l| confusion(&self.verdicts.flagged, l))
            .transpose()?;
        let metrics = confusion.as_ref().map(metrics).transpose()?;
        Ok(MethodReport {
            method: self.method.as_str().to_string(),
            confidence_level: self
                .method
                .uses_confidence()
                .then_some(self.confidence_level),
            threshold: self.threshold,
            filter_threshold: self.verdicts.filter_threshold,
            anomaly_count: self.verdicts.anomaly_count(),
            anomaly_indices: self.verdicts.anomaly_indices(),
            confusion,
            metrics,
        })
    }
}

/// Runs `method` over `scores`, fitting on `scores[..train_len]` where a fit is needed.
pub fn run_method(
    method: Method,
    scores: &ScoreSeries,
    config: &RunConfig,
    train_len: usize,
) -> Result<MethodRun> {
    config.validate()?;
    if train_len == 0 {
        return Err(Error::EmptyTrain);
    }
    let train_len = train_len.min(scores.len());
    let train = || ScoreSeries::new(scores.scores()[..train_len].to_vec(), scores.scorer_id());

    let (threshold, verdicts) = match method {
        Method::Baseline => {
            let th = baseline_fit(&scores.scores()[..train_len], config.baseline_percentile)?;
            (Some(th), baseline_detect(scores.scores(), th))
        }
        Method::ScsApca | Method::ScsKmeans => {
            let cfg = RunConfig {
                segmentation_method: if method == Method::ScsApca {
                    SegmentationMethod::Apca
                } else {
                    SegmentationMethod::Kmeans
                },
                ..config.clone()
            };
            let model = scs_fit(&train()?, &cfg)?;
            (None, scs_detect(scores, &model))
        }
        Method::Macs => (None, macs_detect(scores, config)?),
    };
    Ok(MethodRun {
        method,
        confidence_level: config.confidence_level,
        threshold,
        verdicts,
    })
}
