//! Confusion counts, metrics and proportional deltas against a baseline.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ConfusionCounts, LabelSeries, MetricSet};

pub fn confusion(flags: &[bool], labels: &LabelSeries) -> Result<ConfusionCounts> {
    if flags.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: flags.len(),
            right: labels.len(),
        });
    }
    let mut c = ConfusionCounts::default();
    for (&flag, &label) in flags.iter().zip(&labels.0) {
        match (flag, label) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    Ok(c)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Accuracy, precision, recall and F1; zero wherever a denominator vanishes.
pub fn metrics(c: &ConfusionCounts) -> Result<MetricSet> {
    let total = c.total();
    if total == 0 {
        return Err(Error::EmptySample);
    }
    let precision = ratio(c.tp, c.tp + c.fp);
    let recall = ratio(c.tp, c.tp + c.fn_);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Ok(MetricSet {
        accuracy: ratio(c.tp + c.tn, total),
        precision,
        recall,
        f1,
    })
}

/// `(new - old) / old`.
pub fn proportional_improvement(new: f64, old: f64) -> Result<f64> {
    if old == 0.0 {
        return Err(Error::BaselineMetricZero);
    }
    Ok((new - old) / old)
}

/// Proportional change of each metric relative to the baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricDelta {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl MetricDelta {
    pub fn between(method: &MetricSet, baseline: &MetricSet) -> Result<Self> {
        Ok(Self {
            accuracy: proportional_improvement(method.accuracy, baseline.accuracy)?,
            precision: proportional_improvement(method.precision, baseline.precision)?,
            recall: proportional_improvement(method.recall, baseline.recall)?,
            f1: proportional_improvement(method.f1, baseline.f1)?,
        })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.accuracy, self.precision, self.recall, self.f1]
    }
}

/// Method name to metric deltas against `baseline`.
pub fn delta_report<'a>(
    methods: impl IntoIterator<Item = (&'a str, &'a ConfusionCounts)>,
    baseline: &ConfusionCounts,
) -> Result<BTreeMap<String, MetricDelta>> {
    let base = metrics(baseline)?;
    methods
        .into_iter()
        .map(|(name, counts)| {
            let m = metrics(counts)?;
            Ok((name.to_string(), MetricDelta::between(&m, &base)?))
        })
        .collect()
}
