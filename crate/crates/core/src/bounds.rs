//! Confidence bands from local score statistics.
//!
//! The half-width is `1.5 * std`, widened by 1.2 above 95 % confidence and
//! narrowed to 0.8 below 90 %. Both cut-offs are strict, so 0.95 and 0.90
//! keep the unscaled width.

use crate::error::{Error, Result};
use crate::model::{mean_std, ConfidenceBand};

const BASE_MULTIPLIER: f64 = 1.5;

/// Scale factor applied to the base width for a confidence level.
pub fn confidence_multiplier(confidence_level: f64) -> f64 {
    if confidence_level > 0.95 {
        1.2
    } else if confidence_level < 0.90 {
        0.8
    } else {
        1.0
    }
}

pub fn bound_width(std_score: f64, confidence_level: f64) -> f64 {
    BASE_MULTIPLIER * std_score * confidence_multiplier(confidence_level)
}

/// Band centred on the mean from a centre and standard deviation.
pub fn band_from_stats(mean: f64, std: f64, confidence_level: f64) -> ConfidenceBand {
    ConfidenceBand::around(mean, bound_width(std, confidence_level))
}

/// Band centred on the mean of `values`.
pub fn band_for(values: &[f64], confidence_level: f64) -> Result<ConfidenceBand> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let (m, s) = mean_std(values);
    Ok(band_from_stats(m, s, confidence_level))
}
