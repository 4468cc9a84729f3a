//! Partitioning a score series into locally stationary segments.
//!
//! Both methods return half-open index ranges that are ordered, disjoint and
//! cover `[0, n)`. [`build_segments`] attaches the statistics and bands.

mod apca;
mod kmeans;

use std::ops::Range;

pub use apca::{apca_segment, flat_segment_size, ApcaParams};
pub use kmeans::{kmeans_segment, window_features, KmeansParams};

use crate::bounds::band_from_stats;
use crate::error::{Error, Result};
use crate::model::{mean_std, Segment};
use crate::stats;

/// Coefficient of variation returned for zero-mean, non-constant input.
/// Large enough that it never reads as flat.
pub const NOT_FLAT: f64 = f64::MAX;

/// `sample_std / |mean|`, with [`NOT_FLAT`] when the mean vanishes and
/// zero when the input is constant.
pub fn coefficient_of_variation(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let (m, s) = mean_std(values);
    if s == 0.0 {
        return Ok(0.0);
    }
    if m.abs() < 1e-12 {
        return Ok(NOT_FLAT);
    }
    Ok(s / m.abs())
}

/// Row means of an `n x d` matrix; identity for a single column.
pub fn reduce_multidim(rows: &[Vec<f64>]) -> Vec<f64> {
    rows.iter()
        .map(|row| {
            if row.len() == 1 {
                row[0]
            } else {
                stats::mean(row)
            }
        })
        .collect()
}

/// Attaches mean, sample std and band to each range.
pub fn build_segments(
    scores: &[f64],
    ranges: &[Range<usize>],
    confidence_level: f64,
) -> Vec<Segment> {
    ranges
        .iter()
        .map(|r| {
            let (mean, std) = mean_std(&scores[r.clone()]);
            Segment {
                start: r.start,
                end: r.end,
                mean,
                std,
                band: band_from_stats(mean, std, confidence_level),
            }
        })
        .collect()
}

/// The single range covering `0..n`.
pub(crate) fn whole(n: usize) -> Vec<Range<usize>> {
    std::iter::once(0..n).collect()
}

/// True when `ranges` are non-empty, ordered, contiguous and cover `[0, n)`.
pub fn is_partition(ranges: &[Range<usize>], n: usize) -> bool {
    let mut next = 0;
    for r in ranges {
        if r.start != next || r.end <= r.start {
            return false;
        }
        next = r.end;
    }
    next == n && !ranges.is_empty()
}
