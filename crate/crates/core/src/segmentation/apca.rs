use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{coefficient_of_variation, whole};
use crate::error::{Error, Result};
use crate::stats;

/// Recursive-splitting parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApcaParams {
    pub min_segment_length: usize,
    /// Below this coefficient of variation the series is cut into fixed-length pieces.
    pub cv_flat_threshold: f64,
    pub improvement_high: f64,
    pub improvement_moderate: f64,
    /// Ranges at or above this CV use `improvement_high`.
    pub high_variance_cv: f64,
}

impl Default for ApcaParams {
    fn default() -> Self {
        Self {
            min_segment_length: 10,
            cv_flat_threshold: 0.1,
            improvement_high: 0.7,
            improvement_moderate: 0.5,
            high_variance_cv: 0.5,
        }
    }
}

impl ApcaParams {
    pub fn with_min_segment_length(min_segment_length: usize) -> Self {
        Self {
            min_segment_length,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.min_segment_length == 0 {
            return Err(Error::config("min_segment_length must be positive"));
        }
        if !(0.0 < self.improvement_moderate
            && self.improvement_moderate <= self.improvement_high
            && self.improvement_high < 1.0)
        {
            return Err(Error::config(
                "improvement thresholds must satisfy 0 < moderate <= high < 1",
            ));
        }
        Ok(())
    }
}

/// Fixed segment length used on flat series: `max(200, n / 15)`.
pub fn flat_segment_size(n: usize) -> usize {
    200.max(n / 15)
}

/// Adaptive piecewise-constant segmentation.
///
/// Flat input (CV below the threshold) is cut into fixed-length pieces with
/// the remainder absorbed by the last one. Otherwise ranges are split
/// recursively at the point minimising `sse(left) + sse(right)`, provided that
/// minimum beats the unsplit error scaled by the improvement threshold.
pub fn apca_segment(scores: &[f64], params: &ApcaParams) -> Result<Vec<Range<usize>>> {
    if scores.is_empty() {
        return Err(Error::EmptySample);
    }
    params.validate()?;
    let n = scores.len();

    if coefficient_of_variation(scores)? < params.cv_flat_threshold {
        return Ok(fixed_length(n, flat_segment_size(n)));
    }

    let mut done = Vec::new();
    let mut stack = whole(n);
    while let Some(range) = stack.pop() {
        match best_split(&scores[range.clone()], params)? {
            Some(offset) => {
                let mid = range.start + offset;
                stack.push(mid..range.end);
                stack.push(range.start..mid);
            }
            None => done.push(range),
        }
    }
    done.sort_by_key(|r| r.start);
    Ok(done)
}

fn fixed_length(n: usize, size: usize) -> Vec<Range<usize>> {
    let count = (n / size).max(1);
    (0..count)
        .map(|i| {
            let start = i * size;
            let end = if i + 1 == count { n } else { start + size };
            start..end
        })
        .collect()
}

/// Offset of the accepted split within `values`, if any.
fn best_split(values: &[f64], params: &ApcaParams) -> Result<Option<usize>> {
    let len = values.len();
    let min_len = params.min_segment_length;
    if len < 2 * min_len {
        return Ok(None);
    }

    // Prefix sums over centred values keep the SSE differences well conditioned.
    let m = stats::mean(values);
    let mut s1 = Vec::with_capacity(len + 1);
    let mut s2 = Vec::with_capacity(len + 1);
    s1.push(0.0);
    s2.push(0.0);
    for &x in values {
        let c = x - m;
        s1.push(s1.last().unwrap() + c);
        s2.push(s2.last().unwrap() + c * c);
    }
    let sse = |a: usize, b: usize| {
        let k = (b - a) as f64;
        let sum = s1[b] - s1[a];
        (s2[b] - s2[a] - sum * sum / k).max(0.0)
    };

    let no_split_error = sse(0, len);
    let mut best: Option<(usize, f64)> = None;
    for p in min_len..=(len - min_len) {
        let err = sse(0, p) + sse(p, len);
        if best.map_or(true, |(_, e)| err < e) {
            best = Some((p, err));
        }
    }
    let (p, min_error) = best.expect("at least one candidate split");

    let cv = coefficient_of_variation(values)?;
    let threshold = if cv >= params.high_variance_cv {
        params.improvement_high
    } else {
        params.improvement_moderate
    };
    Ok((min_error < no_split_error * threshold).then_some(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segmentation::is_partition;
    use crate::stats::sse;

    #[test]
    fn flat_series_uses_fixed_length() {
        let segs = apca_segment(&vec![3.0; 3000], &ApcaParams::default()).unwrap();
        assert_eq!(segs.len(), 15);
        assert!(segs.iter().all(|r| r.len() == 200));
    }

    #[test]
    fn flat_remainder_goes_to_last() {
        // n / 15 = 213 for n = 3210
        let n = 3210;
        let segs = apca_segment(&vec![1.0; n], &ApcaParams::default()).unwrap();
        assert_eq!(flat_segment_size(n), 214);
        assert_eq!(segs.len(), 15);
        assert!(segs[..14].iter().all(|r| r.len() == 214));
        assert_eq!(segs[14].len(), n - 14 * 214);
        assert!(is_partition(&segs, n));

        let short = apca_segment(&vec![1.0; 50], &ApcaParams::default()).unwrap();
        assert_eq!(short, vec![0..50]);
    }

    #[test]
    fn step_series_splits_at_change() {
        let mut v = vec![0.0; 500];
        v.extend(vec![100.0; 500]);
        let segs = apca_segment(&v, &ApcaParams::default()).unwrap();
        assert_eq!(segs, vec![0..500, 500..1000]);
    }

    #[test]
    fn short_variable_series_is_one_segment() {
        let v = [1.0, 5.0, 2.0, 9.0, 4.0, 0.5, 7.0, 3.0, 8.0, 6.0, 2.5, 1.5];
        let segs = apca_segment(&v, &ApcaParams::default()).unwrap();
        assert_eq!(segs, vec![0..v.len()]);
    }

    #[test]
    fn split_error_matches_brute_force() {
        let v: Vec<f64> = (0..60)
            .map(|i| {
                if i < 23 {
                    1.0 + (i % 3) as f64
                } else {
                    9.0 + (i % 4) as f64
                }
            })
            .collect();
        let params = ApcaParams::default();
        let offset = best_split(&v, &params).unwrap().unwrap();
        let brute = (10..=50)
            .min_by(|&a, &b| {
                let ea = sse(&v[..a]) + sse(&v[a..]);
                let eb = sse(&v[..b]) + sse(&v[b..]);
                ea.partial_cmp(&eb).unwrap()
            })
            .unwrap();
        assert_eq!(offset, brute);
        assert_eq!(offset, 23);
    }

    #[test]
    fn rejects_bad_params() {
        let params = ApcaParams {
            improvement_moderate: 0.8,
            ..ApcaParams::default()
        };
        assert!(apca_segment(&[1.0, 2.0], &params).is_err());
        assert!(apca_segment(&[], &ApcaParams::default()).is_err());
    }
}
