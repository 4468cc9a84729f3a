//! Numeric conventions shared by every detector.
//!
//! Two conventions are frozen here and nowhere else:
//!
//! * percentiles interpolate linearly between the closest ranks, with rank
//!   `p * (n - 1)` into the ascending sort;
//! * standard deviations are sample deviations (denominator `n - 1`), and are
//!   zero for fewer than two values.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Arithmetic mean. Zero for an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Percentile of `values` at `p` in `[0, 1]`, by linear interpolation between
/// the closest ranks.
pub fn percentile(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::config(format!("percentile {p} outside [0, 1]")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(percentile_of_sorted(&sorted, p))
}

/// Same as [`percentile`] for input that is already sorted ascending.
pub fn percentile_of_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let rank = p * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Sample standard deviation (denominator `n - 1`); zero for `n <= 1`.
pub fn sample_std(values: &[f64]) -> f64 {
    sample_variance(values).sqrt()
}

/// Sample variance (denominator `n - 1`); zero for `n <= 1`.
pub fn sample_variance(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|x| (x - m) * (x - m)).sum();
    ss / (n - 1) as f64
}

/// Sum of squared deviations from the mean.
pub fn sse(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|x| (x - m) * (x - m)).sum()
}

/// Median; the average of the two middle values for even lengths.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Mean and sample standard deviation over a bounded trailing window, updated
/// in O(1) per push.
///
/// Uses Welford's recurrence with removal. Accumulated rounding is discarded
/// by recomputing from the buffer once every `4 * capacity` evictions, so the
/// amortised cost stays constant.
#[derive(Debug, Clone)]
pub struct RollingStats {
    capacity: usize,
    buf: VecDeque<f64>,
    mean: f64,
    m2: f64,
    evictions: usize,
}

impl RollingStats {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "rolling window capacity must be positive");
        Self {
            capacity,
            buf: VecDeque::with_capacity(capacity),
            mean: 0.0,
            m2: 0.0,
            evictions: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    /// Appends `x`, returning the value evicted from a full window.
    pub fn push(&mut self, x: f64) -> Option<f64> {
        let mut evicted = None;
        if self.buf.len() == self.capacity {
            let old = self.buf.pop_front().expect("full buffer");
            self.remove(old);
            self.evictions += 1;
            evicted = Some(old);
        }
        self.buf.push_back(x);
        let n = self.buf.len() as f64;
        let delta = x - self.mean;
        self.mean += delta / n;
        self.m2 += delta * (x - self.mean);

        if self.evictions >= 4 * self.capacity {
            self.resync();
        }
        evicted
    }

    fn remove(&mut self, x: f64) {
        let n = self.buf.len();
        if n == 0 {
            self.mean = 0.0;
            self.m2 = 0.0;
            return;
        }
        let delta = x - self.mean;
        self.mean -= delta / n as f64;
        self.m2 -= delta * (x - self.mean);
        if self.m2 < 0.0 {
            self.m2 = 0.0;
        }
    }

    fn resync(&mut self) {
        // incremental mean stays exact on constant windows
        let mut m = 0.0;
        for (k, x) in self.buf.iter().enumerate() {
            m += (x - m) / (k + 1) as f64;
        }
        self.mean = m;
        self.m2 = self.buf.iter().map(|x| (x - m) * (x - m)).sum();
        self.evictions = 0;
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        let n = self.buf.len();
        if n < 2 {
            0.0
        } else {
            self.m2 / (n - 1) as f64
        }
    }

    pub fn std(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn values(&self) -> impl Iterator<Item = &f64> {
        self.buf.iter()
    }
}
