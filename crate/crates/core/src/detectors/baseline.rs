use super::{Diagnostics, Verdicts};
use crate::error::{Error, Result};
use crate::stats::percentile;

/// Global threshold: the `p` percentile of the training scores.
pub fn baseline_fit(train_scores: &[f64], p: f64) -> Result<f64> {
    if train_scores.is_empty() {
        return Err(Error::EmptyTrain);
    }
    percentile(train_scores, p)
}

/// Flags scores strictly above `threshold`.
pub fn baseline_detect(scores: &[f64], threshold: f64) -> Verdicts {
    let raw: Vec<bool> = scores.iter().map(|&s| s > threshold).collect();
    Verdicts::compose(
        raw,
        vec![true; scores.len()],
        vec![None; scores.len()],
        None,
        Diagnostics::Baseline { threshold },
    )
}
