//! Workloads shared by the criterion benches.

use confseg::rng;
use confseg::ScoreSeries;

/// Nonnegative scores drifting between a few levels, with unit noise.
pub fn regime_scores(n: usize, seed: u64) -> ScoreSeries {
    let mut r = rng::seeded(seed);
    let levels = [0.0, 8.0, 3.0, 12.0];
    let piece = (n / levels.len()).max(1);
    let v = (0..n)
        .map(|i| levels[(i / piece).min(levels.len() - 1)] + rng::standard_normal(&mut r).abs())
        .collect();
    ScoreSeries::new(v, "identity").expect("finite scores")
}
