use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::whole;
use crate::rng::{self, Rng};
use crate::stats;

const FEATURES: usize = 4;
type Feature = [f64; FEATURES];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KmeansParams {
    /// Number of clusters.
    pub k: usize,
    pub window: usize,
    pub stride: usize,
    pub max_iters: usize,
    /// Independent seedings tried; the lowest inertia wins.
    pub n_init: usize,
    pub seed: u64,
    /// Label runs shorter than this merge into a neighbour.
    pub min_segment_length: usize,
}

impl KmeansParams {
    /// Defaults for a series of length `n`: window `max(20, n / 50)`, half-window stride.
    pub fn for_length(n: usize, k: usize, seed: u64) -> Self {
        let window = 20.max(n / 50);
        Self {
            k,
            window,
            stride: (window / 2).max(1),
            max_iters: 100,
            n_init: 10,
            seed,
            min_segment_length: 10,
        }
    }
}

/// Mean, sample std, median and Fisher-Pearson skewness of one window.
pub fn window_features(window: &[f64]) -> Feature {
    let n = window.len() as f64;
    let mean = stats::mean(window);
    let std = stats::sample_std(window);
    let median = stats::median(window);
    let pop_var = window.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let sigma = pop_var.sqrt();
    let skew = if sigma < 1e-12 {
        0.0
    } else {
        window
            .iter()
            .map(|x| ((x - mean) / sigma).powi(3))
            .sum::<f64>()
            / n
    };
    [mean, std, median, skew]
}

/// Segmentation by clustering sliding-window feature vectors.
///
/// Falls back to a single segment when there are fewer distinct feature
/// vectors than clusters or clustering degenerates.
pub fn kmeans_segment(scores: &[f64], params: &KmeansParams) -> Vec<Range<usize>> {
    let n = scores.len();
    let whole = whole(n);
    if n == 0 || params.k == 0 || params.window == 0 || params.stride == 0 {
        return whole;
    }

    let windows = extract_windows(n, params.window, params.stride.min(params.window));
    let mut features: Vec<Feature> = windows
        .iter()
        .map(|w| window_features(&scores[w.clone()]))
        .collect();
    standardize(&mut features);

    if distinct(&features) < params.k {
        return whole;
    }
    let Some(window_labels) = cluster(&features, params) else {
        return whole;
    };

    let point_labels = label_points(n, &windows, &window_labels, params.k);
    merge_runs(&point_labels, params.min_segment_length)
}

/// Window ranges at multiples of `stride`; the final window is clipped to
/// the series end and dropped if shorter than two points.
fn extract_windows(n: usize, window: usize, stride: usize) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < n {
        let end = (start + window).min(n);
        if end - start >= 2 {
            out.push(start..end);
        }
        if end == n {
            break;
        }
        start += stride;
    }
    if out.is_empty() {
        out.push(0..n);
    }
    out
}

/// Zero mean and unit sample std per column; constant columns become zero.
fn standardize(features: &mut [Feature]) {
    for col in 0..FEATURES {
        let column: Vec<f64> = features.iter().map(|f| f[col]).collect();
        let m = stats::mean(&column);
        let s = stats::sample_std(&column);
        for f in features.iter_mut() {
            f[col] = if s < 1e-12 { 0.0 } else { (f[col] - m) / s };
        }
    }
}

fn distinct(features: &[Feature]) -> usize {
    let mut keys: Vec<[u64; FEATURES]> = features
        .iter()
        .map(|f| f.map(|x| (x + 0.0).to_bits()))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}

fn dist2(a: &Feature, b: &Feature) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &Feature, centers: &[Feature]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centers.iter().enumerate() {
        let d = dist2(point, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Best of `n_init` Lloyd runs by inertia; `None` when every run degenerates.
fn cluster(points: &[Feature], params: &KmeansParams) -> Option<Vec<usize>> {
    let mut rng = rng::seeded(params.seed);
    let mut best: Option<(Vec<usize>, f64)> = None;
    for _ in 0..params.n_init.max(1) {
        if let Some((labels, inertia)) = lloyd(points, params.k, params.max_iters, &mut rng) {
            if best.as_ref().map_or(true, |(_, b)| inertia < *b) {
                best = Some((labels, inertia));
            }
        }
    }
    best.map(|(labels, _)| labels)
}

/// k-means++ seeding: first centre uniform, the rest drawn proportionally to
/// squared distance from the nearest chosen centre.
fn seed_centers(points: &[Feature], k: usize, rng: &mut Rng) -> Option<Vec<Feature>> {
    let mut centers = vec![points[rng::index(rng, points.len())]];
    let mut d2: Vec<f64> = points.iter().map(|p| dist2(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        if total <= 0.0 {
            return None;
        }
        let target = rng::unit(rng) * total;
        let mut acc = 0.0;
        let mut pick = points.len() - 1;
        for (i, &d) in d2.iter().enumerate() {
            acc += d;
            if acc > target && d > 0.0 {
                pick = i;
                break;
            }
        }
        let c = points[pick];
        for (p, d) in points.iter().zip(d2.iter_mut()) {
            *d = d.min(dist2(p, &c));
        }
        centers.push(c);
    }
    Some(centers)
}

fn lloyd(
    points: &[Feature],
    k: usize,
    max_iters: usize,
    rng: &mut Rng,
) -> Option<(Vec<usize>, f64)> {
    let mut centers = seed_centers(points, k, rng)?;
    let mut labels = vec![usize::MAX; points.len()];

    for _ in 0..max_iters.max(1) {
        let mut changed = false;
        for (p, label) in points.iter().zip(labels.iter_mut()) {
            let (j, _) = nearest(p, &centers);
            if *label != j {
                *label = j;
                changed = true;
            }
        }

        // empty clusters take the point farthest from its own centre
        for j in 0..k {
            if labels.contains(&j) {
                continue;
            }
            let (far, d) = points
                .iter()
                .zip(&labels)
                .enumerate()
                .map(|(i, (p, &l))| (i, dist2(p, &centers[l])))
                .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            let donor = labels[far];
            if d <= 0.0 || labels.iter().filter(|&&l| l == donor).count() < 2 {
                return None;
            }
            labels[far] = j;
            centers[j] = points[far];
            changed = true;
        }

        let mut sums = vec![[0.0; FEATURES]; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in points.iter().zip(&labels) {
            counts[l] += 1;
            for (s, x) in sums[l].iter_mut().zip(p) {
                *s += x;
            }
        }
        for j in 0..k {
            centers[j] = sums[j].map(|s| s / counts[j] as f64);
        }

        if !changed {
            break;
        }
    }

    let inertia = points
        .iter()
        .zip(&labels)
        .map(|(p, &l)| dist2(p, &centers[l]))
        .sum();
    Some((labels, inertia))
}

/// Majority label over the windows covering each point; ties go to the
/// earliest covering window whose label is among the tied.
fn label_points(
    n: usize,
    windows: &[Range<usize>],
    window_labels: &[usize],
    k: usize,
) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    let mut first = 0;
    let mut counts = vec![0usize; k];
    for i in 0..n {
        while first < windows.len() && windows[first].end <= i {
            first += 1;
        }
        counts.iter_mut().for_each(|c| *c = 0);
        let covering = || {
            windows[first..]
                .iter()
                .zip(&window_labels[first..])
                .take_while(|(w, _)| w.start <= i)
                .filter(|(w, _)| w.contains(&i))
                .map(|(_, &l)| l)
        };
        for l in covering() {
            counts[l] += 1;
        }
        let max = counts.iter().copied().max().unwrap_or(0);
        let label = covering()
            .find(|&l| counts[l] == max)
            .unwrap_or_else(|| out.last().copied().unwrap_or(0));
        out.push(label);
    }
    out
}

/// Equal-label runs become segments. Runs shorter than `min_len` join the
/// preceding segment; a short leading run joins the one after it.
fn merge_runs(labels: &[usize], min_len: usize) -> Vec<Range<usize>> {
    let n = labels.len();
    let mut runs: Vec<(usize, Range<usize>)> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || labels[i] != labels[start] {
            runs.push((labels[start], start..i));
            start = i;
        }
    }

    let mut out: Vec<(usize, Range<usize>)> = Vec::new();
    let mut pending: Option<usize> = None;
    for (label, run) in runs {
        if run.len() < min_len {
            match out.last_mut() {
                Some((_, last)) => last.end = run.end,
                None => {
                    pending.get_or_insert(run.start);
                }
            }
            continue;
        }
        let start = pending.take().unwrap_or(run.start);
        match out.last_mut() {
            Some((l, last)) if *l == label => last.end = run.end,
            _ => out.push((label, start..run.end)),
        }
    }

    if out.is_empty() {
        return whole(n);
    }
    out.into_iter().map(|(_, r)| r).collect()
}
