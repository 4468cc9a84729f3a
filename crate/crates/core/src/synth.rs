//! Seeded synthetic series with piecewise-stationary regimes and labelled
//! point anomalies.
//!
//! The noise stream is ChaCha8 seeded with `seed_from_u64(seed)`; uniforms
//! are `(next_u64 >> 11) * 2^-53`, normals the cosine branch of Box-Muller
//! (two uniforms per normal). Anomaly positions are a partial Fisher-Yates
//! draw over the candidate indices, taken after all noise has been drawn.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{LabelSeries, Series};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub len: usize,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Burst {
    pub start: usize,
    pub len: usize,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub n: usize,
    pub regimes: Vec<Regime>,
    pub anomaly_rate: f64,
    pub anomaly_magnitude_sigmas: f64,
    pub burst: Option<Burst>,
    pub seed: u64,
}

fn fields<const N: usize>(s: &str, what: &str) -> Result<[f64; N]> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    if parts.len() != N {
        return Err(Error::InvalidSynthSpec(format!(
            "{what} {s:?}: expected {N} colon-separated fields"
        )));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::InvalidSynthSpec(format!("{what} {s:?}: bad number {p:?}")))?;
    }
    Ok(out)
}

fn count(x: f64, what: &str) -> Result<usize> {
    if x < 0.0 || x.fract() != 0.0 {
        return Err(Error::InvalidSynthSpec(format!(
            "{what} must be a non-negative integer, got {x}"
        )));
    }
    Ok(x as usize)
}

impl FromStr for Regime {
    type Err = Error;

    /// `len:mean:std`
    fn from_str(s: &str) -> Result<Self> {
        let [len, mean, std] = fields::<3>(s, "regime")?;
        Ok(Regime {
            len: count(len, "regime length")?,
            mean,
            std,
        })
    }
}

impl FromStr for Burst {
    type Err = Error;

    /// `start:len:offset`
    fn from_str(s: &str) -> Result<Self> {
        let [start, len, offset] = fields::<3>(s, "burst")?;
        Ok(Burst {
            start: count(start, "burst start")?,
            len: count(len, "burst length")?,
            offset,
        })
    }
}

/// Parses `len:mean:std,len:mean:std,...`.
pub fn parse_regimes(s: &str) -> Result<Vec<Regime>> {
    s.split(',').map(str::parse).collect()
}

impl SynthSpec {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSynthSpec(m.to_string()));
        if self.regimes.is_empty() {
            return bad("at least one regime is required");
        }
        if self.regimes.iter().map(|r| r.len).sum::<usize>() != self.n {
            return bad("regime lengths must sum to n");
        }
        if self.regimes.iter().any(|r| r.len == 0 || r.std < 0.0) {
            return bad("regimes need positive length and non-negative std");
        }
        if !(0.0..1.0).contains(&self.anomaly_rate) {
            return bad("rate must be in [0, 1)");
        }
        if !self.anomaly_magnitude_sigmas.is_finite() || self.anomaly_magnitude_sigmas <= 0.0 {
            return bad("magnitude must be positive");
        }
        if let Some(b) = self.burst {
            if b.len == 0 || b.start + b.len > self.n {
                return bad("burst must be non-empty and inside the series");
            }
        }
        Ok(())
    }
}

/// Generates a labelled series. A pure function of `spec`.
pub fn generate(spec: &SynthSpec) -> Result<(Series, LabelSeries)> {
    spec.validate()?;
    let mut rng = rng::seeded(spec.seed);

    let mut values = Vec::with_capacity(spec.n);
    let mut regime_of = Vec::with_capacity(spec.n);
    for (ri, r) in spec.regimes.iter().enumerate() {
        for _ in 0..r.len {
            values.push(r.mean + r.std * rng::standard_normal(&mut rng));
            regime_of.push(ri);
        }
    }
    let mut labels = vec![false; spec.n];

    let mut starts = Vec::with_capacity(spec.regimes.len());
    let mut acc = 0;
    for r in &spec.regimes {
        starts.push(acc);
        acc += r.len;
    }
    let mut candidates: Vec<usize> = (0..spec.n).filter(|i| !starts.contains(i)).collect();
    let k = (spec.anomaly_rate * spec.n as f64).floor() as usize;
    if k > candidates.len() {
        return Err(Error::InvalidSynthSpec(
            "more anomalies than eligible indices".into(),
        ));
    }
    for draw in 0..k {
        let j = draw + rng::index(&mut rng, candidates.len() - draw);
        candidates.swap(draw, j);
        let i = candidates[draw];
        let sign = if draw % 2 == 0 { 1.0 } else { -1.0 };
        values[i] += sign * spec.anomaly_magnitude_sigmas * spec.regimes[regime_of[i]].std;
        labels[i] = true;
    }

    if let Some(b) = spec.burst {
        for i in b.start..b.start + b.len {
            values[i] += b.offset;
            labels[i] = true;
        }
    }

    Ok((Series::from_values(values)?, LabelSeries(labels)))
}
