//! Deterministic anomaly scorers.
//!
//! Scores can also be computed elsewhere and ingested as the value column with
//! the `identity` scorer.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ScoreSeries;
use crate::stats::RollingStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScorerKind {
    Identity,
    AbsDiff,
    RollingResidual,
}

impl fmt::Display for ScorerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScorerKind::Identity => "identity",
            ScorerKind::AbsDiff => "abs_diff",
            ScorerKind::RollingResidual => "rolling_residual",
        })
    }
}

impl FromStr for ScorerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(ScorerKind::Identity),
            "abs_diff" | "abs-diff" => Ok(ScorerKind::AbsDiff),
            "rolling_residual" | "rolling-residual" => Ok(ScorerKind::RollingResidual),
            other => Err(Error::config(format!("unknown scorer {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScorerSpec {
    pub kind: ScorerKind,
    /// Trailing window for `rolling_residual`.
    pub window: usize,
    /// Seasonal differencing applied before scoring.
    pub seasonal_lag: Option<usize>,
}

impl Default for ScorerSpec {
    fn default() -> Self {
        Self {
            kind: ScorerKind::Identity,
            window: 20,
            seasonal_lag: None,
        }
    }
}

impl ScorerSpec {
    pub fn new(kind: ScorerKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == ScorerKind::RollingResidual && self.window < 2 {
            return Err(Error::config("rolling_residual window must be at least 2"));
        }
        if self.seasonal_lag == Some(0) {
            return Err(Error::config("seasonal lag must be positive"));
        }
        Ok(())
    }

    /// Identifier recorded alongside the scores.
    pub fn id(&self) -> String {
        let mut id = match self.kind {
            ScorerKind::RollingResidual => format!("{}(window={})", self.kind, self.window),
            _ => self.kind.to_string(),
        };
        if let Some(lag) = self.seasonal_lag {
            id.push_str(&format!("+deseasonalize(lag={lag})"));
        }
        id
    }
}

/// Seasonal differencing: `out[t] = x[t] - x[t - lag]`, zero for `t < lag`.
pub fn deseasonalize(values: &[f64], lag: usize) -> Result<Vec<f64>> {
    if lag == 0 {
        return Err(Error::config("seasonal lag must be positive"));
    }
    if lag >= values.len() {
        return Err(Error::LagExceedsSeries {
            lag,
            len: values.len(),
        });
    }
    let mut out = vec![0.0; values.len()];
    for t in lag..values.len() {
        out[t] = values[t] - values[t - lag];
    }
    Ok(out)
}

/// `|x[t] - x[t-1]|`, with a zero score at `t = 0`.
pub fn abs_diff(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    if let Some(&first) = values.first() {
        out.push(0.0);
        let mut prev = first;
        for &x in &values[1..] {
            out.push((x - prev).abs());
            prev = x;
        }
    }
    out
}

/// Absolute deviation of each point from the mean of the trailing
/// `min(window, t + 1)` points, the point itself included.
pub fn rolling_residual(values: &[f64], window: usize) -> Vec<f64> {
    let mut rolling = RollingStats::new(window.max(1));
    values
        .iter()
        .map(|&x| {
            rolling.push(x);
            (x - rolling.mean()).abs()
        })
        .collect()
}

/// Runs the scorer described by `spec` over `values` in a single pass.
pub fn score(values: &[f64], spec: &ScorerSpec) -> Result<ScoreSeries> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    spec.validate()?;
    let seasonal;
    let input = match spec.seasonal_lag {
        Some(lag) => {
            seasonal = deseasonalize(values, lag)?;
            &seasonal[..]
        }
        None => values,
    };
    let scores = match spec.kind {
        ScorerKind::Identity => input.to_vec(),
        ScorerKind::AbsDiff => abs_diff(input),
        ScorerKind::RollingResidual => rolling_residual(input, spec.window),
    };
    ScoreSeries::new(scores, spec.id())
}
