use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use confseg::{Method, RunConfig, ScorerKind, ScorerSpec, Windows};

#[derive(Debug, Parser)]
#[command(
    name = "confseg",
    version,
    about = "Adaptive-threshold anomaly detection for nonstationary series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one detector and write its report.
    Detect(DetectArgs),
    /// Run the baseline and a grid of detectors, reporting deltas against the baseline.
    Compare(CompareArgs),
    /// Write a labelled synthetic series as CSV.
    Synth(SynthArgs),
    /// Emit the per-point band and verdict trace of one detector as CSV.
    Plotdata(PlotdataArgs),
}

/// Percentile-filter flag value; `off` disables the filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSetting(pub Option<f64>);

fn parse_filter(s: &str) -> Result<FilterSetting, String> {
    match s {
        "off" | "none" | "disabled" => Ok(FilterSetting(None)),
        _ => s
            .parse::<f64>()
            .map(|p| FilterSetting(Some(p)))
            .map_err(|_| format!("expected a percentile in (0, 1) or `off`, got {s:?}")),
    }
}

fn parse_windows(s: &str) -> Result<Windows, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("bad window list {s:?}: {e}"))?;
    match parts.as_slice() {
        &[short, medium, long] => Ok(Windows {
            short,
            medium,
            long,
        }),
        _ => Err(format!(
            "expected three windows short,medium,long; got {s:?}"
        )),
    }
}

/// Options shared by every detector-running subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Input CSV with header `timestamp,value[,label]`.
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, default_value = "identity", value_parser = ["identity", "abs-diff", "abs_diff", "rolling-residual", "rolling_residual"])]
    pub scorer: String,

    /// Trailing window of the rolling-residual scorer.
    #[arg(long, default_value_t = 20)]
    pub scorer_window: usize,

    /// Seasonal differencing lag applied before scoring.
    #[arg(long)]
    pub seasonal_lag: Option<usize>,

    /// Training fraction for the baseline threshold and SCS segmentation.
    #[arg(long, default_value_t = 0.7)]
    pub split: f64,

    /// Percentile filter level, or `off`.
    #[arg(long, default_value = "off", value_parser = parse_filter)]
    pub filter_percentile: FilterSetting,

    #[arg(long, default_value_t = 0.99)]
    pub baseline_percentile: f64,

    /// K-means clusters for SCS.
    #[arg(long, default_value_t = 5)]
    pub n_segments: usize,

    #[arg(long, default_value_t = 10)]
    pub min_segment_length: usize,

    /// MACS windows as short,medium,long.
    #[arg(long, default_value = "50,100,500", value_parser = parse_windows)]
    pub windows: Windows,

    #[arg(long)]
    pub kmeans_window: Option<usize>,

    #[arg(long)]
    pub kmeans_stride: Option<usize>,

    /// Scale violations MACS requires during a regime shift.
    #[arg(long, default_value_t = 2)]
    pub violation_threshold: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl CommonArgs {
    pub fn run_config(&self, confidence_level: f64) -> RunConfig {
        let kind: ScorerKind = self.scorer.parse().expect("clap restricts scorer names");
        RunConfig {
            confidence_level,
            n_segments: self.n_segments,
            min_segment_length: self.min_segment_length,
            windows: self.windows,
            filter_percentile: self.filter_percentile.0,
            baseline_percentile: self.baseline_percentile,
            scorer: ScorerSpec {
                kind,
                window: self.scorer_window,
                seasonal_lag: self.seasonal_lag,
            },
            seed: self.seed,
            violation_threshold: self.violation_threshold,
            kmeans_window: self.kmeans_window,
            kmeans_stride: self.kmeans_stride,
            ..RunConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    #[arg(long)]
    pub method: Method,

    #[arg(long, default_value_t = 0.99)]
    pub confidence: f64,

    /// Report path.
    #[arg(long, default_value = "report.json")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Detectors to compare against the baseline.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "scs-apca,scs-kmeans,macs"
    )]
    pub methods: Vec<Method>,

    /// Confidence grid.
    #[arg(long, value_delimiter = ',', default_value = "0.99,0.95")]
    pub confidence: Vec<f64>,

    /// Worker threads; 1 runs sequentially, 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,

    #[arg(long, default_value = "report.json")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub n: usize,

    /// Regimes as `len:mean:std,...`; defaults to one standard-normal regime.
    #[arg(long)]
    pub regimes: Option<String>,

    #[arg(long, default_value_t = 0.01)]
    pub rate: f64,

    /// Anomaly size in regime standard deviations.
    #[arg(long, default_value_t = 6.0)]
    pub magnitude: f64,

    /// Optional level-shift burst as `start:len:offset`.
    #[arg(long)]
    pub burst: Option<String>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value = "synth.csv")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlotdataArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    #[arg(long)]
    pub method: Method,

    #[arg(long, default_value_t = 0.99)]
    pub confidence: f64,

    #[arg(long, default_value = "trace.csv")]
    pub output: PathBuf,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn filter_flag() {
        assert_eq!(parse_filter("off").unwrap().0, None);
        assert_eq!(parse_filter("0.99").unwrap().0, Some(0.99));
        assert!(parse_filter("high").is_err());
    }

    #[test]
    fn windows_flag() {
        let w = parse_windows("10,20,30").unwrap();
        assert_eq!(w.as_array(), [10, 20, 30]);
        assert!(parse_windows("10,20").is_err());
    }
}
