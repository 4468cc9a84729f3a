use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use confseg::detectors::Diagnostics;
use confseg::evaluation::delta_report;
use confseg::io::{read_csv, split_index, write_csv};
use confseg::report::{write_report, ConfigEcho, DetectionReport, FilterEcho};
use confseg::scoring::score;
use confseg::synth::{generate, parse_regimes, Burst, Regime, SynthSpec};
use confseg::{run_method, Error, LabelSeries, Method, MethodRun, RunConfig, ScoreSeries};
use rayon::prelude::*;

use crate::args::{CommonArgs, CompareArgs, DetectArgs, PlotdataArgs, SynthArgs};
use crate::CliError;

type CliResult<T> = Result<T, CliError>;

fn input(e: Error) -> CliError {
    CliError::Input(e.to_string())
}

fn internal(e: Error) -> CliError {
    CliError::Internal(e.to_string())
}

/// Validated configs, scores and labels shared by one invocation.
struct Prepared {
    scores: ScoreSeries,
    labels: Option<LabelSeries>,
    train_len: usize,
}

fn prepare(common: &CommonArgs, configs: &[RunConfig]) -> CliResult<Prepared> {
    for c in configs {
        c.validate().map_err(input)?;
    }
    let (series, labels) = read_csv(&common.input).map_err(input)?;
    if series.is_empty() {
        return Err(CliError::Input(format!(
            "{}: no data rows",
            common.input.display()
        )));
    }
    let train_len = split_index(series.len(), common.split).map_err(input)?;
    let scorer = &configs.first().expect("at least one config").scorer;
    let scores = score(&series.values(), scorer).map_err(input)?;
    Ok(Prepared {
        scores,
        labels,
        train_len,
    })
}

fn echo(common: &CommonArgs, config: &RunConfig, levels: Vec<f64>, scorer_id: &str) -> ConfigEcho {
    ConfigEcho {
        input: Some(common.input.display().to_string()),
        seed: common.seed,
        scorer: scorer_id.to_string(),
        split: common.split,
        confidence_levels: levels,
        filter: FilterEcho::from_setting(common.filter_percentile.0),
        run: config.clone(),
    }
}

pub fn detect(args: &DetectArgs) -> CliResult<String> {
    let config = args.common.run_config(args.confidence);
    let p = prepare(&args.common, std::slice::from_ref(&config))?;
    let run = run_method(args.method, &p.scores, &config, p.train_len).map_err(input)?;

    let mut methods = BTreeMap::new();
    methods.insert(run.key(), run.to_report(p.labels.as_ref()).map_err(input)?);
    let report = DetectionReport {
        config: echo(
            &args.common,
            &config,
            vec![args.confidence],
            p.scores.scorer_id(),
        ),
        methods,
        deltas: None,
    };
    write_report(&report, &args.output).map_err(internal)?;
    Ok(format!(
        "{}: {} anomalies in {} points (report: {})",
        run.key(),
        run.verdicts.anomaly_count(),
        run.verdicts.len(),
        args.output.display()
    ))
}

/// Baseline first, then every (confidence, method) pair in grid order.
fn compare_jobs(args: &CompareArgs) -> Vec<(Method, f64)> {
    let mut jobs = vec![(Method::Baseline, args.confidence[0])];
    for &c in &args.confidence {
        for &m in &args.methods {
            if m != Method::Baseline {
                jobs.push((m, c));
            }
        }
    }
    jobs
}

pub fn compare(args: &CompareArgs) -> CliResult<String> {
    if args.confidence.is_empty() {
        return Err(CliError::Input(
            "at least one confidence level is required".into(),
        ));
    }
    let configs: Vec<RunConfig> = args
        .confidence
        .iter()
        .map(|&c| args.common.run_config(c))
        .collect();
    let p = prepare(&args.common, &configs)?;
    let labels = p
        .labels
        .as_ref()
        .ok_or_else(|| CliError::Input("labels required: input has no label column".into()))?;

    let jobs = compare_jobs(args);
    let run_one = |&(method, c): &(Method, f64)| {
        run_method(method, &p.scores, &args.common.run_config(c), p.train_len)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let runs: Vec<MethodRun> = pool
        .install(|| jobs.par_iter().map(run_one).collect::<Result<_, _>>())
        .map_err(input)?;

    let mut methods = BTreeMap::new();
    let mut counts = BTreeMap::new();
    for run in &runs {
        let r = run.to_report(Some(labels)).map_err(input)?;
        counts.insert(run.key(), r.confusion.expect("labels present"));
        methods.insert(run.key(), r);
    }
    let baseline = counts[Method::Baseline.as_str()];
    let deltas =
        delta_report(counts.iter().map(|(k, c)| (k.as_str(), c)), &baseline).map_err(input)?;

    let report = DetectionReport {
        config: echo(
            &args.common,
            &configs[0],
            args.confidence.clone(),
            p.scores.scorer_id(),
        ),
        methods,
        deltas: Some(deltas.clone()),
    };
    write_report(&report, &args.output).map_err(internal)?;

    let mut summary = format!(
        "{:<24} {:>10} {:>10} {:>10} {:>10}",
        "method", "dAccuracy", "dPrecision", "dRecall", "dF1"
    );
    for run in &runs[1..] {
        let d = deltas[&run.key()];
        summary.push_str(&format!(
            "\n{:<24} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            run.key(),
            d.accuracy,
            d.precision,
            d.recall,
            d.f1
        ));
    }
    summary.push_str(&format!("\nreport: {}", args.output.display()));
    Ok(summary)
}

pub fn synth(args: &SynthArgs) -> CliResult<String> {
    let regimes = match &args.regimes {
        Some(s) => parse_regimes(s).map_err(input)?,
        None => vec![Regime {
            len: args.n,
            mean: 0.0,
            std: 1.0,
        }],
    };
    let burst = args
        .burst
        .as_deref()
        .map(str::parse::<Burst>)
        .transpose()
        .map_err(input)?;
    let spec = SynthSpec {
        n: args.n,
        regimes,
        anomaly_rate: args.rate,
        anomaly_magnitude_sigmas: args.magnitude,
        burst,
        seed: args.seed,
    };
    let (series, labels) = generate(&spec).map_err(input)?;
    write_csv(&args.output, &series, Some(&labels)).map_err(internal)?;
    Ok(format!(
        "wrote {} rows ({} labelled anomalous) to {}",
        series.len(),
        labels.anomalies(),
        args.output.display()
    ))
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:?}")).unwrap_or_default()
}

fn write_trace(path: &Path, scores: &ScoreSeries, run: &MethodRun) -> std::io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "index,score,lower,upper,flag")?;
    let threshold = match run.verdicts.diagnostics {
        Diagnostics::Baseline { threshold } => Some(threshold),
        _ => None,
    };
    for (i, &s) in scores.scores().iter().enumerate() {
        let band = run.verdicts.bands[i];
        let (lower, upper) = match band {
            Some(b) => (Some(b.lower), Some(b.upper)),
            None => (None, threshold),
        };
        writeln!(
            out,
            "{i},{s:?},{},{},{}",
            fmt_opt(lower),
            fmt_opt(upper),
            u8::from(run.verdicts.flagged[i])
        )?;
    }
    out.flush()
}

pub fn plotdata(args: &PlotdataArgs) -> CliResult<String> {
    let config = args.common.run_config(args.confidence);
    let p = prepare(&args.common, std::slice::from_ref(&config))?;
    let run = run_method(args.method, &p.scores, &config, p.train_len).map_err(input)?;
    write_trace(&args.output, &p.scores, &run)
        .map_err(|e| CliError::Internal(format!("{}: {e}", args.output.display())))?;
    Ok(format!(
        "{}: wrote {} trace rows to {}",
        run.key(),
        p.scores.len(),
        args.output.display()
    ))
}
