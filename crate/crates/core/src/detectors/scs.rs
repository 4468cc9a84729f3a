use serde::{Deserialize, Serialize};

use super::{apply_filter, filter_threshold, Diagnostics, Verdicts};
use crate::bounds::band_from_stats;
use crate::error::{Error, Result};
use crate::model::{ConfidenceBand, RunConfig, ScoreSeries, Segment, SegmentationMethod};
use crate::segmentation::{apca_segment, build_segments, kmeans_segment, ApcaParams, KmeansParams};
use crate::stats::RollingStats;

/// Fitted segmented confidence sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScsModel {
    pub segments: Vec<Segment>,
    pub confidence_level: f64,
    pub filter_percentile: Option<f64>,
    pub filter_threshold: Option<f64>,
    /// Most recent scores of the last segment, seeding the streaming update.
    tail: Vec<f64>,
    /// Points retained when a segment band is updated online.
    stream_capacity: usize,
}

impl ScsModel {
    /// Length of the fitted range.
    pub fn fitted_len(&self) -> usize {
        self.segments.last().map_or(0, |s| s.end)
    }

    /// Online continuation for points past the fitted range.
    pub fn stream(&self) -> ScsStream {
        let last = self.segments.last().expect("fitted model has segments");
        let mut buffer = RollingStats::new(self.stream_capacity);
        for &s in &self.tail {
            buffer.push(s);
        }
        ScsStream {
            band: last.band,
            buffer,
            confidence_level: self.confidence_level,
            filter_threshold: self.filter_threshold,
            segment_id: self.segments.len() - 1,
        }
    }

    fn segment_of(&self, index: usize, hint: &mut usize) -> usize {
        while *hint + 1 < self.segments.len() && !self.segments[*hint].contains(index) {
            *hint += 1;
        }
        *hint
    }
}

/// Streaming state for points assigned to the final segment.
///
/// Each point is judged against the current band, then appended; the band
/// is recomputed over the most recent `stream_capacity` scores.
#[derive(Debug, Clone)]
pub struct ScsStream {
    band: ConfidenceBand,
    buffer: RollingStats,
    confidence_level: f64,
    filter_threshold: Option<f64>,
    segment_id: usize,
}

impl ScsStream {
    pub fn band(&self) -> ConfidenceBand {
        self.band
    }

    /// Returns `(raw, final)` for `score` and folds it into the band.
    pub fn push(&mut self, score: f64) -> (bool, bool) {
        let raw = self.band.violated_by(score);
        let pass = self.filter_threshold.map_or(true, |th| score > th);
        self.buffer.push(score);
        self.band = band_from_stats(self.buffer.mean(), self.buffer.std(), self.confidence_level);
        (raw, raw && pass)
    }
}

/// Segments the scores and fits one band per segment.
pub fn scs_fit(scores: &ScoreSeries, config: &RunConfig) -> Result<ScsModel> {
    config.validate()?;
    let values = scores.scores();
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let ranges = match config.segmentation_method {
        SegmentationMethod::Apca => apca_segment(
            values,
            &ApcaParams::with_min_segment_length(config.min_segment_length),
        )?,
        SegmentationMethod::Kmeans => {
            let mut params = KmeansParams::for_length(values.len(), config.n_segments, config.seed);
            params.min_segment_length = config.min_segment_length;
            if let Some(w) = config.kmeans_window {
                params.window = w;
                params.stride = (w / 2).max(1);
            }
            if let Some(s) = config.kmeans_stride {
                params.stride = s.min(params.window);
            }
            kmeans_segment(values, &params)
        }
    };
    let segments = build_segments(values, &ranges, config.confidence_level);

    let stream_capacity = 10 * config.min_segment_length;
    let last = ranges.last().expect("segmentation covers the series");
    let tail_start = last.end - last.len().min(stream_capacity);
    Ok(ScsModel {
        segments,
        confidence_level: config.confidence_level,
        filter_percentile: config.filter_percentile,
        filter_threshold: filter_threshold(values, config.filter_percentile)?,
        tail: values[tail_start..last.end].to_vec(),
        stream_capacity,
    })
}

/// Judges each score against its segment's band. Indices past the fitted
/// range continue the final segment through [`ScsStream`].
pub fn scs_detect(scores: &ScoreSeries, model: &ScsModel) -> Verdicts {
    let values = scores.scores();
    let n = values.len();
    let fitted = model.fitted_len().min(n);

    let mut raw = Vec::with_capacity(n);
    let mut bands = Vec::with_capacity(n);
    let mut segment_ids = Vec::with_capacity(n);
    let mut hint = 0;
    for (t, &s) in values[..fitted].iter().enumerate() {
        let id = model.segment_of(t, &mut hint);
        let band = model.segments[id].band;
        raw.push(band.violated_by(s));
        bands.push(Some(band));
        segment_ids.push(id);
    }

    let mut stream = model.stream();
    for &s in &values[fitted..] {
        bands.push(Some(stream.band()));
        let (r, _) = stream.push(s);
        raw.push(r);
        segment_ids.push(stream.segment_id);
    }

    Verdicts::compose(
        raw,
        apply_filter(values, model.filter_threshold),
        bands,
        model.filter_threshold,
        Diagnostics::Scs { segment_ids },
    )
}
