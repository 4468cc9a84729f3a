use std::hint::black_box;

use confseg::detectors::{macs_detect, scs_detect, scs_fit};
use confseg::segmentation::{apca_segment, kmeans_segment, ApcaParams, KmeansParams};
use confseg::{RunConfig, SegmentationMethod};
use confseg_bench::regime_scores;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn macs(c: &mut Criterion) {
    let config = RunConfig::default();
    let mut g = c.benchmark_group("macs");
    g.sample_size(10);
    for n in [10_000, 100_000] {
        let s = regime_scores(n, 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| {
            b.iter(|| macs_detect(black_box(s), &config).unwrap())
        });
    }
    g.finish();
}

fn segmentation(c: &mut Criterion) {
    let mut g = c.benchmark_group("segmentation");
    for n in [2_000, 20_000] {
        let s = regime_scores(n, 2);
        g.bench_with_input(BenchmarkId::new("apca", n), &s, |b, s| {
            b.iter(|| apca_segment(black_box(s.scores()), &ApcaParams::default()).unwrap())
        });
        let params = KmeansParams::for_length(n, 5, 0);
        g.bench_with_input(BenchmarkId::new("kmeans", n), &s, |b, s| {
            b.iter(|| kmeans_segment(black_box(s.scores()), &params))
        });
    }
    g.finish();
}

fn scs(c: &mut Criterion) {
    let s = regime_scores(20_000, 3);
    let mut g = c.benchmark_group("scs");
    for method in [SegmentationMethod::Apca, SegmentationMethod::Kmeans] {
        let config = RunConfig {
            segmentation_method: method,
            ..RunConfig::default()
        };
        g.bench_function(format!("{method:?}").to_lowercase(), |b| {
            b.iter(|| {
                let model = scs_fit(black_box(&s), &config).unwrap();
                scs_detect(&s, &model)
            })
        });
    }
    g.finish();
}

criterion_group!(benches, macs, segmentation, scs);
criterion_main!(benches);
