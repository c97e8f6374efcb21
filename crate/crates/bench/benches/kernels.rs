use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use mcentrality::{
    delta_d, efficiency_decline, kcore_decomposition, m_centrality, network_efficiency,
    rank_nodes, spreading_influence, EfficiencyNorm, Method, MethodParams, SirConfig,
    DEFAULT_TIE_EPSILON,
};
use mcentrality_bench::{dolphins, scale_free};

fn kshell_and_delta_d(c: &mut Criterion) {
    let mut group = c.benchmark_group("local");
    for n in [10_000, 100_000] {
        let g = scale_free(n, 4);
        group.bench_with_input(BenchmarkId::new("kcore", n), &g, |b, g| {
            b.iter(|| kcore_decomposition(black_box(g)))
        });
        group.bench_with_input(BenchmarkId::new("delta_d", n), &g, |b, g| {
            b.iter(|| delta_d(black_box(g)))
        });
        group.bench_with_input(BenchmarkId::new("m_centrality", n), &g, |b, g| {
            b.iter(|| m_centrality(black_box(g), None).unwrap())
        });
    }
    group.finish();
}

fn baselines(c: &mut Criterion) {
    let g = scale_free(5_000, 3);
    let params = MethodParams::default();
    let mut group = c.benchmark_group("baselines");
    for m in Method::ALL {
        group.bench_function(m.name(), |b| b.iter(|| m.compute(black_box(&g), &params).unwrap()));
    }
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let g = dolphins();
    let m = m_centrality(&g, None).unwrap();
    let order = rank_nodes(&m.scores, DEFAULT_TIE_EPSILON).order;
    c.bench_function("efficiency/dolphins", |b| {
        b.iter(|| network_efficiency(black_box(&g)).unwrap())
    });
    c.bench_function("attack/dolphins_15", |b| {
        b.iter(|| efficiency_decline(black_box(&g), &order, 15, EfficiencyNorm::Residual).unwrap())
    });
    let cfg = SirConfig::new(0.15, 100, 1).unwrap();
    c.bench_function("sir/dolphins_100_runs", |b| {
        b.iter(|| spreading_influence(black_box(&g), &cfg).unwrap())
    });
}

criterion_group!(benches, kshell_and_delta_d, baselines, evaluation);
criterion_main!(benches);
