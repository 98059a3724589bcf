//! Criterion benchmarks: plane-sweep vs naive join, and sequential vs
//! parallel-seeded top-K mining on a generated benchmark dataset.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use stkm_core::{
    generate, mine_topk, naive_join, plane_sweep_join, GenConfig, MineConfig, NeighborhoodConfig,
    Shape, TypeId,
};

fn bench_dataset() -> (stkm_core::Dataset, NeighborhoodConfig) {
    let gen_cfg = GenConfig {
        pattern_len: 3,
        seed: 42,
        ..GenConfig::default()
    };
    let (data, _) = generate(&gen_cfg).expect("benchmark dataset");
    let neighborhood = NeighborhoodConfig::new(
        Shape::Cube,
        gen_cfg.spatial_radius,
        gen_cfg.temporal_interval,
    )
    .unwrap();
    (data, neighborhood)
}

fn join_benches(c: &mut Criterion) {
    let (data, cfg) = bench_dataset();
    let tail = data.instances_of_type(TypeId(0)).unwrap();
    let candidates = data.instances_of_type(TypeId(1)).unwrap();

    let mut group = c.benchmark_group("spatial_join");
    group.bench_function("plane_sweep", |b| {
        b.iter(|| plane_sweep_join(&data, black_box(tail), black_box(candidates), &cfg))
    });
    group.bench_function("naive", |b| {
        b.iter(|| naive_join(&data, black_box(tail), black_box(candidates), &cfg))
    });
    group.finish();
}

fn mining_benches(c: &mut Criterion) {
    let (data, neighborhood) = bench_dataset();
    let base = MineConfig::new(20, 3, neighborhood);

    let mut group = c.benchmark_group("mine_topk");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        let cfg = MineConfig {
            parallel: false,
            ..base.clone()
        };
        b.iter(|| mine_topk(black_box(&data), &cfg).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel_seeds", |b| {
        let cfg = MineConfig {
            parallel: true,
            ..base.clone()
        };
        b.iter(|| mine_topk(black_box(&data), &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, join_benches, mining_benches);
criterion_main!(benches);
