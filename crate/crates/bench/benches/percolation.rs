use backbend_bench::{origin_query, slab_query};
use backbend_core::reach::{Explorer, StopRule};
use backbend_core::{edge_uniform, reach_walk, EdgeConfig, EdgeKey, RngKey, Vertex};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn edge_hash(c: &mut Criterion) {
    let key = RngKey::new(42, 7);
    let lower = Vertex::new(&[3, -5, 11]).unwrap();
    let up = Vertex::new(&[4, -4, 12]).unwrap();
    let edge = EdgeKey::between(&lower, &up).unwrap();
    c.bench_function("edge_uniform_d3", |b| b.iter(|| edge_uniform(black_box(key), black_box(&edge))));
}

fn reach(c: &mut Criterion) {
    let mut group = c.benchmark_group("reach_walk");
    for (name, spec, p) in [("oriented", "const:0", 0.2873), ("backbend2", "const:2", 0.25), ("cyclic_0_5", "cyclic:0,5", 0.25)] {
        let q = origin_query(3, 24, spec);
        let cfg = EdgeConfig::new(RngKey::new(1, 3), q.window);
        group.bench_with_input(BenchmarkId::new(name, p), &p, |b, &p| b.iter(|| reach_walk(&q, &cfg, p).unwrap().len()));
    }
    group.finish();

    let q = slab_query(48, 3);
    let mut ex = Explorer::new(q.clone()).unwrap();
    let mut trial = 0;
    c.bench_function("slab_crossing_97x97x4", |b| {
        b.iter(|| {
            trial += 1;
            let cfg = EdgeConfig::new(RngKey::new(5, trial), q.window);
            let open = |e: &EdgeKey| cfg.uniform(e) < 0.29;
            ex.explore(&open, StopRule::AtFace { axis: 0, value: 47 }).stopped
        })
    });
}

criterion_group!(benches, edge_hash, reach);
criterion_main!(benches);
