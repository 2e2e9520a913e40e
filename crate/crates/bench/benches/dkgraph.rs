use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dkgraph::model1k::{fit_1k_with_table, psi_1k, table_1k, NaturalParams1K};
use dkgraph::model2k::{fit_2k_with_table, psi_2k, table_2k, Coordinates2K, NaturalParams2K};
use dkgraph::{
    enumerate, mc_degree_presence, mc_nonzero_count, ExperimentConfig, Graph, KeyKind, NewtonOptions,
    SequenceKind,
};

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    for n in [5, 6, 7] {
        g.bench_with_input(BenchmarkId::new("degree", n), &n, |b, &n| {
            b.iter(|| enumerate(n, KeyKind::DegreeVector, false).unwrap())
        });
    }
    g.bench_function("bidegree/6", |b| b.iter(|| enumerate(6, KeyKind::ScaledBiDegree, true).unwrap()));
    g.finish();
}

fn partition_function(c: &mut Criterion) {
    let t1 = table_1k(7).unwrap();
    let a1 = NaturalParams1K::new(7, vec![0.1, -0.2, 0.3, 0.0, 0.2, -0.1]).unwrap();
    c.bench_function("psi_1k/7", |b| b.iter(|| psi_1k(black_box(&a1), &t1).unwrap()));

    let t2 = table_2k(6).unwrap();
    let a2 = NaturalParams2K::new(6, Coordinates2K::Scaled, (0..14).map(|i| 0.05 * i as f64 - 0.3).collect()).unwrap();
    c.bench_function("psi_2k/6", |b| b.iter(|| psi_2k(black_box(&a2), &t2).unwrap()));
}

fn ring(n: usize, chords: &[(usize, usize)]) -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect();
    edges.extend_from_slice(chords);
    Graph::from_edges(n, &edges).unwrap()
}

fn fitting(c: &mut Criterion) {
    let obs = vec![
        ring(6, &[]),
        ring(6, &[(0, 3)]),
        ring(6, &[(0, 2), (1, 4)]),
        Graph::complete(6).unwrap(),
        ring(6, &[(0, 3), (1, 4), (2, 5)]),
    ];
    let t1 = table_1k(6).unwrap();
    c.bench_function("fit_1k/6", |b| {
        b.iter(|| fit_1k_with_table(black_box(&obs), &t1, None, NewtonOptions::default()).unwrap())
    });
    let t2 = table_2k(6).unwrap();
    c.bench_function("fit_2k/6", |b| {
        b.iter(|| fit_2k_with_table(black_box(&obs), &t2, Coordinates2K::Scaled, NewtonOptions::default()).unwrap())
    });
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(10);
    let config = ExperimentConfig {
        n_values: vec![201],
        trials: 100,
        seed: 1,
        sequence: SequenceKind::SqrtNLogN,
        c: 0.0,
    };
    g.bench_function("degree_presence/201x100", |b| b.iter(|| mc_degree_presence(&config).unwrap()));
    let config = ExperimentConfig { n_values: vec![400], ..config };
    g.bench_function("nonzero_count/400x100", |b| b.iter(|| mc_nonzero_count(&config).unwrap()));
    g.finish();
}

criterion_group!(benches, enumeration, partition_function, fitting, monte_carlo);
criterion_main!(benches);
