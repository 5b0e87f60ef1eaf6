use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stardecomp::gen::random_forest;
use stardecomp::{apply_rules, decompose, detect, mad_exact, star_color, star_color_forest, Family, Scheme};
use stardecomp_bench::instances;

const SIZES: [usize; 3] = [50, 200, 800];

fn bench_mad(c: &mut Criterion) {
    let mut group = c.benchmark_group("mad_exact");
    for n in SIZES {
        let graphs = instances(Family::L2, n, 4);
        group.bench_with_input(BenchmarkId::from_parameter(n), &graphs, |b, gs| {
            b.iter(|| gs.iter().map(|g| mad_exact(black_box(g)).unwrap().value).max())
        });
    }
    group.finish();
}

fn bench_detect(c: &mut Criterion) {
    let mut group = c.benchmark_group("detect");
    for family in Family::ALL {
        let graphs = instances(family, 200, 4);
        group.bench_with_input(BenchmarkId::from_parameter(family), &graphs, |b, gs| {
            b.iter(|| gs.iter().filter(|g| detect(black_box(g), family).is_some()).count())
        });
    }
    group.finish();
}

fn bench_discharge(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply_rules");
    for family in Family::ALL {
        let graphs = instances(family, 200, 4);
        group.bench_with_input(BenchmarkId::from_parameter(family), &graphs, |b, gs| {
            b.iter(|| {
                gs.iter()
                    .map(|g| apply_rules(black_box(g), family).transfers.len())
                    .sum::<usize>()
            })
        });
    }
    group.finish();
}

fn bench_decompose(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    group.sample_size(10);
    for family in Family::ALL {
        for n in [50, 200] {
            let graphs = instances(family, n, 4);
            let id = BenchmarkId::new(family.to_string(), n);
            group.bench_with_input(id, &graphs, |b, gs| {
                b.iter(|| {
                    for g in gs {
                        black_box(decompose(g, Scheme::for_family(family), true).unwrap());
                    }
                })
            });
        }
    }
    group.finish();
}

fn bench_color(c: &mut Criterion) {
    let mut group = c.benchmark_group("star_color");
    group.sample_size(10);
    let graphs = instances(Family::L3, 200, 4);
    group.bench_function("dispatch_L3_200", |b| {
        b.iter(|| {
            graphs
                .iter()
                .map(|g| star_color(black_box(g), false).unwrap().palette_size())
                .sum::<usize>()
        })
    });
    let forest = random_forest(1000, 1);
    group.bench_function("forest_1000", |b| {
        b.iter(|| star_color_forest(black_box(&forest)).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_mad,
    bench_detect,
    bench_discharge,
    bench_decompose,
    bench_color
);
criterion_main!(benches);
