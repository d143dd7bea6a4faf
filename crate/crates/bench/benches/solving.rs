use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use satwl_bench::{bench_bases, gadget_pair, threshold_instance};
use satwl_core::gen::{build_cfi_pair, build_tseitin, make_3_regular, ChargeFunction};
use satwl_core::harness::{compute_rcrit, RcritOptions, Strategy};
use satwl_core::solver::{solve_embedded, Budget, SolverBackend};

fn bench_solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_embedded_threshold");
    group.sample_size(10);
    for n in [50u32, 75, 100] {
        let f = threshold_instance(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| solve_embedded(f, &Budget::UNLIMITED));
        });
    }
    group.finish();

    let mut group = c.benchmark_group("solve_embedded_gadget_pair");
    group.sample_size(10);
    for n in [8usize, 12] {
        let (plain, twisted) = gadget_pair(n);
        group.bench_with_input(
            BenchmarkId::from_parameter(n),
            &(plain, twisted),
            |b, (plain, twisted)| {
                b.iter(|| {
                    (
                        solve_embedded(plain, &Budget::UNLIMITED).verdict,
                        solve_embedded(twisted, &Budget::UNLIMITED).verdict,
                    )
                });
            },
        );
    }
    group.finish();
}

fn bench_generators(c: &mut Criterion) {
    c.bench_function("build_cfi_pair_petersen", |b| {
        let base = satwl_core::gen::BaseGraph::petersen();
        b.iter(|| build_cfi_pair(&base).unwrap());
    });
    c.bench_function("tseitin_over_bases", |b| {
        let bases = bench_bases();
        b.iter(|| {
            for g in &bases {
                std::hint::black_box(
                    build_tseitin(g, &ChargeFunction::zero(g.num_nodes())).unwrap(),
                );
            }
        });
    });
    c.bench_function("make_3_regular_n20", |b| {
        let f = threshold_instance(20);
        b.iter(|| make_3_regular(&f).unwrap());
    });
}

fn bench_rcrit(c: &mut Criterion) {
    let mut group = c.benchmark_group("compute_rcrit_threshold");
    group.sample_size(10);
    for n in [30u32, 60] {
        let f = threshold_instance(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| {
                compute_rcrit(
                    f,
                    &SolverBackend::embedded(),
                    &RcritOptions {
                        instance: "bench".into(),
                        strategy: Strategy::LinearScan,
                        ..Default::default()
                    },
                )
                .unwrap()
            });
        });
    }
    group.finish();
}

criterion_group!(benches, bench_solver, bench_generators, bench_rcrit);
criterion_main!(benches);
