use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use satwl_bench::{gadget_pair, threshold_instance};
use satwl_core::graph::build_lcn;
use satwl_core::wl::{kwl_distinguish, wl_distinguish, wl_refine};

fn bench_refinement(c: &mut Criterion) {
    let mut group = c.benchmark_group("wl_refine_lcn");
    for n in [50u32, 100, 250, 500] {
        let lcn = build_lcn(&threshold_instance(n));
        group.bench_with_input(BenchmarkId::from_parameter(n), &lcn, |b, lcn| {
            b.iter(|| wl_refine(lcn, None));
        });
    }
    group.finish();
}

fn bench_distinguish(c: &mut Criterion) {
    let mut group = c.benchmark_group("wl_distinguish_gadget_pair");
    for n in [8usize, 16, 32] {
        let (plain, twisted) = gadget_pair(n);
        let pair = (build_lcn(&plain), build_lcn(&twisted));
        group.bench_with_input(BenchmarkId::from_parameter(n), &pair, |b, (ga, gb)| {
            b.iter(|| wl_distinguish(ga, gb));
        });
    }
    group.finish();
}

fn bench_kwl(c: &mut Criterion) {
    let mut group = c.benchmark_group("kwl_distinguish_gadget_pair");
    group.sample_size(10);
    let (plain, twisted) = gadget_pair(4);
    let (ga, gb) = (build_lcn(&plain), build_lcn(&twisted));
    for k in [2usize, 3] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| kwl_distinguish(&ga, &gb, k, Some(50_000_000)).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_refinement, bench_distinguish, bench_kwl);
criterion_main!(benches);
