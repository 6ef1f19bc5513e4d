use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use diffbase::bounds::{best_bounds, clear_memo, Effort};
use diffbase::certify::check_certificate;
use diffbase::constructions::{quadratic_base, recursive_p_basis, singer_basis};
use diffbase::{min_difference_basis, GaloisRingSpec, SearchConfig, Target};
use diffbase_bench::{group, RINGS, SOLVER_GROUPS};

fn solver(c: &mut Criterion) {
    let mut g = c.benchmark_group("solver");
    g.sample_size(10);
    for name in SOLVER_GROUPS {
        let spec = group(name);
        g.bench_with_input(BenchmarkId::from_parameter(name), &spec, |b, spec| {
            b.iter(|| min_difference_basis(spec, &Target::Full, &SearchConfig::default()).unwrap())
        });
    }
    g.finish();
}

fn constructions(c: &mut Criterion) {
    let mut g = c.benchmark_group("constructions");
    for (p, k, r) in RINGS {
        let ring = GaloisRingSpec::new(p, k, r).unwrap();
        g.bench_with_input(BenchmarkId::new("quadratic", format!("{p}^{k},{r}")), &ring, |b, ring| {
            b.iter(|| quadratic_base(ring).unwrap())
        });
    }
    g.bench_function("singer/7", |b| b.iter(|| singer_basis(black_box(7)).unwrap()));
    let c3 = group("C3^4");
    g.bench_function("recursive/C3^4", |b| b.iter(|| recursive_p_basis(&c3).unwrap()));
    g.finish();
}

fn checker(c: &mut Criterion) {
    let cert = recursive_p_basis(&group("C3^6")).unwrap();
    c.bench_function("check/C3^6", |b| b.iter(|| check_certificate(black_box(&cert)).unwrap()));
}

fn bounds(c: &mut Criterion) {
    let g = group("C4^5");
    c.bench_function("bounds/C4^5", |b| {
        b.iter(|| {
            clear_memo();
            best_bounds(&g, Effort::WithConstructions)
        })
    });
}

criterion_group!(benches, solver, constructions, checker, bounds);
criterion_main!(benches);
