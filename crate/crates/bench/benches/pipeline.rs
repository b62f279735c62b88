use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;

use pib_core::families::{ab_form, FamilyId, FamilyInstance};
use pib_core::oracle::check_routes;
use pib_core::pipeline::{run_instance, SearchBounds};
use pib_core::reduction::cubic_resolvent;
use pib_core::thue;
use pib_core::ElementTriple;

fn thue_solvers(c: &mut Criterion) {
    let one = BigInt::from(1);
    let inst = FamilyInstance::from_i64(FamilyId::X5, -24);
    let cubic = cubic_resolvent(&inst.problem());
    let quartic = ab_form(&inst).unwrap();
    let mut g = c.benchmark_group("thue");
    g.bench_function("cubic exact dispatch", |b| b.iter(|| thue::solve(black_box(&cubic), &one, 100).unwrap()));
    for bound in [100u64, 1000] {
        g.bench_with_input(BenchmarkId::new("quartic box", bound), &bound, |b, &n| {
            b.iter(|| thue::solve_bounded(black_box(&quartic), &one, n).unwrap())
        });
    }
    g.finish();
}

fn instances(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_instance");
    g.sample_size(10);
    for (id, t) in [(FamilyId::X2, 7), (FamilyId::X3, 5), (FamilyId::X4, 3), (FamilyId::X5, -24), (FamilyId::C4, 5)] {
        let inst = FamilyInstance::from_i64(id, t);
        g.bench_function(format!("{id} t={t}"), |b| b.iter(|| run_instance(black_box(&inst), SearchBounds::uniform(100))));
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let inst = FamilyInstance::from_i64(FamilyId::X5, 95);
    let e = ElementTriple::from_i64s([3, -2, 1]);
    c.bench_function("check_routes", |b| b.iter(|| check_routes(black_box(&inst.f), black_box(&e)).unwrap()));
}

criterion_group!(benches, thue_solvers, instances, oracle);
criterion_main!(benches);
