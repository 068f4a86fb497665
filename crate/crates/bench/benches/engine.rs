use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use fintopo::harness::{enumerate_preorders, random_space, run_battery, BatteryOptions};
use fintopo::measure::gamma_mu;
use fintopo::space::fixtures;
use fintopo::{kappa_bounded, Canonical, Condition, PointMeasure, SpaceRef, SubcollectionIndex};

const BOUND: usize = 24;

fn spaces() -> Vec<(&'static str, SpaceRef)> {
    vec![
        ("S2", fixtures::s2().into_ref()),
        ("D3", fixtures::d3().into_ref()),
        ("Q4", fixtures::q4().into_ref()),
        ("R5", random_space(5, 7).unwrap().into_ref()),
    ]
}

fn kappa(c: &mut Criterion) {
    let mut group = c.benchmark_group("kappa");
    for (name, s) in spaces() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, s| {
            b.iter(|| kappa_bounded(black_box(s), BOUND).unwrap())
        });
    }
    group.finish();
}

fn fixed_points(c: &mut Criterion) {
    let mut group = c.benchmark_group("gfp");
    for (name, s) in spaces() {
        group.bench_with_input(BenchmarkId::new("canonical", name), &s, |b, s| {
            b.iter(|| Canonical::compute(black_box(s), BOUND).unwrap())
        });
    }
    let d3 = fixtures::d3().into_ref();
    let kap = kappa_bounded(&d3, 16).unwrap();
    let idx = SubcollectionIndex::new(&kap).unwrap();
    group.bench_function("engine_all_masks_D3", |b| {
        b.iter(|| {
            (0..=idx.all())
                .step_by(97)
                .map(|m| idx.gfp(m, Condition::Splittable).count_ones())
                .sum::<u32>()
        })
    });
    group.finish();
}

fn battery(c: &mut Criterion) {
    let mut group = c.benchmark_group("battery");
    group.sample_size(10);
    let opts = BatteryOptions { threads: Some(1), ..Default::default() };
    for (name, s) in spaces().into_iter().take(3) {
        group.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, s| {
            b.iter(|| run_battery(black_box(s), &opts))
        });
    }
    let small: Vec<SpaceRef> = enumerate_preorders(3, true)
        .unwrap()
        .into_iter()
        .map(|s| s.into_ref())
        .collect();
    group.bench_function("n3_up_to_iso", |b| {
        b.iter(|| small.iter().map(|s| run_battery(s, &opts).claims.len()).sum::<usize>())
    });
    group.finish();
}

fn measures(c: &mut Criterion) {
    let mu = PointMeasure::from_integers(fixtures::q4().into_ref(), &[1, 2, 4, 7]).unwrap();
    c.bench_function("gamma_mu_Q4", |b| b.iter(|| gamma_mu(black_box(&mu)).is_self_splittable()));
}

criterion_group!(benches, kappa, fixed_points, battery, measures);
criterion_main!(benches);
