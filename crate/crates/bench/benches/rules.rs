//! Wall-clock benchmarks for the four delegation rules. The polynomial rules
//! are scaled over voter counts; the exact rule over (small) delegator
//! counts, which drive its exponential term.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tld_bench::{bounded_wait, caster_heavy, delegation_heavy};
use tld_core::{
    solve_confluent, solve_exact_tc_confluent, solve_tc_retrospective, solve_tc_walks,
};

fn static_rule(c: &mut Criterion) {
    let mut group = c.benchmark_group("confluent");
    for n in [16, 64, 256] {
        let g = delegation_heavy(n, 6, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| black_box(solve_confluent(g)))
        });
    }
    group.finish();
}

fn backward_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("tc-retro");
    for n in [16, 64, 256] {
        let g = delegation_heavy(n, 6, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| black_box(solve_tc_retrospective(g)))
        });
    }
    group.finish();
}

fn walk_rule(c: &mut Criterion) {
    let mut group = c.benchmark_group("tc-walks");
    for n in [16, 64, 256] {
        let g = bounded_wait(n, 6, 2, 11);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| black_box(solve_tc_walks(g, 2).expect("common bound holds")))
        });
    }
    group.finish();
}

fn exact_rule(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact");
    group.sample_size(20);
    for n in [8, 12, 16] {
        let g = caster_heavy(n, 4, 2);
        let delegators = g.classify().delegating.len();
        let id = BenchmarkId::from_parameter(format!("n{n}-d{delegators}"));
        group.bench_with_input(id, &g, |b, g| {
            b.iter(|| black_box(solve_exact_tc_confluent(g).expect("under the cap")))
        });
    }
    group.finish();
}

criterion_group!(rules, static_rule, backward_sweep, walk_rule, exact_rule);
criterion_main!(rules);
