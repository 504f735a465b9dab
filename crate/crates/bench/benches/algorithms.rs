use covert_bench::{er_graph, planted, small};
use covert_core::epsilon_net::{run_weighted_epsilon_net, EpsNetConfig};
use covert_core::netdiscovery::{offline_verification, run_network_discovery, VerificationMode};
use covert_core::pseudo_greedy::{run_pseudo_greedy, DEFAULT_ALPHA};
use covert_core::setsystem::{brute_force_min_cover, greedy_cover};
use covert_core::CovertOracle;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn set_cover(c: &mut Criterion) {
    let mut group = c.benchmark_group("set-cover");
    for k in [2, 8] {
        let sys = planted(1024, 256, k);
        group.bench_with_input(BenchmarkId::new("greedy", k), &sys, |b, sys| {
            b.iter(|| greedy_cover(black_box(sys), 1.0).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pseudo-greedy", k), &sys, |b, sys| {
            b.iter(|| {
                let mut o = CovertOracle::new(sys.clone());
                run_pseudo_greedy(&mut o, DEFAULT_ALPHA, 0).unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("epsnet", k), &sys, |b, sys| {
            b.iter(|| {
                let mut o = CovertOracle::new(sys.clone());
                run_weighted_epsilon_net(&mut o, &EpsNetConfig::default(), 0).unwrap()
            })
        });
    }
    group.finish();
}

fn brute_force(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute-force");
    for m in [12, 16, 20] {
        let sys = small(m);
        group.bench_with_input(BenchmarkId::from_parameter(m), &sys, |b, sys| {
            b.iter(|| brute_force_min_cover(black_box(sys)).unwrap())
        });
    }
    group.finish();
}

fn discovery(c: &mut Criterion) {
    let mut group = c.benchmark_group("discovery");
    for n in [12, 32, 64] {
        let g = er_graph(n);
        group.bench_with_input(BenchmarkId::new("online", n), &g, |b, g| {
            b.iter(|| run_network_discovery(black_box(g), DEFAULT_ALPHA, 0).unwrap())
        });
    }
    let g = er_graph(12);
    group.bench_function("exact-verification/12", |b| {
        b.iter(|| offline_verification(black_box(&g), VerificationMode::Exact).unwrap())
    });
    group.finish();
}

criterion_group!(benches, set_cover, brute_force, discovery);
criterion_main!(benches);
