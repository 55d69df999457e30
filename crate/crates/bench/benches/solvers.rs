use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};

use smd_bench::{params, zero_level_task};
use smd_core::detection::{estimate_pe, Estimator, ExactConditional, McSettings, Source};
use smd_core::engine::{exact_enumeration, magnetization_pmf_dp, mcmc_sample, ChainSettings, SamplerKind};
use smd_core::{build_graph, Boundary, GraphFamily};

fn bench(c: &mut Criterion) {
    c.bench_function("dp_chain_pmf_n1001", |b| {
        b.iter(|| magnetization_pmf_dp(GraphFamily::Chain, params(0.5, 0.3), black_box(1001)).unwrap())
    });
    c.bench_function("dp_wheel_pmf_n2001", |b| {
        b.iter(|| magnetization_pmf_dp(GraphFamily::Wheel, params(0.4, 0.1), black_box(2001)).unwrap())
    });

    let lattice = build_graph(GraphFamily::Lattice2D, 16, Boundary::Free).unwrap();
    c.bench_function("enumerate_lattice_4x4", |b| {
        b.iter(|| exact_enumeration(black_box(&lattice), params(0.4, 0.0)).unwrap())
    });

    c.bench_function("exact_conditional_table_n1001", |b| {
        b.iter(|| ExactConditional::new(black_box(1001), zero_level_task()).unwrap().table().unwrap())
    });

    let pmf = magnetization_pmf_dp(GraphFamily::Empty, params(0.0, 0.0), 1001).unwrap();
    c.bench_function("rb_gauss_n1001", |b| {
        b.iter(|| {
            estimate_pe(Source::Pmf(black_box(&pmf)), &zero_level_task(), Estimator::RbGauss, McSettings::default())
                .unwrap()
        })
    });

    let grid = build_graph(GraphFamily::Lattice2D, 32 * 32, Boundary::Free).unwrap();
    for (name, sampler, beta) in [
        ("metropolis_32x32_100_samples", SamplerKind::Metropolis, 0.3),
        ("wolff_32x32_100_samples", SamplerKind::Wolff, 0.5),
    ] {
        c.bench_function(name, |b| {
            b.iter(|| {
                let settings = ChainSettings {
                    count: 100,
                    burn_in: 50,
                    thin: 1,
                    seed: 3,
                };
                mcmc_sample(black_box(&grid), params(beta, 0.0), sampler, settings).unwrap()
            })
        });
    }
}

criterion_group! {
    name = benches;
    config = Criterion::default()
        .warm_up_time(Duration::from_millis(500))
        .measurement_time(Duration::from_secs(2))
        .sample_size(10);
    targets = bench
}
criterion_main!(benches);
