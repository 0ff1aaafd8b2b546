//! Sequential vs rayon execution of the three data-parallel loops.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use drunk_games::abm::{init_population_with, step_population, AbmConfig, AgentStreams};
use drunk_games::basins::{estimate_attractiveness, linspace, sweep_g2_grid, McParams};
use drunk_games::{Execution, PayoffMatrix, Preset};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn basin(c: &mut Criterion) {
    let dg = Preset::PubDilemma.build();
    let mc = McParams::with_samples(200);
    let mut group = c.benchmark_group("basin_pub_dilemma_200");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| estimate_attractiveness(black_box(&dg), &mc, exec).unwrap())
        });
    }
    group.finish();
}

fn abm_round(c: &mut Criterion) {
    let dg = Preset::DrunkPrisoner { s: 0.4 }.build();
    let mut group = c.benchmark_group("abm_round");
    for n in [1_000usize, 10_000] {
        let cfg = AbmConfig {
            n,
            ..AbmConfig::default().with_heterogeneity(0.2)
        };
        let mut streams = AgentStreams::new(cfg.seed, n);
        let pop = init_population_with(&cfg, &mut streams).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &pop, |b, pop| {
                b.iter(|| step_population(pop, &dg, &cfg, &mut streams, exec))
            });
        }
    }
    group.finish();
}

fn small_sweep(c: &mut Criterion) {
    let g1 = PayoffMatrix::normalized(-1.0, 2.0).unwrap();
    let (s2, t2) = (linspace(-1.0, 1.0, 5), linspace(0.0, 2.0, 5));
    let mc = McParams::with_samples(20);
    let mut group = c.benchmark_group("sweep_5x5_20");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| sweep_g2_grid(&g1, &s2, &t2, &[1.0], &mc, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, basin, abm_round, small_sweep);
criterion_main!(benches);
