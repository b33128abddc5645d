use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use graphgen_bench::mutated_population;
use graphgen_core::code::fixtures;
use graphgen_core::data::{gen_grids, gen_lobsters, LobsterParams};
use graphgen_core::evolution::{Search, SearchConfig};
use graphgen_core::exec::{compile, interpret_individual, Memory};
use graphgen_core::fitness::{embed_graph, init_gin, spectrum_histogram, Extractor, ExtractorKind, Readout};
use graphgen_core::metrics::eval_sets;
use graphgen_core::{rng, CodeLimits};

fn bench_compile(c: &mut Criterion) {
    let grid = fixtures::grid();
    c.bench_function("compile/grid_fixture", |b| b.iter(|| compile(black_box(grid.main()))));
}

fn bench_exec(c: &mut Criterion) {
    let limits = CodeLimits::default();
    let ind = fixtures::grid_with_width();
    let mut group = c.benchmark_group("exec");
    for n in [16usize, 64, 256] {
        group.bench_with_input(BenchmarkId::new("vm", n), &n, |b, &n| {
            let mut mem = Memory::new(&limits);
            let mut prng = rng::seeded(0);
            b.iter(|| mem.run(&ind, n, &[8], &mut prng))
        });
        group.bench_with_input(BenchmarkId::new("interpreter", n), &n, |b, &n| {
            let mut prng = rng::seeded(0);
            b.iter(|| interpret_individual(&ind, n, &[8], &mut prng, &limits))
        });
    }
    group.finish();

    let pop = mutated_population(64, 30, 1);
    c.bench_function("exec/vm_random_programs_n32", |b| {
        let mut mem = Memory::new(&limits);
        let mut prng = rng::seeded(0);
        b.iter(|| {
            for ind in &pop {
                mem.run(ind, 32, &[], &mut prng);
            }
        })
    });
}

fn bench_features(c: &mut Criterion) {
    let gin = init_gin(0);
    let lobsters = gen_lobsters(32, &LobsterParams::default(), &mut rng::seeded(0)).unwrap();
    let graphs = lobsters.graphs();
    c.bench_function("features/gin_embed_32_lobsters", |b| {
        b.iter(|| graphs.iter().map(|g| embed_graph(&gin, g)).collect::<Vec<_>>())
    });
    c.bench_function("features/spectrum_32_lobsters", |b| {
        b.iter(|| graphs.iter().map(spectrum_histogram).collect::<Vec<_>>())
    });
    let grids = gen_grids(3, 9, false).unwrap().graphs();
    c.bench_function("metrics/grids_vs_lobsters", |b| b.iter(|| eval_sets(&grids, &graphs)));
}

fn bench_generation(c: &mut Criterion) {
    let ds = gen_grids(3, 9, true).unwrap();
    let cfg = SearchConfig {
        population_size: 64,
        ..SearchConfig::default()
    };
    let extractor = Extractor::new(ExtractorKind::Gin, 0, Readout::Sum);
    let search = Search::new(&cfg, &ds, &extractor).unwrap();
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("generation_pop64", |b| {
        let mut state = search.initial_state();
        state.population = mutated_population(64, 20, 2);
        b.iter(|| search.step(&mut state))
    });
    group.finish();
}

criterion_group!(benches, bench_compile, bench_exec, bench_features, bench_generation);
criterion_main!(benches);
