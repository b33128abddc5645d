use graphgen_core::code::{deserialize, fixtures, render_pseudocode, serialize, Individual};
use graphgen_core::data::{format_dataset, gen_grids, gen_paths, parse_dataset, DatasetRecord};
use graphgen_core::evolution::{run_search, MutationKind, Mutator, SearchConfig};
use graphgen_core::exec::{interpret_individual, run_individual};
use graphgen_core::fitness::{Extractor, ExtractorKind, Readout};
use graphgen_core::metrics::eval_sets;
use graphgen_core::{rng, CodeLimits, Prng, SparseGraph};
use proptest::prelude::*;
use rand::Rng;

fn grow(seed: u64, size: usize, extra: usize) -> Individual {
    let mutator = Mutator::new(&SearchConfig::default());
    let mut r = rng::seeded(seed);
    let mut ind = Individual::empty();
    while ind.node_count() < size {
        mutator.apply(MutationKind::Insertion, &mut ind, &mut r);
    }
    for _ in 0..extra {
        let k = mutator.sample_kind(&mut r);
        mutator.apply(k, &mut ind, &mut r);
    }
    ind
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn program_text_round_trips(seed in any::<u64>(), size in 0usize..=50, extra in 0usize..20) {
        let ind = grow(seed, size, extra);
        let text = serialize(&ind);
        let back = deserialize(&text, &CodeLimits::default()).unwrap();
        prop_assert_eq!(&back, &ind);
        prop_assert_eq!(serialize(&back), text);
        prop_assert_eq!(render_pseudocode(&back, 1), render_pseudocode(&ind, 1));
    }

    #[test]
    fn vm_and_interpreter_agree(seed in any::<u64>(), size in 1usize..=50, n in 0usize..=30, w in 1i64..=9) {
        let ind = grow(seed, size, 5);
        let a = run_individual(&ind, n, &[w], &mut rng::seeded(seed));
        let b = interpret_individual(&ind, n, &[w], &mut rng::seeded(seed), &CodeLimits::default());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dataset_text_round_trips(seed in any::<u64>(), count in 1usize..8) {
        let mut r = rng::seeded(seed);
        let records: Vec<DatasetRecord> = (0..count)
            .map(|_| {
                let n = r.random_range(0..15usize);
                let edges: Vec<(usize, usize)> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .filter(|_| r.random_bool(0.3))
                    .collect();
                let aux = (0..r.random_range(0..3)).map(|_| r.random_range(0..20)).collect();
                DatasetRecord::new(SparseGraph::from_edges(n, edges), aux)
            })
            .collect();
        let text = format_dataset(&records);
        prop_assert_eq!(parse_dataset(&text).unwrap(), records);
    }
}

fn with_threads<T: Send>(n: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap().install(f)
}

#[test]
fn search_results_do_not_depend_on_thread_count() {
    let ds = gen_grids(3, 6, true).unwrap();
    let cfg = SearchConfig {
        population_size: 40,
        elite_count: 3,
        batch_size: 6,
        max_generations: 15,
        seed: 3,
        ..SearchConfig::default()
    };
    let extractor = Extractor::new(ExtractorKind::Gin, 0, Readout::Sum);
    let one = with_threads(1, || run_search(&cfg, &ds, &extractor).unwrap());
    let three = with_threads(3, || run_search(&cfg, &ds, &extractor).unwrap());
    assert_eq!(one.history, three.history);
    assert_eq!(one.best, three.best);
    assert_eq!(one.pseudocode, three.pseudocode);
}

#[test]
fn every_extractor_drives_a_search() {
    let ds = gen_paths(20, 4, 12, &mut rng::seeded(1)).unwrap();
    for kind in ExtractorKind::ALL {
        let cfg = SearchConfig {
            population_size: 20,
            elite_count: 2,
            batch_size: 4,
            max_generations: 5,
            ..SearchConfig::default()
        };
        let out = run_search(&cfg, &ds, &Extractor::new(kind, 0, Readout::Mean)).unwrap();
        assert_eq!(out.history.len(), 5, "{kind}");
        assert!(out.best_loss.unwrap().is_finite(), "{kind}");
        assert!(out.pseudocode.starts_with("def main():"));
    }
}

#[test]
fn lobster_program_output_is_a_forest_scored_by_metrics() {
    // Each node i > 0 gets one edge to a node below i (uniform(i) // 2), so
    // the result is a tree on N nodes.
    let ind = fixtures::lobster();
    let mut prng: Prng = rng::seeded(8);
    let graphs: Vec<SparseGraph> = (10..30).map(|n| run_individual(&ind, n, &[], &mut prng)).collect();
    for g in &graphs {
        assert!(g.edge_count() <= g.node_count().saturating_sub(1));
    }
    let report = eval_sets(&graphs, &graphs);
    assert!(report.values().iter().all(|(_, v)| v.abs() < 1e-12));
}
