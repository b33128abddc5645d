//! Shared inputs for the benchmarks under `benches/`.

use graphgen_core::evolution::{Mutator, SearchConfig};
use graphgen_core::{rng, Individual};

/// `count` programs, each grown from the empty program by `steps` random
/// mutations. Deterministic in `seed`.
pub fn mutated_population(count: usize, steps: usize, seed: u64) -> Vec<Individual> {
    let mutator = Mutator::new(&SearchConfig::default());
    let mut rng = rng::seeded(seed);
    (0..count)
        .map(|_| {
            let mut ind = Individual::empty();
            for _ in 0..steps {
                ind = mutator.mutate(&ind, &mut rng).0;
            }
            ind
        })
        .collect()
}
