use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::checkpoint::{checkpoint_save, CheckpointError};
use super::{run_tournament, temperature, Mutator, SearchConfig};
use crate::code::{render_pseudocode, Individual};
use crate::data::{sample_batch_indices, Dataset, SplitKind};
use crate::exec::Memory;
use crate::fitness::{Extractor, LossConfig, ReferenceBatch};
use crate::rng::{self, Prng};

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("invalid search config: {0}")]
    Config(String),
    #[error("dataset has no training records")]
    EmptyDataset,
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
}

/// One line of the search log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: u64,
    pub temperature: f64,
    pub best_loss: f64,
    pub mean_loss: f64,
    pub best_nodes: usize,
}

#[derive(Clone, Debug)]
pub struct SearchState {
    /// Index of the generation `population` belongs to; it has not been
    /// scored yet.
    pub generation: u64,
    pub population: Vec<Individual>,
    /// Lowest loss seen so far, with its individual.
    pub best: Option<(Individual, f64)>,
    /// Coordinator stream: batch sampling, tournaments and mutation.
    pub rng: Prng,
    pub history: Vec<GenerationStats>,
    pub config_hash: String,
}

/// Digest of everything that influences a run except its length limits, so
/// a checkpoint can be resumed with a larger budget.
pub fn config_hash(cfg: &SearchConfig, extractor: &Extractor) -> String {
    let mut c = cfg.clone();
    c.max_generations = 0;
    c.time_budget_secs = None;
    let text = serde_json::to_string(&c).expect("config serializes");
    let digest = Sha256::new()
        .chain_update(text.as_bytes())
        .chain_update(b"|")
        .chain_update(extractor.fingerprint().as_bytes())
        .finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl SearchState {
    /// Generation 0: a population of empty programs.
    pub fn new(cfg: &SearchConfig, extractor: &Extractor) -> Self {
        SearchState {
            generation: 0,
            population: vec![Individual::empty(); cfg.population_size],
            best: None,
            rng: rng::coordinator(cfg.seed),
            history: Vec::new(),
            config_hash: config_hash(cfg, extractor),
        }
    }

    pub fn best_loss(&self) -> Option<f64> {
        self.best.as_ref().map(|(_, l)| *l)
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub best: Individual,
    /// `None` when no generation was scored.
    pub best_loss: Option<f64>,
    pub history: Vec<GenerationStats>,
    pub pseudocode: String,
}

/// Where and how often to checkpoint.
#[derive(Clone, Debug, Default)]
pub struct CheckpointPolicy {
    pub path: Option<PathBuf>,
    /// Save every this many generations; 0 saves only at the end.
    pub interval: u64,
}

/// A configured search over one dataset and feature map.
pub struct Search<'a> {
    cfg: &'a SearchConfig,
    dataset: &'a Dataset,
    extractor: &'a Extractor,
    mutator: Mutator,
    loss_cfg: LossConfig,
    hash: String,
}

impl<'a> Search<'a> {
    pub fn new(cfg: &'a SearchConfig, dataset: &'a Dataset, extractor: &'a Extractor) -> Result<Self, SearchError> {
        cfg.validate().map_err(SearchError::Config)?;
        if dataset.split.train.is_empty() {
            return Err(SearchError::EmptyDataset);
        }
        Ok(Search {
            cfg,
            dataset,
            extractor,
            mutator: Mutator::new(cfg),
            loss_cfg: cfg.loss_config(extractor.kind()),
            hash: config_hash(cfg, extractor),
        })
    }

    pub fn initial_state(&self) -> SearchState {
        SearchState::new(self.cfg, self.extractor)
    }

    /// Rejects a state produced under a different configuration.
    pub fn check_state(&self, state: &SearchState) -> Result<(), CheckpointError> {
        if state.config_hash != self.hash {
            return Err(CheckpointError::ConfigMismatch {
                expected: self.hash.clone(),
                found: state.config_hash.clone(),
            });
        }
        if state.population.len() != self.cfg.population_size {
            return Err(CheckpointError::Corrupt(format!(
                "population has {} individuals, config expects {}",
                state.population.len(),
                self.cfg.population_size
            )));
        }
        Ok(())
    }

    /// Losses of `population` on `batch`. Every individual starts from the
    /// evaluation stream `stream_id`, whatever the thread count.
    pub fn evaluate(&self, population: &[Individual], batch: &ReferenceBatch, stream_id: u64) -> Vec<f64> {
        let limits = self.cfg.limits();
        population
            .par_iter()
            .map_init(
                || Memory::new(&limits),
                |mem, ind| {
                    let mut r = rng::evaluation(self.cfg.seed, stream_id);
                    batch.loss(ind, self.extractor, &self.loss_cfg, &mut r, mem)
                },
            )
            .collect()
    }

    /// Draws this generation's batch, scores the population on it and
    /// replaces it with the next generation.
    pub fn step(&self, state: &mut SearchState) -> GenerationStats {
        let idx = sample_batch_indices(self.dataset, SplitKind::Train, self.cfg.batch_size, &mut state.rng);
        let records = idx.iter().map(|&i| self.dataset.records[i].clone()).collect();
        let batch = ReferenceBatch::new(records, self.extractor, &self.loss_cfg);
        let g = state.generation;
        self.step_with(state, &batch, g)
    }

    /// [`Search::step`] with a given batch and evaluation stream.
    pub fn step_with(&self, state: &mut SearchState, batch: &ReferenceBatch, stream_id: u64) -> GenerationStats {
        let g = state.generation;
        let losses = self.evaluate(&state.population, batch, stream_id);
        for (ind, &l) in state.population.iter_mut().zip(&losses) {
            ind.cached_loss = Some(l);
        }

        let mut order: Vec<usize> = (0..losses.len()).collect();
        order.sort_by(|&a, &b| losses[a].total_cmp(&losses[b]).then(a.cmp(&b)));
        let top = order[0];
        let t = temperature(g, self.cfg);
        let stats = GenerationStats {
            generation: g,
            temperature: t,
            best_loss: losses[top],
            mean_loss: losses.iter().sum::<f64>() / losses.len() as f64,
            best_nodes: state.population[top].node_count(),
        };
        if state.best_loss().is_none_or(|b| losses[top] < b) {
            state.best = Some((state.population[top].clone(), losses[top]));
        }

        let mut next: Vec<Individual> = order[..self.cfg.elite_count]
            .iter()
            .map(|&i| state.population[i].clone())
            .collect();
        while next.len() < self.cfg.population_size {
            let winner = run_tournament(&losses, self.cfg.tournament_size, t, &mut state.rng);
            next.push(self.mutator.mutate(&state.population[winner], &mut state.rng).0);
        }
        state.population = next;
        state.generation += 1;
        state.history.push(stats.clone());
        stats
    }

    /// Steps until the generation or wall-clock budget runs out, saving
    /// checkpoints per `policy`. `on_generation` sees every new log line.
    pub fn run(
        &self,
        state: &mut SearchState,
        policy: &CheckpointPolicy,
        mut on_generation: impl FnMut(&GenerationStats),
    ) -> Result<(), SearchError> {
        self.check_state(state)?;
        let start = Instant::now();
        let out_of_time = |start: &Instant| {
            self.cfg
                .time_budget_secs
                .is_some_and(|b| start.elapsed().as_secs_f64() >= b)
        };
        while state.generation < self.cfg.max_generations && !out_of_time(&start) {
            let stats = self.step(state);
            on_generation(&stats);
            if let Some(path) = &policy.path {
                if policy.interval > 0 && state.generation.is_multiple_of(policy.interval) {
                    checkpoint_save(state, path)?;
                }
            }
        }
        if let Some(path) = &policy.path {
            checkpoint_save(state, path)?;
        }
        Ok(())
    }

    pub fn outcome(&self, state: &SearchState) -> SearchOutcome {
        let (best, best_loss) = match &state.best {
            Some((ind, l)) => (ind.clone(), Some(*l)),
            None => (Individual::empty(), None),
        };
        let aux = self.dataset.records.iter().map(|r| r.aux.len()).max().unwrap_or(0);
        SearchOutcome {
            pseudocode: render_pseudocode(&best, aux),
            best,
            best_loss,
            history: state.history.clone(),
        }
    }
}

/// Runs a fresh search without checkpoints.
pub fn run_search(cfg: &SearchConfig, dataset: &Dataset, extractor: &Extractor) -> Result<SearchOutcome, SearchError> {
    let search = Search::new(cfg, dataset, extractor)?;
    let mut state = search.initial_state();
    search.run(&mut state, &CheckpointPolicy::default(), |_| {})?;
    Ok(search.outcome(&state))
}
