//! The evolutionary search loop.

mod checkpoint;
mod config;
mod mutate;
mod search;
mod select;

pub use checkpoint::{checkpoint_load, checkpoint_save, CheckpointError, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use config::{MutationWeights, SearchConfig};
pub use mutate::{mutate, MutationKind, Mutator, INT_IMM_RANGE};
pub use search::{
    config_hash, run_search, CheckpointPolicy, GenerationStats, Search, SearchError, SearchOutcome, SearchState,
};
pub use select::{run_tournament, selection_probabilities, temperature, tournament_select};
