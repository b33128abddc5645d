//! Benchmark graph families, the dataset file format, train/test splits and
//! minibatch sampling.

mod generators;
mod io;

pub use generators::{gen_grids, gen_lobsters, gen_paths, grid_graph, LobsterParams};
pub use io::{format_dataset, parse_dataset, parse_split, read_dataset, split_path, write_dataset};

use rand::seq::{index, SliceRandom};
use rand::Rng;
use thiserror::Error;

use crate::graph::SparseGraph;
use crate::rng::{self, Prng};

/// Seed used for the train/test shuffle unless another is requested.
pub const DEFAULT_SPLIT_SEED: u64 = 0;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("bad split file: {0}")]
    Split(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetRecord {
    pub graph: SparseGraph,
    pub aux: Vec<i64>,
}

impl DatasetRecord {
    pub fn new(graph: SparseGraph, aux: Vec<i64>) -> Self {
        DatasetRecord { graph, aux }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitKind {
    Train,
    Test,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

impl Split {
    /// 80/20 partition from a seeded shuffle. A non-empty dataset always gets
    /// at least one training record.
    pub fn shuffled(len: usize, seed: u64) -> Self {
        let mut order: Vec<usize> = (0..len).collect();
        order.shuffle(&mut rng::seeded(seed));
        let n_train = if len == 0 { 0 } else { (len * 4 / 5).max(1) };
        let mut train = order[..n_train].to_vec();
        let mut test = order[n_train..].to_vec();
        train.sort_unstable();
        test.sort_unstable();
        Split { train, test }
    }

    pub fn get(&self, kind: SplitKind) -> &[usize] {
        match kind {
            SplitKind::Train => &self.train,
            SplitKind::Test => &self.test,
        }
    }

    /// Checks that the split is a partition of `0..len`.
    pub fn validate(&self, len: usize) -> Result<(), DataError> {
        let mut seen = vec![false; len];
        for &i in self.train.iter().chain(&self.test) {
            if i >= len {
                return Err(DataError::Split(format!("index {i} out of range for {len} records")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(DataError::Split(format!("index {i} listed twice")));
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(DataError::Split(format!("index {missing} missing")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dataset {
    pub records: Vec<DatasetRecord>,
    pub split: Split,
}

impl Dataset {
    /// Wraps records with the default 80/20 split.
    pub fn new(records: Vec<DatasetRecord>) -> Self {
        Self::with_split_seed(records, DEFAULT_SPLIT_SEED)
    }

    pub fn with_split_seed(records: Vec<DatasetRecord>, seed: u64) -> Self {
        let split = Split::shuffled(records.len(), seed);
        Dataset { records, split }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn graphs(&self) -> Vec<SparseGraph> {
        self.records.iter().map(|r| r.graph.clone()).collect()
    }

    pub fn split_records(&self, kind: SplitKind) -> Vec<&DatasetRecord> {
        self.split.get(kind).iter().map(|&i| &self.records[i]).collect()
    }
}

/// Indices into `ds.records` for one minibatch: `b` distinct records of the
/// split, or `b` draws with replacement if the split is smaller than `b`.
///
/// # Panics
/// If the requested split is empty.
pub fn sample_batch_indices(ds: &Dataset, kind: SplitKind, b: usize, rng: &mut Prng) -> Vec<usize> {
    let pool = ds.split.get(kind);
    assert!(!pool.is_empty(), "cannot sample from an empty split");
    if pool.len() >= b {
        index::sample(rng, pool.len(), b).into_iter().map(|i| pool[i]).collect()
    } else {
        (0..b).map(|_| pool[rng.random_range(0..pool.len())]).collect()
    }
}

pub fn sample_batch(ds: &Dataset, kind: SplitKind, b: usize, rng: &mut Prng) -> Vec<DatasetRecord> {
    sample_batch_indices(ds, kind, b, rng)
        .into_iter()
        .map(|i| ds.records[i].clone())
        .collect()
}
