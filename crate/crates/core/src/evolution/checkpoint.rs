//! Resumable search snapshots.
//!
//! A checkpoint is a JSON object:
//!
//! ```text
//! { "format": "graphgen-checkpoint", "version": 1, "config_hash": "<sha256>",
//!   "generation": 50, "rng": {...}, "population": [{"program": "...", "loss": 0.1}],
//!   "best": {...} | null, "history": [...] }
//! ```
//!
//! Programs are stored in their canonical text form. Floats are written with
//! enough digits to read back bit-exactly.

use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::search::{GenerationStats, SearchState};
use crate::code::{deserialize, serialize, CodeLimits, Individual};
use crate::rng::PrngState;

pub const CHECKPOINT_FORMAT: &str = "graphgen-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint I/O failed: {0}")]
    Io(#[from] io::Error),
    #[error("corrupt checkpoint: {0}")]
    Corrupt(String),
    #[error("checkpoint version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u64, expected: u32 },
    #[error("checkpoint was written with a different configuration ({found}, expected {expected})")]
    ConfigMismatch { expected: String, found: String },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    program: String,
    loss: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckpointFile {
    format: String,
    version: u32,
    config_hash: String,
    generation: u64,
    rng: PrngState,
    population: Vec<Entry>,
    best: Option<Entry>,
    history: Vec<GenerationStats>,
}

fn entry(ind: &Individual, loss: Option<f64>) -> Entry {
    Entry {
        program: serialize(ind),
        loss,
    }
}

/// Writes `state` to `path` through a temporary file and a rename.
pub fn checkpoint_save(state: &SearchState, path: &Path) -> Result<(), CheckpointError> {
    let file = CheckpointFile {
        format: CHECKPOINT_FORMAT.to_string(),
        version: CHECKPOINT_VERSION,
        config_hash: state.config_hash.clone(),
        generation: state.generation,
        rng: PrngState::capture(&state.rng),
        population: state.population.iter().map(|i| entry(i, i.cached_loss)).collect(),
        best: state.best.as_ref().map(|(i, l)| entry(i, Some(*l))),
        history: state.history.clone(),
    };
    let text = serde_json::to_string(&file).map_err(|e| CheckpointError::Corrupt(e.to_string()))?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn program(e: &Entry, limits: &CodeLimits) -> Result<Individual, CheckpointError> {
    let mut ind = deserialize(&e.program, limits).map_err(|err| CheckpointError::Corrupt(format!("bad program: {err}")))?;
    ind.cached_loss = e.loss;
    Ok(ind)
}

/// Reads a checkpoint; programs are validated against `limits`.
pub fn checkpoint_load(path: &Path, limits: &CodeLimits) -> Result<SearchState, CheckpointError> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CheckpointError::Corrupt(e.to_string()))?;
    if value.get("format").and_then(|f| f.as_str()) != Some(CHECKPOINT_FORMAT) {
        return Err(CheckpointError::Corrupt("not a checkpoint file".into()));
    }
    match value.get("version").and_then(|v| v.as_u64()) {
        Some(v) if v == CHECKPOINT_VERSION as u64 => {}
        Some(v) => {
            return Err(CheckpointError::VersionMismatch {
                found: v,
                expected: CHECKPOINT_VERSION,
            })
        }
        None => return Err(CheckpointError::Corrupt("missing version".into())),
    }
    let file: CheckpointFile = serde_json::from_value(value).map_err(|e| CheckpointError::Corrupt(e.to_string()))?;
    let rng = file
        .rng
        .restore()
        .ok_or_else(|| CheckpointError::Corrupt("bad generator state".into()))?;
    let population = file
        .population
        .iter()
        .map(|e| program(e, limits))
        .collect::<Result<Vec<_>, _>>()?;
    let best = match &file.best {
        Some(e) => {
            let loss = e.loss.ok_or_else(|| CheckpointError::Corrupt("best entry lacks a loss".into()))?;
            Some((program(e, limits)?, loss))
        }
        None => None,
    };
    Ok(SearchState {
        generation: file.generation,
        population,
        best,
        rng,
        history: file.history,
        config_hash: file.config_hash,
    })
}
