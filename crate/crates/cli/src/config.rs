//! Run configuration: a TOML file overlaid by command-line flags.
//!
//! ```toml
//! dataset = "grids.txt"      # or: builtin = "path"
//! extractor = "gin"
//! gin_seed = 0
//! readout = "sum"
//! out_dir = "runs/grid"
//! checkpoint_interval = 100
//! threads = 4
//!
//! [search]
//! population_size = 1000
//! max_generations = 5000
//! seed = 1
//! ```
//!
//! Missing keys take their defaults; unknown keys are rejected.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use graphgen_core::evolution::SearchConfig;
use graphgen_core::fitness::{ExtractorKind, Readout};
use serde::{Deserialize, Serialize};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "GRAPHGEN_OUT_DIR";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Dataset file; takes precedence over `builtin`.
    pub dataset: Option<PathBuf>,
    /// Built-in dataset name: grid, grid-width, lobster or path.
    pub builtin: Option<String>,
    pub extractor: ExtractorKind,
    pub gin_seed: u64,
    pub readout: Readout,
    pub out_dir: Option<PathBuf>,
    /// Generations between checkpoints; 0 writes one only at the end.
    pub checkpoint_interval: u64,
    /// Worker threads for fitness evaluation; 0 uses all cores.
    pub threads: usize,
    pub search: SearchConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dataset: None,
            builtin: None,
            extractor: ExtractorKind::Gin,
            gin_seed: 0,
            readout: Readout::Sum,
            out_dir: None,
            checkpoint_interval: 100,
            threads: 0,
            search: SearchConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Output directory: config value, then the environment, then `out`.
    pub fn resolved_out_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn validate(&self) -> Result<()> {
        if self.dataset.is_none() && self.builtin.is_none() {
            bail!("no dataset given (set `dataset` or `builtin`)");
        }
        if let Err(e) = self.search.validate() {
            bail!("{e}");
        }
        Ok(())
    }
}

/// Flags that override single [`RunConfig`] fields.
#[derive(Args, Debug, Default, Clone)]
pub struct Overrides {
    /// Dataset file
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Built-in dataset: grid, grid-width, lobster, path
    #[arg(long)]
    pub builtin: Option<String>,
    /// Feature extractor: gin, degree_hist, clustering_hist, spectrum_hist
    #[arg(long)]
    pub extractor: Option<ExtractorKind>,
    #[arg(long)]
    pub gin_seed: Option<u64>,
    /// GIN readout: sum or mean
    #[arg(long)]
    pub readout: Option<Readout>,
    /// Output directory [env: GRAPHGEN_OUT_DIR]
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub checkpoint_interval: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,

    #[arg(long)]
    pub population_size: Option<usize>,
    #[arg(long)]
    pub tournament_size: Option<usize>,
    #[arg(long)]
    pub elite_count: Option<usize>,
    #[arg(long)]
    pub temperature_initial: Option<f64>,
    #[arg(long)]
    pub temperature_decay: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub max_nodes: Option<usize>,
    #[arg(long)]
    pub int_registers: Option<usize>,
    #[arg(long)]
    pub bool_registers: Option<usize>,
    #[arg(long)]
    pub float_registers: Option<usize>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub reg_weight: Option<f64>,
    #[arg(long)]
    pub rate_insertion: Option<f64>,
    #[arg(long)]
    pub rate_knockout: Option<f64>,
    #[arg(long)]
    pub rate_op_change: Option<f64>,
    #[arg(long)]
    pub rate_param_change: Option<f64>,
    #[arg(long)]
    pub rate_randomization: Option<f64>,
    #[arg(long)]
    pub rate_no_op: Option<f64>,
    #[arg(long)]
    pub if_insert_prob: Option<f64>,
    #[arg(long)]
    pub int_step_std: Option<f64>,
    #[arg(long)]
    pub float_step_std: Option<f64>,
    #[arg(long)]
    pub max_generations: Option<u64>,
    #[arg(long)]
    pub time_budget_secs: Option<f64>,
    /// Master seed of the search
    #[arg(long)]
    pub seed: Option<u64>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl Overrides {
    pub fn apply(self, cfg: &mut RunConfig) {
        if self.dataset.is_some() {
            cfg.builtin = None;
            cfg.dataset = self.dataset;
        }
        if self.builtin.is_some() {
            cfg.dataset = None;
            cfg.builtin = self.builtin;
        }
        set(&mut cfg.extractor, self.extractor);
        set(&mut cfg.gin_seed, self.gin_seed);
        set(&mut cfg.readout, self.readout);
        if self.out_dir.is_some() {
            cfg.out_dir = self.out_dir;
        }
        set(&mut cfg.checkpoint_interval, self.checkpoint_interval);
        set(&mut cfg.threads, self.threads);

        let s = &mut cfg.search;
        set(&mut s.population_size, self.population_size);
        set(&mut s.tournament_size, self.tournament_size);
        set(&mut s.elite_count, self.elite_count);
        set(&mut s.temperature_initial, self.temperature_initial);
        set(&mut s.temperature_decay, self.temperature_decay);
        set(&mut s.batch_size, self.batch_size);
        set(&mut s.max_nodes, self.max_nodes);
        set(&mut s.int_registers, self.int_registers);
        set(&mut s.bool_registers, self.bool_registers);
        set(&mut s.float_registers, self.float_registers);
        set(&mut s.sigma, self.sigma);
        set(&mut s.reg_weight, self.reg_weight);
        let w = &mut s.mutation_weights;
        set(&mut w.insertion, self.rate_insertion);
        set(&mut w.knockout, self.rate_knockout);
        set(&mut w.op_change, self.rate_op_change);
        set(&mut w.param_change, self.rate_param_change);
        set(&mut w.randomization, self.rate_randomization);
        set(&mut w.no_op, self.rate_no_op);
        set(&mut s.if_insert_prob, self.if_insert_prob);
        set(&mut s.int_step_std, self.int_step_std);
        set(&mut s.float_step_std, self.float_step_std);
        set(&mut s.max_generations, self.max_generations);
        if self.time_budget_secs.is_some() {
            s.time_budget_secs = self.time_budget_secs;
        }
        set(&mut s.seed, self.seed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let cfg = RunConfig {
            builtin: Some("path".into()),
            extractor: ExtractorKind::SpectrumHist,
            search: SearchConfig {
                seed: 7,
                time_budget_secs: Some(2.5),
                ..SearchConfig::default()
            },
            ..RunConfig::default()
        };
        let back: RunConfig = toml::from_str(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_file_uses_defaults_and_rejects_unknown_keys() {
        let cfg: RunConfig = toml::from_str("builtin = \"grid\"\n[search]\nseed = 3\n").unwrap();
        assert_eq!(cfg.search.seed, 3);
        assert_eq!(cfg.search.population_size, 1000);
        assert!(toml::from_str::<RunConfig>("bogus = 1\n").is_err());
        assert!(toml::from_str::<RunConfig>("[search]\nbogus = 1\n").is_err());
    }

    #[test]
    fn flags_override_file() {
        let mut cfg: RunConfig = toml::from_str("builtin = \"grid\"\n[search]\nseed = 3\nelite_count = 4\n").unwrap();
        Overrides {
            seed: Some(9),
            dataset: Some("d.txt".into()),
            rate_knockout: Some(5.0),
            ..Overrides::default()
        }
        .apply(&mut cfg);
        assert_eq!(cfg.search.seed, 9);
        assert_eq!(cfg.search.elite_count, 4);
        assert_eq!(cfg.search.mutation_weights.knockout, 5.0);
        assert_eq!((cfg.dataset.as_deref(), cfg.builtin.as_deref()), (Some(Path::new("d.txt")), None));
    }
}
