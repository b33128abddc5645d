use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use graphgen_core::code::{deserialize, render_pseudocode, serialize};
use graphgen_core::data::{
    format_dataset, gen_grids, gen_lobsters, gen_paths, read_dataset, write_dataset, DataError, Dataset,
    DatasetRecord, LobsterParams,
};
use graphgen_core::evolution::{checkpoint_load, CheckpointError, CheckpointPolicy, GenerationStats, Search, SearchError};
use graphgen_core::exec::Memory;
use graphgen_core::fitness::Extractor;
use graphgen_core::metrics::eval_sets;
use graphgen_core::{rng, CodeLimits, Individual};

use crate::config::{Overrides, RunConfig, OUT_DIR_ENV};

/// How a command failed; decides the exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or malformed input files.
    Input(anyhow::Error),
    /// Anything else, including failed writes.
    Internal(anyhow::Error),
}

type CmdResult = Result<(), Failure>;

trait ResultExt<T> {
    fn input(self) -> Result<T, Failure>;
    fn internal(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> ResultExt<T> for Result<T, E> {
    fn input(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Input(e.into()))
    }

    fn internal(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Internal(e.into()))
    }
}

fn data_failure(e: DataError) -> Failure {
    match e {
        DataError::Io(_) => Failure::Internal(e.into()),
        _ => Failure::Input(e.into()),
    }
}

#[derive(Parser, Debug)]
#[command(name = "graphgen", version, about = "Search for programs that generate graph families")]
pub struct Cli {
    /// Worker threads for parallel work; 0 uses all cores
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a built-in dataset and its split sidecar
    Dataset(DatasetArgs),
    /// Evolve a program against a dataset
    Search(Box<SearchArgs>),
    /// Run a program once and write the graph in dataset format
    Run(RunArgs),
    /// Print a program as Python-like pseudocode
    Render(RenderArgs),
    /// Compare two graph sets with degree, clustering and spectral MMD
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
pub struct DatasetArgs {
    #[command(subcommand)]
    kind: DatasetKind,
    /// Seed for random generators
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Seed of the train/test shuffle
    #[arg(long, default_value_t = 0, global = true)]
    split_seed: u64,
    /// Output file [default: $GRAPHGEN_OUT_DIR/<kind>.txt]
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum DatasetKind {
    /// Every h x w grid with min <= h <= w <= max
    Grid {
        #[arg(long, default_value_t = 3)]
        min_side: usize,
        #[arg(long, default_value_t = 9)]
        max_side: usize,
        /// Attach the grid width as auxiliary input
        #[arg(long)]
        with_width: bool,
    },
    /// Random lobsters (caterpillar backbone with legs of length up to two)
    Lobster {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0.7)]
        p1: f64,
        #[arg(long, default_value_t = 0.7)]
        p2: f64,
        #[arg(long, default_value_t = 10)]
        min_nodes: usize,
        #[arg(long, default_value_t = 100)]
        max_nodes: usize,
    },
    /// Paths with a uniform node count
    Path {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        min_nodes: usize,
        #[arg(long, default_value_t = 30)]
        max_nodes: usize,
    },
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// TOML run configuration
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Continue from `checkpoint.json` in the output directory
    #[arg(long)]
    resume: bool,
    /// Suppress per-generation progress on stderr
    #[arg(short, long)]
    quiet: bool,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args, Debug)]
pub struct LimitArgs {
    #[arg(long, default_value_t = 12)]
    int_registers: usize,
    #[arg(long, default_value_t = 8)]
    bool_registers: usize,
    #[arg(long, default_value_t = 8)]
    float_registers: usize,
    #[arg(long, default_value_t = 50)]
    max_nodes: usize,
}

impl LimitArgs {
    fn limits(&self) -> CodeLimits {
        CodeLimits {
            int_regs: self.int_registers,
            bool_regs: self.bool_registers,
            float_regs: self.float_registers,
            max_nodes: self.max_nodes,
        }
    }
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Program file
    program: PathBuf,
    /// Node count N
    #[arg(short, long)]
    nodes: usize,
    /// Auxiliary inputs, comma separated (loaded into int03, int04, ...)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    aux: Vec<i64>,
    /// Seed of the program's random number stream
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file [default: stdout]
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    /// Program file
    program: PathBuf,
    /// Number of auxiliary inputs, used to name int03, int04, ...
    #[arg(long, default_value_t = 0)]
    aux_count: usize,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Reference dataset
    reference: PathBuf,
    /// Generated dataset
    generated: PathBuf,
    /// Also write the report as key=value lines
    #[arg(long)]
    kv: Option<PathBuf>,
}

pub fn dispatch(cli: Cli) -> CmdResult {
    if let Some(n) = cli.threads {
        init_threads(n)?;
    }
    match cli.command {
        Command::Dataset(a) => cmd_dataset(a),
        Command::Search(a) => cmd_search(*a, cli.threads.is_some()),
        Command::Run(a) => cmd_run(a),
        Command::Render(a) => cmd_render(a),
        Command::Eval(a) => cmd_eval(a),
    }
}

fn init_threads(n: usize) -> CmdResult {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("cannot configure the worker pool")
        .internal()
}

fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from)
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .internal()
}

fn cmd_dataset(a: DatasetArgs) -> CmdResult {
    let mut rng = rng::seeded(a.seed);
    let (name, ds) = match a.kind {
        DatasetKind::Grid {
            min_side,
            max_side,
            with_width,
        } => ("grid", gen_grids(min_side, max_side, with_width)),
        DatasetKind::Lobster {
            count,
            p1,
            p2,
            min_nodes,
            max_nodes,
        } => {
            let params = LobsterParams {
                p1,
                p2,
                min_nodes,
                max_nodes,
                ..LobsterParams::default()
            };
            ("lobster", gen_lobsters(count, &params, &mut rng))
        }
        DatasetKind::Path {
            count,
            min_nodes,
            max_nodes,
        } => ("path", gen_paths(count, min_nodes, max_nodes, &mut rng)),
    };
    let ds = ds.map_err(data_failure)?;
    let ds = Dataset::with_split_seed(ds.records, a.split_seed);
    let out = a.out.unwrap_or_else(|| default_out_dir().join(format!("{name}.txt")));
    write_dataset(&ds, &out).map_err(data_failure)?;
    println!("{} records written to {}", ds.len(), out.display());
    Ok(())
}

/// Datasets selectable by name in a run configuration.
pub fn builtin_dataset(name: &str) -> anyhow::Result<Dataset> {
    let mut rng = rng::seeded(0);
    let ds = match name {
        "grid" => gen_grids(3, 9, false)?,
        "grid-width" => gen_grids(3, 9, true)?,
        "lobster" => gen_lobsters(100, &LobsterParams::default(), &mut rng)?,
        "path" => gen_paths(100, 5, 30, &mut rng)?,
        _ => return Err(anyhow!("unknown builtin dataset `{name}` (expected grid, grid-width, lobster or path)")),
    };
    Ok(ds)
}

fn load_dataset(cfg: &RunConfig) -> Result<Dataset, Failure> {
    match (&cfg.dataset, &cfg.builtin) {
        (Some(path), _) => read_dataset(path)
            .with_context(|| format!("cannot load dataset {}", path.display()))
            .input(),
        (None, Some(name)) => builtin_dataset(name).input(),
        (None, None) => Err(Failure::Input(anyhow!("no dataset given"))),
    }
}

fn history_tsv(history: &[GenerationStats]) -> String {
    let mut out = String::from("generation\ttemperature\tbest_loss\tmean_loss\tbest_nodes\n");
    for s in history {
        let _ = writeln!(
            out,
            "{}\t{:e}\t{:e}\t{:e}\t{}",
            s.generation, s.temperature, s.best_loss, s.mean_loss, s.best_nodes
        );
    }
    out
}

fn cmd_search(a: SearchArgs, threads_set: bool) -> CmdResult {
    let mut cfg = match &a.config {
        Some(path) => RunConfig::load(path).input()?,
        None => RunConfig::default(),
    };
    a.overrides.apply(&mut cfg);
    cfg.validate().input()?;
    if !threads_set && cfg.threads > 0 {
        init_threads(cfg.threads)?;
    }

    let dataset = load_dataset(&cfg)?;
    let extractor = Extractor::new(cfg.extractor, cfg.gin_seed, cfg.readout);
    let search = Search::new(&cfg.search, &dataset, &extractor).map_err(|e| match e {
        SearchError::Config(_) | SearchError::EmptyDataset => Failure::Input(e.into()),
        SearchError::Checkpoint(_) => Failure::Internal(e.into()),
    })?;

    let out_dir = cfg.resolved_out_dir();
    fs::create_dir_all(&out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))
        .internal()?;
    let checkpoint = out_dir.join("checkpoint.json");

    let mut state = if a.resume {
        let state = checkpoint_load(&checkpoint, &cfg.search.limits())
            .with_context(|| format!("cannot resume from {}", checkpoint.display()))
            .input()?;
        search.check_state(&state).input()?;
        state
    } else {
        search.initial_state()
    };
    write_file(&out_dir.join("config.toml"), &cfg.to_toml())?;

    let policy = CheckpointPolicy {
        path: Some(checkpoint),
        interval: cfg.checkpoint_interval,
    };
    let quiet = a.quiet;
    search
        .run(&mut state, &policy, |s| {
            if !quiet && (s.generation % 100 == 0 || s.generation + 1 == cfg.search.max_generations) {
                eprintln!(
                    "generation {:>7}  T={:.4}  best={:.6e}  mean={:.6e}",
                    s.generation, s.temperature, s.best_loss, s.mean_loss
                );
            }
        })
        .map_err(|e| match e {
            SearchError::Checkpoint(CheckpointError::Io(_)) => Failure::Internal(e.into()),
            _ => Failure::Input(e.into()),
        })?;

    let outcome = search.outcome(&state);
    write_file(&out_dir.join("best.prog"), &serialize(&outcome.best))?;
    write_file(&out_dir.join("best.py"), &outcome.pseudocode)?;
    write_file(&out_dir.join("history.tsv"), &history_tsv(&outcome.history))?;
    match outcome.best_loss {
        Some(l) => println!("best loss {l:e} after {} generations", state.generation),
        None => println!("no generation evaluated; best program is empty"),
    }
    println!("results written to {}", out_dir.display());
    Ok(())
}

fn load_program(path: &Path, limits: &CodeLimits) -> Result<Individual, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read program {}", path.display()))
        .input()?;
    deserialize(&text, limits)
        .with_context(|| format!("invalid program {}", path.display()))
        .input()
}

fn cmd_run(a: RunArgs) -> CmdResult {
    let limits = a.limits.limits();
    let ind = load_program(&a.program, &limits)?;
    if a.aux.len() + 3 > limits.int_regs {
        return Err(Failure::Input(anyhow!(
            "{} auxiliary inputs do not fit in {} integer registers",
            a.aux.len(),
            limits.int_regs
        )));
    }
    let mut mem = Memory::new(&limits);
    let mut prng = rng::seeded(a.seed);
    mem.run(&ind, a.nodes, &a.aux, &mut prng);
    let text = format_dataset(&[DatasetRecord::new(mem.graph, a.aux)]);
    match a.out {
        Some(path) => write_file(&path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_render(a: RenderArgs) -> CmdResult {
    let ind = load_program(&a.program, &a.limits.limits())?;
    print!("{}", render_pseudocode(&ind, a.aux_count));
    Ok(())
}

fn cmd_eval(a: EvalArgs) -> CmdResult {
    let load = |p: &Path| {
        read_dataset(p)
            .with_context(|| format!("cannot load dataset {}", p.display()))
            .input()
    };
    let reference = load(&a.reference)?.graphs();
    let generated = load(&a.generated)?.graphs();
    if reference.is_empty() || generated.is_empty() {
        return Err(Failure::Input(anyhow!("both graph sets must be non-empty")));
    }
    let report = eval_sets(&reference, &generated);
    print!("{report}");
    if let Some(path) = &a.kv {
        write_file(path, &report.to_kv())?;
    }
    Ok(())
}
