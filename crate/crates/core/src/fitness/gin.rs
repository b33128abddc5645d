//! Untrained graph isomorphism network used as a fixed feature map.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::SparseGraph;
use crate::rng;

pub const GIN_ROUNDS: usize = 3;
pub const GIN_DIM: usize = 35;
/// Degrees are clamped to `GIN_INPUT_DIM - 1` before one-hot encoding.
pub const GIN_INPUT_DIM: usize = 20;

pub type Embedding = Vec<f64>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Readout {
    #[default]
    Sum,
    Mean,
}

impl Readout {
    pub fn name(self) -> &'static str {
        match self {
            Readout::Sum => "sum",
            Readout::Mean => "mean",
        }
    }
}

impl std::str::FromStr for Readout {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(Readout::Sum),
            "mean" => Ok(Readout::Mean),
            _ => Err(format!("unknown readout `{s}` (expected sum or mean)")),
        }
    }
}

/// Two bias-free layers with a rectifier in between.
#[derive(Clone, Debug, PartialEq)]
pub struct GinLayer {
    pub w1: DMatrix<f64>,
    pub w2: DMatrix<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GinParams {
    pub seed: u64,
    pub readout: Readout,
    pub layers: Vec<GinLayer>,
}

fn glorot(rows: usize, cols: usize, rng: &mut rng::Prng) -> DMatrix<f64> {
    let a = (6.0 / (rows + cols) as f64).sqrt();
    DMatrix::from_fn(rows, cols, |_, _| a * (2.0 * rng.random::<f64>() - 1.0))
}

/// Weights drawn uniformly from `[-a, a]`, `a = sqrt(6 / (fan_in + fan_out))`.
pub fn init_gin(seed: u64) -> GinParams {
    let mut r = rng::seeded(seed);
    let layers = (0..GIN_ROUNDS)
        .map(|k| {
            let input = if k == 0 { GIN_INPUT_DIM } else { GIN_DIM };
            let w1 = glorot(GIN_DIM, input, &mut r);
            let w2 = glorot(GIN_DIM, GIN_DIM, &mut r);
            GinLayer { w1, w2 }
        })
        .collect();
    GinParams {
        seed,
        readout: Readout::Sum,
        layers,
    }
}

impl GinParams {
    pub fn with_readout(mut self, readout: Readout) -> Self {
        self.readout = readout;
        self
    }

    /// `(rows, cols)` of every weight matrix, layer by layer.
    pub fn shapes(&self) -> Vec<[(usize, usize); 2]> {
        self.layers.iter().map(|l| [l.w1.shape(), l.w2.shape()]).collect()
    }
}

/// Graph embedding. Node states start as one-hot clamped degrees; each round
/// adds the neighbour sum scaled by `1/sqrt(max(deg, 1))` to the node's own
/// state and applies the round's MLP. The readout pools final node states.
pub fn embed_graph(gin: &GinParams, g: &SparseGraph) -> Embedding {
    let n = g.node_count();
    if n == 0 {
        return vec![0.0; GIN_DIM];
    }
    let adj = g.adjacency();
    let mut h = DMatrix::<f64>::zeros(GIN_INPUT_DIM, n);
    for (v, nbrs) in adj.iter().enumerate() {
        h[(nbrs.len().min(GIN_INPUT_DIM - 1), v)] = 1.0;
    }
    for layer in &gin.layers {
        let mut x = h.clone();
        for (v, nbrs) in adj.iter().enumerate() {
            if nbrs.is_empty() {
                continue;
            }
            let norm = (nbrs.len() as f64).sqrt();
            for d in 0..h.nrows() {
                let mut s = 0.0;
                for &u in nbrs {
                    s += h[(d, u)];
                }
                x[(d, v)] += s / norm;
            }
        }
        let mut z = &layer.w1 * x;
        z.apply(|e| *e = e.max(0.0));
        h = &layer.w2 * z;
    }
    let mut out: Embedding = (0..GIN_DIM).map(|d| h.row(d).iter().sum()).collect();
    if gin.readout == Readout::Mean {
        out.iter_mut().for_each(|e| *e /= n as f64);
    }
    out
}
