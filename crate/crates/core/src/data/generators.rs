use rand::Rng;

use super::{DataError, Dataset, DatasetRecord};
use crate::graph::SparseGraph;
use crate::rng::Prng;

/// Resampling attempts per lobster before giving up on the size window.
const MAX_ATTEMPTS: usize = 10_000;

/// `h` by `w` grid; node `r * w + c` sits in row `r`, column `c`.
pub fn grid_graph(h: usize, w: usize) -> SparseGraph {
    let mut g = SparseGraph::new(h * w);
    for r in 0..h {
        for c in 0..w {
            let v = (r * w + c) as i64;
            if c + 1 < w {
                g.add_edge(v, v + 1);
            }
            if r + 1 < h {
                g.add_edge(v, v + w as i64);
            }
        }
    }
    g
}

/// One grid per unordered side pair `min_side <= h <= w <= max_side`, ordered
/// by `h` then `w`. With `with_width` each record carries `aux = [w]`.
pub fn gen_grids(min_side: usize, max_side: usize, with_width: bool) -> Result<Dataset, DataError> {
    if min_side < 2 || min_side > max_side {
        return Err(DataError::InvalidParams(format!(
            "grid sides need 2 <= min ({min_side}) <= max ({max_side})"
        )));
    }
    let mut records = Vec::new();
    for h in min_side..=max_side {
        for w in h..=max_side {
            let aux = if with_width { vec![w as i64] } else { Vec::new() };
            records.push(DatasetRecord::new(grid_graph(h, w), aux));
        }
    }
    Ok(Dataset::new(records))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LobsterParams {
    pub p1: f64,
    pub p2: f64,
    pub min_nodes: usize,
    pub max_nodes: usize,
    pub min_backbone: usize,
    pub max_backbone: usize,
}

impl Default for LobsterParams {
    fn default() -> Self {
        LobsterParams {
            p1: 0.7,
            p2: 0.7,
            min_nodes: 10,
            max_nodes: 100,
            min_backbone: 5,
            max_backbone: 40,
        }
    }
}

fn lobster(p: &LobsterParams, rng: &mut Prng) -> SparseGraph {
    let backbone = rng.random_range(p.min_backbone..=p.max_backbone);
    let mut edges = Vec::new();
    for b in 1..backbone {
        edges.push((b - 1, b));
    }
    let mut next = backbone;
    for b in 0..backbone {
        for _ in 0..2 {
            if rng.random_bool(p.p1) {
                let child = next;
                next += 1;
                edges.push((b, child));
                for _ in 0..2 {
                    if rng.random_bool(p.p2) {
                        edges.push((child, next));
                        next += 1;
                    }
                }
            }
        }
    }
    SparseGraph::from_edges(next, edges)
}

pub fn gen_lobsters(count: usize, params: &LobsterParams, rng: &mut Prng) -> Result<Dataset, DataError> {
    let p = params;
    if count == 0 {
        return Err(DataError::InvalidParams("lobster count must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&p.p1) || !(0.0..=1.0).contains(&p.p2) {
        return Err(DataError::InvalidParams("lobster probabilities must lie in [0, 1]".into()));
    }
    if p.min_nodes > p.max_nodes || p.min_backbone < 1 || p.min_backbone > p.max_backbone {
        return Err(DataError::InvalidParams("lobster size bounds are inverted".into()));
    }
    let mut records = Vec::with_capacity(count);
    for _ in 0..count {
        let g = (0..MAX_ATTEMPTS)
            .map(|_| lobster(p, rng))
            .find(|g| (p.min_nodes..=p.max_nodes).contains(&g.node_count()))
            .ok_or_else(|| {
                DataError::InvalidParams(format!(
                    "no lobster within [{}, {}] nodes after {MAX_ATTEMPTS} attempts",
                    p.min_nodes, p.max_nodes
                ))
            })?;
        records.push(DatasetRecord::new(g, Vec::new()));
    }
    Ok(Dataset::new(records))
}

/// Paths `0 - 1 - ... - (n-1)` with `n` uniform in `[min_nodes, max_nodes]`.
pub fn gen_paths(count: usize, min_nodes: usize, max_nodes: usize, rng: &mut Prng) -> Result<Dataset, DataError> {
    if count == 0 || min_nodes == 0 || min_nodes > max_nodes {
        return Err(DataError::InvalidParams(format!(
            "paths need count >= 1 and 1 <= min ({min_nodes}) <= max ({max_nodes})"
        )));
    }
    let records = (0..count)
        .map(|_| {
            let n = rng.random_range(min_nodes..=max_nodes);
            DatasetRecord::new(SparseGraph::from_edges(n, (1..n).map(|v| (v - 1, v))), Vec::new())
        })
        .collect();
    Ok(Dataset::new(records))
}
