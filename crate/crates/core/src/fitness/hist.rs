//! Classical per-graph histograms: degree, local clustering, and spectrum of
//! the normalized Laplacian. Every histogram sums to 1 for a non-empty graph.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::graph::SparseGraph;

pub const CLUSTERING_BINS: usize = 100;
pub const SPECTRUM_BINS: usize = 200;

fn normalized(mut h: Vec<f64>, total: usize) -> Vec<f64> {
    if total > 0 {
        let t = total as f64;
        h.iter_mut().for_each(|x| *x /= t);
    }
    h
}

/// Degree frequencies `0..=max_degree(g)`. Shorter histograms compare as if
/// padded with zeros (see [`super::sq_distance`]).
pub fn degree_histogram(g: &SparseGraph) -> Vec<f64> {
    let degs = g.degrees();
    let max = degs.iter().copied().max().unwrap_or(0) as usize;
    let mut h = vec![0.0; max + 1];
    for &d in degs {
        h[d as usize] += 1.0;
    }
    normalized(h, degs.len())
}

/// Local clustering coefficient of every node (0 for degree below 2).
pub fn clustering_coefficients(g: &SparseGraph) -> Vec<f64> {
    let adj = g.adjacency();
    adj.iter()
        .map(|nbrs| {
            let d = nbrs.len();
            if d < 2 {
                return 0.0;
            }
            let mut links = 0usize;
            for (k, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[k + 1..] {
                    if g.is_edge(a as i64, b as i64) {
                        links += 1;
                    }
                }
            }
            2.0 * links as f64 / (d * (d - 1)) as f64
        })
        .collect()
}

/// Values within `1e-9` bin widths below an edge count as on the edge, so
/// round-off in eigenvalues does not move mass between bins.
fn bin(x: f64, lo: f64, hi: f64, bins: usize) -> usize {
    let k = ((x - lo) / (hi - lo) * bins as f64 + 1e-9).floor();
    (k.max(0.0) as usize).min(bins - 1)
}

pub fn clustering_histogram(g: &SparseGraph) -> Vec<f64> {
    let mut h = vec![0.0; CLUSTERING_BINS];
    let cc = clustering_coefficients(g);
    for &c in &cc {
        h[bin(c, 0.0, 1.0, CLUSTERING_BINS)] += 1.0;
    }
    normalized(h, cc.len())
}

/// Eigenvalues of `I - D^{-1/2} A D^{-1/2}` in ascending order. Isolated
/// nodes contribute a zero row and column, hence eigenvalue 0.
pub fn normalized_laplacian_spectrum(g: &SparseGraph) -> Vec<f64> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    let degs = g.degrees();
    let mut l = DMatrix::<f64>::zeros(n, n);
    for v in 0..n {
        if degs[v] > 0 {
            l[(v, v)] = 1.0;
        }
    }
    for (u, v) in g.edges() {
        let w = -1.0 / ((degs[u] as f64) * (degs[v] as f64)).sqrt();
        l[(u, v)] = w;
        l[(v, u)] = w;
    }
    let mut eig: Vec<f64> = SymmetricEigen::new(l).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

pub fn spectrum_histogram(g: &SparseGraph) -> Vec<f64> {
    let mut h = vec![0.0; SPECTRUM_BINS];
    let eig = normalized_laplacian_spectrum(g);
    for &x in &eig {
        h[bin(x, 0.0, 2.0, SPECTRUM_BINS)] += 1.0;
    }
    normalized(h, eig.len())
}
