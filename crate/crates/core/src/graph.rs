//! Sparse undirected graph storage.
//!
//! Edges are kept as a hash set of index pairs `(u, v)` with `u < v`, i.e. the
//! strictly upper triangle of the adjacency matrix. All mutating operations
//! accept arbitrary signed indices because the VM feeds them raw register
//! contents: an out-of-range or diagonal pair is silently ignored, and reads of
//! such pairs return `false`.

use std::collections::HashSet;

#[derive(Clone, Debug, Default)]
pub struct SparseGraph {
    node_count: usize,
    edges: HashSet<(u32, u32)>,
    degrees: Vec<u32>,
}

impl SparseGraph {
    pub fn new(node_count: usize) -> Self {
        assert!(node_count <= u32::MAX as usize, "node count exceeds u32 range");
        SparseGraph {
            node_count,
            edges: HashSet::new(),
            degrees: vec![0; node_count],
        }
    }

    /// Builds a graph from an edge list, applying the same tolerance rules as
    /// [`SparseGraph::add_edge`].
    pub fn from_edges<I>(node_count: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = SparseGraph::new(node_count);
        for (u, v) in edges {
            g.add_edge(u as i64, v as i64);
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Drops all edges and resizes to `node_count` nodes, keeping allocations.
    pub fn reset(&mut self, node_count: usize) {
        assert!(node_count <= u32::MAX as usize, "node count exceeds u32 range");
        self.node_count = node_count;
        self.edges.clear();
        self.degrees.clear();
        self.degrees.resize(node_count, 0);
    }

    #[inline]
    fn key(&self, u: i64, v: i64) -> Option<(u32, u32)> {
        let n = self.node_count as i64;
        if u == v || u < 0 || v < 0 || u >= n || v >= n {
            return None;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        Some((a as u32, b as u32))
    }

    pub fn add_edge(&mut self, u: i64, v: i64) {
        if let Some(k) = self.key(u, v) {
            if self.edges.insert(k) {
                self.degrees[k.0 as usize] += 1;
                self.degrees[k.1 as usize] += 1;
            }
        }
    }

    pub fn remove_edge(&mut self, u: i64, v: i64) {
        if let Some(k) = self.key(u, v) {
            if self.edges.remove(&k) {
                self.degrees[k.0 as usize] -= 1;
                self.degrees[k.1 as usize] -= 1;
            }
        }
    }

    pub fn flip_edge(&mut self, u: i64, v: i64) {
        if let Some(k) = self.key(u, v) {
            if self.edges.remove(&k) {
                self.degrees[k.0 as usize] -= 1;
                self.degrees[k.1 as usize] -= 1;
            } else {
                self.edges.insert(k);
                self.degrees[k.0 as usize] += 1;
                self.degrees[k.1 as usize] += 1;
            }
        }
    }

    pub fn is_edge(&self, u: i64, v: i64) -> bool {
        self.key(u, v).is_some_and(|k| self.edges.contains(&k))
    }

    /// Degree of `u`, or 0 when `u` is out of range.
    pub fn degree(&self, u: i64) -> usize {
        if u < 0 || u as usize >= self.node_count {
            return 0;
        }
        self.degrees[u as usize] as usize
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| (u as usize, v as usize))
            .collect();
        out.sort_unstable();
        out
    }

    /// Sorted neighbor lists for every node.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj: Vec<Vec<usize>> = self
            .degrees
            .iter()
            .map(|&d| Vec::with_capacity(d as usize))
            .collect();
        for (u, v) in self.edges() {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> SparseGraph {
        assert_eq!(perm.len(), self.node_count);
        SparseGraph::from_edges(
            self.node_count,
            self.edges().into_iter().map(|(u, v)| (perm[u], perm[v])),
        )
    }
}

impl PartialEq for SparseGraph {
    fn eq(&self, other: &Self) -> bool {
        self.node_count == other.node_count && self.edges == other.edges
    }
}

impl Eq for SparseGraph {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn add_is_symmetric() {
        let mut g = SparseGraph::new(5);
        g.add_edge(3, 1);
        assert!(g.is_edge(1, 3));
        assert!(g.is_edge(3, 1));
        assert_eq!(g.edges(), vec![(1, 3)]);
    }

    #[test]
    fn self_loops_and_out_of_range_are_ignored() {
        let mut g = SparseGraph::new(5);
        g.add_edge(2, 2);
        assert_eq!(g.edge_count(), 0);
        g.add_edge(7, 1);
        assert_eq!(g.edge_count(), 0);
        g.add_edge(-1, 0);
        assert_eq!(g.edge_count(), 0);
        g.flip_edge(5, 5);
        assert_eq!(g.edge_count(), 0);
        assert!(!g.is_edge(9, 2));
        assert!(!g.is_edge(-3, 2));
    }

    #[test]
    fn remove_inverts_add() {
        let mut g = SparseGraph::new(4);
        g.add_edge(0, 1);
        g.remove_edge(1, 0);
        assert!(!g.is_edge(0, 1));
        let before = g.clone();
        g.remove_edge(2, 3);
        g.remove_edge(-1, 0);
        assert_eq!(g, before);
    }

    #[test]
    fn flip_is_an_involution() {
        let mut g = SparseGraph::new(5);
        g.flip_edge(2, 4);
        assert!(g.is_edge(2, 4));
        g.flip_edge(0, 1);
        g.flip_edge(1, 0);
        assert_eq!(g.edges(), vec![(2, 4)]);
    }

    #[test]
    fn degrees() {
        let path = SparseGraph::from_edges(3, [(0, 1), (1, 2)]);
        assert_eq!(path.degree(1), 2);
        assert_eq!(path.degree(9), 0);
        let isolated = SparseGraph::new(2);
        assert_eq!(isolated.degree(0), 0);

        // 3x3 grid, row-major: the center node 4 touches 1, 3, 5 and 7.
        let mut grid = SparseGraph::new(9);
        for r in 0..3i64 {
            for c in 0..3i64 {
                if c + 1 < 3 {
                    grid.add_edge(r * 3 + c, r * 3 + c + 1);
                }
                if r + 1 < 3 {
                    grid.add_edge(r * 3 + c, (r + 1) * 3 + c);
                }
            }
        }
        assert_eq!(grid.degree(4), 4);
        assert_eq!(grid.adjacency()[4], vec![1, 3, 5, 7]);
    }

    #[derive(Clone, Copy, Debug)]
    enum Op {
        Add,
        Remove,
        Flip,
    }

    fn op_strategy() -> impl Strategy<Value = (Op, i64, i64)> {
        (
            prop_oneof![Just(Op::Add), Just(Op::Remove), Just(Op::Flip)],
            -3i64..70,
            -3i64..70,
        )
    }

    proptest! {
        #[test]
        fn matches_dense_oracle(n in 1usize..=64, ops in prop::collection::vec(op_strategy(), 0..300)) {
            let mut g = SparseGraph::new(n);
            let mut dense = vec![vec![false; n]; n];
            for (op, u, v) in ops {
                match op {
                    Op::Add => g.add_edge(u, v),
                    Op::Remove => g.remove_edge(u, v),
                    Op::Flip => g.flip_edge(u, v),
                }
                let valid = u >= 0 && v >= 0 && (u as usize) < n && (v as usize) < n && u != v;
                if valid {
                    let (a, b) = (u.min(v) as usize, u.max(v) as usize);
                    dense[a][b] = match op {
                        Op::Add => true,
                        Op::Remove => false,
                        Op::Flip => !dense[a][b],
                    };
                }
            }
            let mut expected = Vec::new();
            for (a, row) in dense.iter().enumerate() {
                for (b, &set) in row.iter().enumerate() {
                    if set {
                        expected.push((a, b));
                    }
                }
            }
            prop_assert_eq!(g.edges(), expected);
            let degree_sum: usize = (0..n as i64).map(|u| g.degree(u)).sum();
            prop_assert_eq!(degree_sum, 2 * g.edge_count());
            for (u, v) in g.edges() {
                prop_assert!(u < v && v < n);
            }
        }
    }
}
