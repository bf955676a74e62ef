//! Graph model, hop-count distances and structural predicates.

mod generate;

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpxError};

pub use generate::{
    generate_binary_tree, generate_community_graph, generate_random_dag, GENERATOR_RETRY_BUDGET,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub directed: bool,
}

impl Edge {
    pub fn undirected(source: usize, target: usize) -> Self {
        Edge {
            source,
            target,
            directed: false,
        }
    }

    pub fn directed(source: usize, target: usize) -> Self {
        Edge {
            source,
            target,
            directed: true,
        }
    }

    pub fn shares_endpoint(&self, other: &Edge) -> bool {
        self.source == other.source
            || self.source == other.target
            || self.target == other.source
            || self.target == other.target
    }

    fn key(&self) -> (usize, usize) {
        (self.source.min(self.target), self.source.max(self.target))
    }
}

/// A simple graph on dense 0-based vertex indices. Edges may individually
/// carry a direction flag; distances always ignore direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(SpxError::InvalidGraph("graph must have at least one vertex".into()));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for e in &edges {
            if e.source >= n || e.target >= n {
                return Err(SpxError::InvalidGraph(format!(
                    "edge ({}, {}) references a vertex outside 0..{n}",
                    e.source, e.target
                )));
            }
            if e.source == e.target {
                return Err(SpxError::InvalidGraph(format!("self-loop on vertex {}", e.source)));
            }
            if !seen.insert(e.key()) {
                return Err(SpxError::InvalidGraph(format!(
                    "duplicate edge between {} and {}",
                    e.source, e.target
                )));
            }
        }
        Ok(Graph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn directed_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| e.directed)
    }

    pub fn has_directed_edges(&self) -> bool {
        self.edges.iter().any(|e| e.directed)
    }

    /// Undirected adjacency lists, neighbors in ascending order.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.source].push(e.target);
            adj[e.target].push(e.source);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        bfs_hops(&self.adjacency(), 0).iter().all(|d| d.is_some())
    }

    /// Directed-subgraph topological order (Kahn, smallest index first), or
    /// `None` if the directed edges contain a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        let mut indeg = vec![0usize; self.n];
        for e in self.directed_edges() {
            out[e.source].push(e.target);
            indeg[e.target] += 1;
        }
        let mut ready: std::collections::BTreeSet<usize> =
            (0..self.n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }

    pub fn is_dag(&self) -> bool {
        self.topological_order().is_some()
    }

    /// All unordered pairs of edges with four distinct endpoints, ordered
    /// lexicographically by edge index.
    pub fn independent_edge_pairs(&self) -> Vec<(usize, usize)> {
        let m = self.edges.len();
        let mut pairs = Vec::new();
        for i in 0..m {
            for j in (i + 1)..m {
                if !self.edges[i].shares_endpoint(&self.edges[j]) {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }
}

fn bfs_hops(adj: &[Vec<usize>], source: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; adj.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v].unwrap();
        for &w in &adj[v] {
            if dist[w].is_none() {
                dist[w] = Some(dv + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Hop distances `d` and stress weights `w = d^-2`, both stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
    w: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds the matrix from raw distances; weights are derived as `d^-2`.
    pub fn from_distances(n: usize, d: Vec<f64>) -> Self {
        assert_eq!(d.len(), n * n);
        let w = d
            .iter()
            .map(|&x| if x > 0.0 { 1.0 / (x * x) } else { 0.0 })
            .collect();
        DistanceMatrix { n, d, w }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    #[inline]
    pub fn w(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    pub fn diameter(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }
}

/// Unweighted all-pairs shortest paths by one BFS per vertex, edge
/// directions ignored.
pub fn all_pairs_shortest_paths(g: &Graph) -> Result<DistanceMatrix> {
    let n = g.n();
    let adj = g.adjacency();
    let mut d = vec![0.0; n * n];
    for s in 0..n {
        for (t, hops) in bfs_hops(&adj, s).into_iter().enumerate() {
            match hops {
                Some(h) => d[s * n + t] = h as f64,
                None => return Err(SpxError::DisconnectedGraph(s.min(t), s.max(t))),
            }
        }
    }
    Ok(DistanceMatrix::from_distances(n, d))
}
