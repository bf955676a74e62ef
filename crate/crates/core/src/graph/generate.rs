//! Seeded corpus generators: random DAGs, complete binary trees, and
//! planted-partition community graphs.

use rand::Rng;

use super::{Edge, Graph};
use crate::error::{Result, SpxError};
use crate::rng::{derive_seed, rng_from_seed};

pub const GENERATOR_RETRY_BUDGET: usize = 1000;

/// Random connected DAG with `round(density * n)` edges.
///
/// Vertex pairs are sampled uniformly; the directed edge is kept only if the
/// pair is not yet adjacent and the edge closes no cycle. A disconnected
/// result is discarded and the attempt repeated under the next derived seed.
pub fn generate_random_dag(n: usize, density: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(SpxError::InvalidArgument("random DAG needs n >= 2".into()));
    }
    if !(density.is_finite() && density > 0.0) {
        return Err(SpxError::InvalidArgument(format!("density must be positive, got {density}")));
    }
    let target = (density * n as f64).round() as usize;
    let max_edges = n * (n - 1) / 2;
    if target > max_edges {
        return Err(SpxError::InvalidArgument(format!(
            "{target} edges requested but a simple graph on {n} vertices has at most {max_edges}"
        )));
    }
    if target < n - 1 {
        return Err(SpxError::InvalidArgument(format!(
            "{target} edges cannot connect {n} vertices"
        )));
    }

    for attempt in 0..GENERATOR_RETRY_BUDGET {
        let mut rng = rng_from_seed(derive_seed(seed, &[attempt as u64]));
        let mut adjacent = vec![false; n * n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(target);
        // Any partial DAG extends to a transitive tournament, so sampling can
        // always finish; the cap only bounds pathological RNG streams.
        let sample_cap = 200 * n * n;
        let mut samples = 0;
        while edges.len() < target && samples < sample_cap {
            samples += 1;
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v || adjacent[u * n + v] {
                continue;
            }
            if reaches(&out, v, u) {
                continue;
            }
            adjacent[u * n + v] = true;
            adjacent[v * n + u] = true;
            out[u].push(v);
            edges.push(Edge::directed(u, v));
        }
        if edges.len() < target {
            continue;
        }
        let g = Graph::new(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(SpxError::GenerationFailed {
        attempts: GENERATOR_RETRY_BUDGET,
        reason: format!("no connected DAG with n={n}, density={density}"),
    })
}

fn reaches(out: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; out.len()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        for &w in &out[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}

/// Complete balanced binary tree of the given depth, edges directed from
/// parent to child. Vertex `i` has children `2i+1` and `2i+2`.
pub fn generate_binary_tree(depth: u32) -> Result<Graph> {
    if !(1..=20).contains(&depth) {
        return Err(SpxError::InvalidArgument(format!("tree depth must be in 1..=20, got {depth}")));
    }
    let n = (1usize << (depth + 1)) - 1;
    let edges = (1..n).map(|c| Edge::directed((c - 1) / 2, c)).collect();
    Graph::new(n, edges)
}

/// Planted-partition graph: vertices are split into `communities` contiguous
/// blocks of near-equal size; each pair is joined with probability `p_in`
/// inside a block and `p_out` across blocks. Regenerated until connected.
pub fn generate_community_graph(
    n: usize,
    communities: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<Graph> {
    if communities == 0 || communities > n {
        return Err(SpxError::InvalidArgument(format!(
            "need 1 <= communities <= n, got communities={communities}, n={n}"
        )));
    }
    for p in [p_in, p_out] {
        if !(0.0..=1.0).contains(&p) {
            return Err(SpxError::InvalidArgument(format!("probability {p} outside [0, 1]")));
        }
    }
    let block = |v: usize| v * communities / n;

    for attempt in 0..GENERATOR_RETRY_BUDGET {
        let mut rng = rng_from_seed(derive_seed(seed, &[attempt as u64]));
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let p = if block(i) == block(j) { p_in } else { p_out };
                if rng.random::<f64>() < p {
                    edges.push(Edge::undirected(i, j));
                }
            }
        }
        let g = Graph::new(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(SpxError::GenerationFailed {
        attempts: GENERATOR_RETRY_BUDGET,
        reason: format!("no connected community graph with p_in={p_in}, p_out={p_out}"),
    })
}
