//! Brute-force validators. Nothing here calls into the modules it checks.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::graph_store::{NodeId, OrientedGraph};
use crate::implicit_color::ColoringState;

/// Largest node count accepted by the subset-enumeration oracles.
pub const SUBSET_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} nodes exceed the subset-enumeration limit of {SUBSET_LIMIT}")]
    SizeLimit(usize),
    #[error("outdegree bound must be >= 2, got {0}")]
    CapTooSmall(usize),
}

/// Edges whose endpoints are both colored with the same color.
pub fn verify_proper(edges: &[(NodeId, NodeId)], colors: &[Option<u32>]) -> Vec<(NodeId, NodeId)> {
    edges
        .iter()
        .copied()
        .filter(|&(a, b)| match (colors[a.index()], colors[b.index()]) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        })
        .collect()
}

fn adjacency_masks(nodes: &[NodeId], edges: &[(NodeId, NodeId)]) -> Result<Vec<u32>, OracleError> {
    if nodes.len() > SUBSET_LIMIT {
        return Err(OracleError::SizeLimit(nodes.len()));
    }
    let bit: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = vec![0u32; nodes.len()];
    for (a, b) in edges {
        let (i, j) = (bit[a], bit[b]);
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    Ok(adj)
}

/// Max over non-empty node subsets of the minimum induced degree.
pub fn brute_degeneracy(
    nodes: &[NodeId],
    edges: &[(NodeId, NodeId)],
) -> Result<usize, OracleError> {
    let adj = adjacency_masks(nodes, edges)?;
    let k = nodes.len();
    let mut best = 0;
    for mask in 1u32..(1u32 << k) {
        let min_deg = (0..k)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| (adj[i] & mask).count_ones() as usize)
            .min()
            .unwrap();
        best = best.max(min_deg);
    }
    Ok(best)
}

/// Exact arboricity `max_S ceil(|E[S]| / (|S| - 1))` by subset enumeration.
pub fn nash_williams_lb(
    nodes: &[NodeId],
    edges: &[(NodeId, NodeId)],
) -> Result<usize, OracleError> {
    let adj = adjacency_masks(nodes, edges)?;
    let k = nodes.len();
    let mut best = 0;
    for mask in 1u32..(1u32 << k) {
        let size = mask.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let twice_edges: usize = (0..k)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| (adj[i] & mask).count_ones() as usize)
            .sum();
        best = best.max((twice_edges / 2).div_ceil(size - 1));
    }
    Ok(best)
}

/// Degeneracy of the graph on `0..n` by naive peeling: scan for a
/// minimum-degree node, delete it, repeat. Quadratic, for cross-checks on
/// graphs too large for subset enumeration.
pub fn peeling_degeneracy(n: usize, edges: &[(NodeId, NodeId)]) -> usize {
    let mut adj: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    for &(a, b) in edges {
        adj[a.index()].insert(b.index());
        adj[b.index()].insert(a.index());
    }
    let mut alive = vec![true; n];
    let mut best = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| adj[v].len())
            .unwrap();
        best = best.max(adj[v].len());
        alive[v] = false;
        let nbrs: Vec<usize> = adj[v].drain().collect();
        for w in nbrs {
            adj[w].remove(&v);
        }
    }
    best
}

/// `P(first recursion at the j-th processed in-arc)` for `j = 1..=6d`,
/// evaluated as the explicit product of tails followed by one head.
pub fn trigger_pmf_analytic(d: usize) -> Result<Vec<f64>, OracleError> {
    if d < 2 {
        return Err(OracleError::CapTooSmall(d));
    }
    Ok(trigger_pmf_for_threshold(6 * d))
}

/// Same product for an arbitrary threshold `t` (coins `1/(t+1-j)`).
pub fn trigger_pmf_for_threshold(t: usize) -> Vec<f64> {
    let heads = |j: usize| 1.0 / (t + 1 - j) as f64;
    (1..=t)
        .map(|j| {
            let survive: f64 = (1..j).map(|l| 1.0 - heads(l)).product();
            survive * heads(j)
        })
        .collect()
}

/// Rebuild the processed-arc set from colored-node membership and compare it
/// with the state's bookkeeping:
///
/// * a node's out-arcs are processed iff it is colored;
/// * every uncolored node's recorded processed in-arcs are exactly its
///   arcs from colored tails.
pub fn reconstruct_ap_invariant(state: &ColoringState, g: &OrientedGraph) -> bool {
    for v in g.nodes() {
        let colored = state.color_of(v).is_some();
        if state.out_arcs_processed(v) != colored {
            return false;
        }
        if colored {
            continue;
        }
        let mut expected: Vec<NodeId> = g
            .in_neighbors(v)
            .iter()
            .copied()
            .filter(|&t| state.color_of(t).is_some())
            .collect();
        let mut stored = state.processed_in(v).to_vec();
        expected.sort_unstable();
        stored.sort_unstable();
        if expected != stored {
            return false;
        }
    }
    true
}
