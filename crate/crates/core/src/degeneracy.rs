//! Smallest-last (Matula–Beck) ordering.
//!
//! Repeatedly removes a node of minimum remaining degree using a bucket queue
//! of intrusive doubly linked lists. The minimum bucket index drops by at most
//! one per removal, so the whole pass is `O(n + m)`.

use std::collections::HashMap;

use crate::graph_store::{Arc, NodeId};

const NIL: u32 = u32::MAX;

/// Removal order of a smallest-last pass and the degeneracy it certifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyOrder {
    pub order: Vec<NodeId>,
    pub degeneracy: usize,
}

impl DegeneracyOrder {
    /// Position of every node in `order`.
    pub fn positions(&self) -> HashMap<NodeId, usize> {
        self.order
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect()
    }
}

/// Compressed adjacency over local indices `0..n`.
#[derive(Clone, Debug, Default)]
pub(crate) struct LocalGraph {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl LocalGraph {
    pub(crate) fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut offsets = vec![0u32; n + 1];
        for &(a, b) in edges {
            offsets[a as usize + 1] += 1;
            offsets[b as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; 2 * edges.len()];
        for &(a, b) in edges {
            targets[fill[a as usize] as usize] = b;
            fill[a as usize] += 1;
            targets[fill[b as usize] as usize] = a;
            fill[b as usize] += 1;
        }
        LocalGraph { offsets, targets }
    }

    pub(crate) fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    #[inline]
    pub(crate) fn neighbors(&self, v: u32) -> &[u32] {
        let lo = self.offsets[v as usize] as usize;
        let hi = self.offsets[v as usize + 1] as usize;
        &self.targets[lo..hi]
    }

    /// Removal order and degeneracy. Ties within a bucket go to the most
    /// recently demoted node; initially the smallest index is on top.
    pub(crate) fn smallest_last(&self) -> (Vec<u32>, usize) {
        let n = self.len();
        if n == 0 {
            return (Vec::new(), 0);
        }
        let mut deg: Vec<u32> = (0..n as u32)
            .map(|v| self.neighbors(v).len() as u32)
            .collect();
        let max_deg = *deg.iter().max().unwrap() as usize;
        let mut head = vec![NIL; max_deg + 1];
        let mut next = vec![NIL; n];
        let mut prev = vec![NIL; n];
        let mut removed = vec![false; n];

        let push = |head: &mut [u32], next: &mut [u32], prev: &mut [u32], d: usize, v: u32| {
            let h = head[d];
            next[v as usize] = h;
            prev[v as usize] = NIL;
            if h != NIL {
                prev[h as usize] = v;
            }
            head[d] = v;
        };
        let unlink = |head: &mut [u32], next: &mut [u32], prev: &mut [u32], d: usize, v: u32| {
            let (p, nx) = (prev[v as usize], next[v as usize]);
            if p == NIL {
                head[d] = nx;
            } else {
                next[p as usize] = nx;
            }
            if nx != NIL {
                prev[nx as usize] = p;
            }
        };

        for v in (0..n as u32).rev() {
            push(&mut head, &mut next, &mut prev, deg[v as usize] as usize, v);
        }

        let mut order = Vec::with_capacity(n);
        let mut degeneracy = 0usize;
        let mut k = 0usize;
        for _ in 0..n {
            while head[k] == NIL {
                k += 1;
            }
            let v = head[k];
            unlink(&mut head, &mut next, &mut prev, k, v);
            removed[v as usize] = true;
            order.push(v);
            degeneracy = degeneracy.max(k);
            for &u in self.neighbors(v) {
                if removed[u as usize] {
                    continue;
                }
                let du = deg[u as usize] as usize;
                unlink(&mut head, &mut next, &mut prev, du, u);
                deg[u as usize] -= 1;
                push(&mut head, &mut next, &mut prev, du - 1, u);
            }
            k = k.saturating_sub(1);
        }
        (order, degeneracy)
    }
}

/// Smallest-last order of the subgraph on `nodes` spanned by `edges`.
///
/// `nodes` must be distinct and contain every edge endpoint.
pub fn smallest_last(nodes: &[NodeId], edges: &[(NodeId, NodeId)]) -> DegeneracyOrder {
    let local: HashMap<NodeId, u32> = nodes
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32))
        .collect();
    let local_edges: Vec<(u32, u32)> = edges
        .iter()
        .map(|(a, b)| {
            let la = *local.get(a).expect("edge endpoint outside node set");
            let lb = *local.get(b).expect("edge endpoint outside node set");
            (la, lb)
        })
        .collect();
    let (order, degeneracy) = LocalGraph::from_edges(nodes.len(), &local_edges).smallest_last();
    DegeneracyOrder {
        order: order.into_iter().map(|i| nodes[i as usize]).collect(),
        degeneracy,
    }
}

/// Same as [`smallest_last`] for the dense node set `0..n`.
pub fn smallest_last_dense(n: usize, edges: &[(NodeId, NodeId)]) -> DegeneracyOrder {
    let local_edges: Vec<(u32, u32)> = edges.iter().map(|&(a, b)| (a.0, b.0)).collect();
    let (order, degeneracy) = LocalGraph::from_edges(n, &local_edges).smallest_last();
    DegeneracyOrder {
        order: order.into_iter().map(NodeId).collect(),
        degeneracy,
    }
}

/// Orient every edge from the endpoint removed earlier to the one removed
/// later. The result is acyclic with outdegree at most `order.degeneracy`.
pub fn orient_by_order(order: &DegeneracyOrder, edges: &[(NodeId, NodeId)]) -> Vec<Arc> {
    let pos = order.positions();
    edges
        .iter()
        .map(|&(a, b)| {
            let pa = pos.get(&a).expect("order does not cover edge endpoint");
            let pb = pos.get(&b).expect("order does not cover edge endpoint");
            if pa < pb {
                Arc { tail: a, head: b }
            } else {
                Arc { tail: b, head: a }
            }
        })
        .collect()
}
