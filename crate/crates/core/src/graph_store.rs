//! Dynamic oriented graph storage.
//!
//! Every undirected edge `{u, v}` is stored as exactly one arc. Each node keeps
//! its out-arcs and in-arcs in insertion order; a per-arc position index makes
//! insert, delete, lookup and reversal O(1) expected.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::orientation::Orientation;

/// Dense node identifier in `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for NodeId {
    fn from(v: u32) -> Self {
        NodeId(v)
    }
}

impl From<usize> for NodeId {
    fn from(v: usize) -> Self {
        NodeId(u32::try_from(v).expect("node id exceeds u32"))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A directed arc `tail -> head`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub tail: NodeId,
    pub head: NodeId,
}

impl Arc {
    pub fn new(tail: impl Into<NodeId>, head: impl Into<NodeId>) -> Self {
        Arc {
            tail: tail.into(),
            head: head.into(),
        }
    }

    pub fn reversed(self) -> Self {
        Arc {
            tail: self.head,
            head: self.tail,
        }
    }

    /// Endpoints ordered as `(min, max)`.
    pub fn undirected(self) -> (NodeId, NodeId) {
        if self.tail < self.head {
            (self.tail, self.head)
        } else {
            (self.head, self.tail)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("edge {{{0}, {1}}} already present")]
    DuplicateEdge(NodeId, NodeId),
    #[error("edge {{{0}, {1}}} not present")]
    MissingEdge(NodeId, NodeId),
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },
}

#[derive(Clone, Copy, Debug)]
struct ArcSlot {
    out_pos: usize,
    in_pos: usize,
}

/// Simple graph with a maintained orientation and outdegree cap.
#[derive(Clone, Debug)]
pub struct OrientedGraph {
    n: usize,
    out: Vec<Vec<NodeId>>,
    inn: Vec<Vec<NodeId>>,
    slots: HashMap<(NodeId, NodeId), ArcSlot>,
    d_cap: usize,
    epoch: u64,
}

pub const MIN_CAP: usize = 2;

impl OrientedGraph {
    pub fn new(n: usize) -> Self {
        OrientedGraph {
            n,
            out: vec![Vec::new(); n],
            inn: vec![Vec::new(); n],
            slots: HashMap::new(),
            d_cap: MIN_CAP,
            epoch: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.slots.len()
    }

    /// Incremented once per successful edge insertion or deletion.
    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    /// Current outdegree bound `d`.
    pub fn cap(&self) -> usize {
        self.d_cap
    }

    pub(crate) fn set_cap(&mut self, cap: usize) {
        self.d_cap = cap.max(MIN_CAP);
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n).map(NodeId::from)
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        v.index() < self.n
    }

    fn check_node(&self, v: NodeId) -> Result<(), GraphError> {
        if self.contains_node(v) {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange { node: v, n: self.n })
        }
    }

    /// Heads of the out-arcs of `v`.
    #[inline]
    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.out[v.index()]
    }

    /// Tails of the in-arcs of `v`.
    #[inline]
    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.inn[v.index()]
    }

    pub fn out_arcs(&self, v: NodeId) -> Vec<Arc> {
        self.out[v.index()]
            .iter()
            .map(|&h| Arc { tail: v, head: h })
            .collect()
    }

    pub fn in_arcs(&self, v: NodeId) -> Vec<Arc> {
        self.inn[v.index()]
            .iter()
            .map(|&t| Arc { tail: t, head: v })
            .collect()
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out[v.index()].len()
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.inn[v.index()].len()
    }

    pub fn max_out_degree(&self) -> usize {
        self.out.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_arc(&self, arc: Arc) -> bool {
        self.slots.contains_key(&(arc.tail, arc.head))
    }

    /// The stored orientation of `{u, v}`, if the edge exists.
    pub fn arc_between(&self, u: NodeId, v: NodeId) -> Option<Arc> {
        if self.slots.contains_key(&(u, v)) {
            Some(Arc { tail: u, head: v })
        } else if self.slots.contains_key(&(v, u)) {
            Some(Arc { tail: v, head: u })
        } else {
            None
        }
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.arc_between(u, v).is_some()
    }

    /// All arcs, grouped by tail in node order.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.out.iter().enumerate().flat_map(|(t, heads)| {
            let tail = NodeId::from(t);
            heads.iter().map(move |&head| Arc { tail, head })
        })
    }

    /// Undirected edge list as `(min, max)` pairs, sorted.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut e: Vec<_> = self.arcs().map(Arc::undirected).collect();
        e.sort_unstable();
        e
    }

    /// Insert `{u, v}`; the orientation layer picks the direction and may flip
    /// other arcs. Returns every arc whose direction changed, new arc included.
    pub fn insert_edge<O: Orientation + ?Sized>(
        &mut self,
        u: NodeId,
        v: NodeId,
        orienter: &mut O,
    ) -> Result<Vec<Arc>, GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        let flips = orienter.on_insert(self, u, v);
        self.epoch += 1;
        Ok(flips)
    }

    pub fn delete_edge<O: Orientation + ?Sized>(
        &mut self,
        u: NodeId,
        v: NodeId,
        orienter: &mut O,
    ) -> Result<(), GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        let arc = self
            .arc_between(u, v)
            .ok_or(GraphError::MissingEdge(u, v))?;
        self.remove_arc(arc);
        orienter.on_delete(self, u, v);
        self.epoch += 1;
        Ok(())
    }

    /// Raw arc insertion; the caller guarantees the edge is absent.
    pub(crate) fn add_arc(&mut self, arc: Arc) {
        debug_assert!(arc.tail != arc.head);
        debug_assert!(!self.has_edge(arc.tail, arc.head));
        let out_pos = self.out[arc.tail.index()].len();
        let in_pos = self.inn[arc.head.index()].len();
        self.out[arc.tail.index()].push(arc.head);
        self.inn[arc.head.index()].push(arc.tail);
        self.slots
            .insert((arc.tail, arc.head), ArcSlot { out_pos, in_pos });
    }

    pub(crate) fn remove_arc(&mut self, arc: Arc) {
        let slot = self
            .slots
            .remove(&(arc.tail, arc.head))
            .expect("remove_arc on absent arc");

        let outs = &mut self.out[arc.tail.index()];
        outs.swap_remove(slot.out_pos);
        if let Some(&moved_head) = outs.get(slot.out_pos) {
            self.slots
                .get_mut(&(arc.tail, moved_head))
                .expect("slot index out of sync")
                .out_pos = slot.out_pos;
        }

        let ins = &mut self.inn[arc.head.index()];
        ins.swap_remove(slot.in_pos);
        if let Some(&moved_tail) = ins.get(slot.in_pos) {
            self.slots
                .get_mut(&(moved_tail, arc.head))
                .expect("slot index out of sync")
                .in_pos = slot.in_pos;
        }
    }

    /// Reverse an existing arc; returns the new arc.
    pub(crate) fn reverse_arc(&mut self, arc: Arc) -> Arc {
        self.remove_arc(arc);
        let rev = arc.reversed();
        self.add_arc(rev);
        rev
    }

    /// Full scan of the structural invariants: list consistency, slot index
    /// agreement, simplicity, and the outdegree cap.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.d_cap < MIN_CAP {
            return Err(format!("cap {} below floor {MIN_CAP}", self.d_cap));
        }
        let mut arc_total = 0;
        for t in 0..self.n {
            let tail = NodeId::from(t);
            if self.out[t].len() > self.d_cap {
                return Err(format!(
                    "node {t} has outdegree {} > cap {}",
                    self.out[t].len(),
                    self.d_cap
                ));
            }
            for (pos, &head) in self.out[t].iter().enumerate() {
                arc_total += 1;
                if head == tail {
                    return Err(format!("self-loop at {t}"));
                }
                let slot = self
                    .slots
                    .get(&(tail, head))
                    .ok_or_else(|| format!("arc {t}->{head} missing from index"))?;
                if slot.out_pos != pos {
                    return Err(format!("arc {t}->{head} out position stale"));
                }
                if self.inn[head.index()].get(slot.in_pos) != Some(&tail) {
                    return Err(format!("arc {t}->{head} absent from in-list of {head}"));
                }
                if self.slots.contains_key(&(head, tail)) {
                    return Err(format!("both orientations of {{{t}, {head}}} stored"));
                }
            }
        }
        let in_total: usize = self.inn.iter().map(Vec::len).sum();
        if arc_total != self.slots.len() || in_total != arc_total {
            return Err(format!(
                "arc counts disagree: out {arc_total}, in {in_total}, index {}",
                self.slots.len()
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneracy::smallest_last;
    use crate::orientation::{OrientationStrategy, Orienter, StrategyKind};

    fn amortized() -> Orienter {
        Orienter::new(OrientationStrategy::amortized()).unwrap()
    }

    fn static_() -> Orienter {
        Orienter::new(OrientationStrategy::static_recompute()).unwrap()
    }

    fn n(v: u32) -> NodeId {
        NodeId(v)
    }

    #[test]
    fn first_edge_has_no_flips_beyond_itself() {
        let mut g = OrientedGraph::new(2);
        let mut o = amortized();
        let flips = g.insert_edge(n(0), n(1), &mut o).unwrap();
        assert_eq!(flips, vec![Arc::new(0u32, 1u32)]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.epoch(), 1);
    }

    #[test]
    fn duplicate_and_self_loop_rejected() {
        let mut g = OrientedGraph::new(3);
        let mut o = amortized();
        g.insert_edge(n(0), n(1), &mut o).unwrap();
        assert_eq!(
            g.insert_edge(n(0), n(1), &mut o),
            Err(GraphError::DuplicateEdge(n(0), n(1)))
        );
        assert_eq!(
            g.insert_edge(n(1), n(0), &mut o),
            Err(GraphError::DuplicateEdge(n(1), n(0)))
        );
        assert_eq!(
            g.insert_edge(n(2), n(2), &mut o),
            Err(GraphError::SelfLoop(n(2)))
        );
        assert!(matches!(
            g.insert_edge(n(0), n(7), &mut o),
            Err(GraphError::NodeOutOfRange { .. })
        ));
        // failed operations leave the epoch alone
        assert_eq!(g.epoch(), 1);
    }

    #[test]
    fn insert_then_delete_restores_empty() {
        let mut g = OrientedGraph::new(2);
        let mut o = amortized();
        g.insert_edge(n(0), n(1), &mut o).unwrap();
        g.delete_edge(n(1), n(0), &mut o).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!(g.out_arcs(n(0)).is_empty() && g.in_arcs(n(1)).is_empty());
        assert_eq!(g.epoch(), 2);
        assert_eq!(
            g.delete_edge(n(0), n(1), &mut o),
            Err(GraphError::MissingEdge(n(0), n(1)))
        );
    }

    #[test]
    fn star_under_static_orientation_points_into_center() {
        let mut g = OrientedGraph::new(6);
        let mut o = static_();
        for i in 1..=5 {
            g.insert_edge(n(0), n(i), &mut o).unwrap();
        }
        let nodes: Vec<_> = g.nodes().collect();
        let degen = smallest_last(&nodes, &g.edges()).degeneracy;
        assert_eq!(degen, 1);
        assert!(g.out_degree(n(0)) <= degen);
        // the center and the last leaf tie at degree 1, so one arc may leave 0
        for i in 1..=4 {
            assert_eq!(g.out_arcs(n(i)), vec![Arc::new(i, 0u32)]);
        }
        assert_eq!(g.max_out_degree(), 1);
        g.check_invariants().unwrap();
    }

    #[test]
    fn triangle_minus_edge_is_a_path() {
        let mut g = OrientedGraph::new(3);
        let mut o = static_();
        g.insert_edge(n(0), n(1), &mut o).unwrap();
        g.insert_edge(n(1), n(2), &mut o).unwrap();
        g.insert_edge(n(0), n(2), &mut o).unwrap();
        g.delete_edge(n(0), n(2), &mut o).unwrap();
        let nodes: Vec<_> = g.nodes().collect();
        assert_eq!(smallest_last(&nodes, &g.edges()).degeneracy, 1);
        assert_eq!(g.edges(), vec![(n(0), n(1)), (n(1), n(2))]);
    }

    #[test]
    fn isolated_node_has_empty_lists() {
        let g = OrientedGraph::new(4);
        assert!(g.out_arcs(n(3)).is_empty());
        assert!(g.in_arcs(n(3)).is_empty());
        assert_eq!(g.cap(), MIN_CAP);
    }

    #[test]
    fn out_and_in_lists_agree_after_insert() {
        let mut g = OrientedGraph::new(2);
        let mut o = amortized();
        g.insert_edge(n(0), n(1), &mut o).unwrap();
        assert_eq!(g.out_arcs(n(0)), vec![Arc::new(0u32, 1u32)]);
        assert_eq!(g.in_arcs(n(1)), vec![Arc::new(0u32, 1u32)]);
    }

    #[test]
    fn directed_four_cycle_has_unit_degrees() {
        let mut g = OrientedGraph::new(4);
        for i in 0..4u32 {
            g.add_arc(Arc::new(i, (i + 1) % 4));
        }
        for v in g.nodes() {
            assert_eq!(g.out_degree(v), 1);
            assert_eq!(g.in_degree(v), 1);
        }
        g.check_invariants().unwrap();
    }

    #[test]
    fn swap_remove_keeps_index_consistent() {
        let mut g = OrientedGraph::new(6);
        let mut o = Orienter::new(OrientationStrategy {
            kind: StrategyKind::AmortizedFlip,
            cap_multiplier: 4.0,
            rebuild_interval: 1_000,
        })
        .unwrap();
        for (u, v) in [(0, 1), (0, 2), (0, 3), (1, 2), (3, 4), (4, 5), (2, 5)] {
            g.insert_edge(n(u), n(v), &mut o).unwrap();
        }
        g.delete_edge(n(0), n(2), &mut o).unwrap();
        g.check_invariants().unwrap();
        g.delete_edge(n(0), n(1), &mut o).unwrap();
        g.check_invariants().unwrap();
        let a = g.arc_between(n(4), n(5)).unwrap();
        let r = g.reverse_arc(a);
        assert_eq!(r, a.reversed());
        g.check_invariants().unwrap();
        assert_eq!(g.edge_count(), 5);
    }
}
