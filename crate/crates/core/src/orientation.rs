//! Low-outdegree orientation maintenance.
//!
//! Two interchangeable strategies keep every node's outdegree at most the
//! graph's cap `d`:
//!
//! * [`StrategyKind::StaticRecompute`] reorients the whole graph along a
//!   smallest-last order after every update, so `d = max(2, degeneracy)`.
//! * [`StrategyKind::AmortizedFlip`] orients a new edge away from the endpoint
//!   with smaller outdegree and, when a node overflows the cap, flips all of
//!   its out-arcs and re-checks the heads. Deletions trigger a full rebuild
//!   every `rebuild_interval` deletions so the cap follows a shrinking graph.

use std::collections::HashMap;

use thiserror::Error;

use crate::degeneracy::smallest_last_dense;
use crate::graph_store::{Arc, NodeId, OrientedGraph, MIN_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    StaticRecompute,
    AmortizedFlip,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientationStrategy {
    pub kind: StrategyKind,
    /// Cap is `ceil(cap_multiplier * degeneracy)` for `AmortizedFlip`.
    pub cap_multiplier: f64,
    pub rebuild_interval: usize,
}

impl OrientationStrategy {
    pub fn static_recompute() -> Self {
        OrientationStrategy {
            kind: StrategyKind::StaticRecompute,
            cap_multiplier: 4.0,
            rebuild_interval: 1,
        }
    }

    pub fn amortized() -> Self {
        OrientationStrategy {
            kind: StrategyKind::AmortizedFlip,
            cap_multiplier: 4.0,
            rebuild_interval: 1,
        }
    }

    pub fn of_kind(kind: StrategyKind) -> Self {
        match kind {
            StrategyKind::StaticRecompute => Self::static_recompute(),
            StrategyKind::AmortizedFlip => Self::amortized(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrientationError {
    #[error("cap multiplier must be >= 2, got {0}")]
    CapMultiplier(f64),
    #[error("rebuild interval must be >= 1")]
    RebuildInterval,
}

/// Hook the graph store calls on every edge update.
///
/// `on_insert` must add the arc for `{u, v}` in whichever direction it picks;
/// `on_delete` runs after the arc has been removed. Both must leave every
/// outdegree at or below the graph's cap.
pub trait Orientation {
    fn on_insert(&mut self, g: &mut OrientedGraph, u: NodeId, v: NodeId) -> Vec<Arc>;
    fn on_delete(&mut self, g: &mut OrientedGraph, u: NodeId, v: NodeId);
}

#[derive(Clone, Debug)]
pub struct Orienter {
    strategy: OrientationStrategy,
    degeneracy_estimate: usize,
    deletions_since_rebuild: usize,
    rebuilds: usize,
}

impl Orienter {
    pub fn new(strategy: OrientationStrategy) -> Result<Self, OrientationError> {
        if !strategy.cap_multiplier.is_finite() || strategy.cap_multiplier < 2.0 {
            return Err(OrientationError::CapMultiplier(strategy.cap_multiplier));
        }
        if strategy.rebuild_interval == 0 {
            return Err(OrientationError::RebuildInterval);
        }
        Ok(Orienter {
            strategy,
            degeneracy_estimate: 0,
            deletions_since_rebuild: 0,
            rebuilds: 0,
        })
    }

    pub fn strategy(&self) -> &OrientationStrategy {
        &self.strategy
    }

    /// Number of full reorientations performed so far.
    pub fn rebuilds(&self) -> usize {
        self.rebuilds
    }

    /// Degeneracy measured at the last full rebuild.
    pub fn degeneracy_estimate(&self) -> usize {
        self.degeneracy_estimate
    }

    fn cap_for(&self, degeneracy: usize) -> usize {
        let raw = match self.strategy.kind {
            StrategyKind::StaticRecompute => degeneracy,
            StrategyKind::AmortizedFlip => {
                (self.strategy.cap_multiplier * degeneracy as f64).ceil() as usize
            }
        };
        raw.max(MIN_CAP)
    }

    /// Reorient every edge along a fresh smallest-last order and reset the
    /// cap. Returns the arcs that changed direction, in their new direction.
    pub fn rebuild(&mut self, g: &mut OrientedGraph) -> Vec<Arc> {
        let pairs: Vec<(NodeId, NodeId)> = g.arcs().map(|a| (a.tail, a.head)).collect();
        let order = smallest_last_dense(g.node_count(), &pairs);
        let mut rank = vec![0usize; g.node_count()];
        for (i, v) in order.order.iter().enumerate() {
            rank[v.index()] = i;
        }
        let mut flips = Vec::new();
        for (tail, head) in pairs {
            if rank[tail.index()] > rank[head.index()] {
                flips.push(g.reverse_arc(Arc { tail, head }));
            }
        }
        self.degeneracy_estimate = order.degeneracy;
        self.deletions_since_rebuild = 0;
        self.rebuilds += 1;
        g.set_cap(self.cap_for(order.degeneracy));
        flips
    }

    fn initial_arc(g: &OrientedGraph, u: NodeId, v: NodeId) -> Arc {
        let (du, dv) = (g.out_degree(u), g.out_degree(v));
        if du < dv || (du == dv && u < v) {
            Arc { tail: u, head: v }
        } else {
            Arc { tail: v, head: u }
        }
    }

    /// Flip out-arcs of overflowing nodes until none exceed the cap.
    /// Returns `false` if the flip budget ran out first.
    fn cascade(
        g: &mut OrientedGraph,
        start: NodeId,
        original: &mut HashMap<(NodeId, NodeId), Arc>,
    ) -> bool {
        let budget = 8 * (g.edge_count() + g.node_count()) + 64;
        let mut spent = 0usize;
        let mut work = vec![start];
        while let Some(x) = work.pop() {
            if g.out_degree(x) <= g.cap() {
                continue;
            }
            let heads: Vec<NodeId> = g.out_neighbors(x).to_vec();
            for h in heads {
                let arc = Arc { tail: x, head: h };
                original.entry(arc.undirected()).or_insert(arc);
                g.reverse_arc(arc);
                spent += 1;
                if g.out_degree(h) > g.cap() {
                    work.push(h);
                }
            }
            if spent > budget {
                return false;
            }
        }
        true
    }
}

impl Orientation for Orienter {
    fn on_insert(&mut self, g: &mut OrientedGraph, u: NodeId, v: NodeId) -> Vec<Arc> {
        let new_arc = Self::initial_arc(g, u, v);
        g.add_arc(new_arc);
        match self.strategy.kind {
            StrategyKind::StaticRecompute => {
                let mut flips = self.rebuild(g);
                let key = new_arc.undirected();
                flips.retain(|a| a.undirected() != key);
                let placed = g.arc_between(u, v).expect("new edge vanished");
                flips.insert(0, placed);
                flips
            }
            StrategyKind::AmortizedFlip => {
                if g.out_degree(new_arc.tail) <= g.cap() {
                    return vec![new_arc];
                }
                let mut original: HashMap<(NodeId, NodeId), Arc> = HashMap::new();
                original.insert(new_arc.undirected(), new_arc);
                if !Self::cascade(g, new_arc.tail, &mut original) {
                    // cap too small for the current density; re-measure
                    for a in self.rebuild(g) {
                        original.entry(a.undirected()).or_insert(a.reversed());
                    }
                }
                let key = new_arc.undirected();
                let mut flips = vec![g.arc_between(u, v).expect("new edge vanished")];
                let mut rest: Vec<Arc> = original
                    .into_iter()
                    .filter(|(k, _)| *k != key)
                    .filter_map(|((a, b), before)| {
                        let now = g.arc_between(a, b).expect("flipped edge vanished");
                        (now != before).then_some(now)
                    })
                    .collect();
                rest.sort_unstable();
                flips.extend(rest);
                flips
            }
        }
    }

    fn on_delete(&mut self, g: &mut OrientedGraph, _u: NodeId, _v: NodeId) {
        self.deletions_since_rebuild += 1;
        let due = match self.strategy.kind {
            StrategyKind::StaticRecompute => true,
            StrategyKind::AmortizedFlip => {
                self.deletions_since_rebuild >= self.strategy.rebuild_interval
            }
        };
        if due {
            self.rebuild(g);
        }
    }
}

/// The outdegree bound `d` currently guaranteed for `g`.
pub fn current_cap(g: &OrientedGraph) -> usize {
    g.cap()
}
