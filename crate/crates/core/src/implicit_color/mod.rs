//! Implicit coloring over a low-outdegree orientation.
//!
//! A query on an uncolored node `u` gathers a set `V*` by recursing along
//! out-arcs: every out-arc of a `V*` member becomes processed, and a head
//! outside `V^colored ∪ V*` joins `V*` when the recursion policy says so
//! (deterministically once it has `6d` processed in-arcs, or by a biased
//! coin). `V*` is then colored greedily in reverse smallest-last order from
//! the palette `[1, 9d]`.
//!
//! State is valid for one epoch, the span between two graph updates. Each
//! node carries a generation stamp and is reset on first touch in a new
//! epoch, so an update costs nothing here.

mod policy;

pub use policy::{
    recursion_probability, recursion_probability_for_threshold, DomainError, PolicyKind,
    RecursionDecider, RecursionPolicy,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::degeneracy::LocalGraph;
use crate::graph_store::{Arc, NodeId, OrientedGraph};

/// Multipliers of `d` for the recursion threshold and the palette size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ColorParams {
    pub threshold_mult: f64,
    pub palette_mult: f64,
}

impl Default for ColorParams {
    fn default() -> Self {
        ColorParams {
            threshold_mult: 6.0,
            palette_mult: 9.0,
        }
    }
}

impl ColorParams {
    pub fn threshold(&self, d: usize) -> usize {
        ((self.threshold_mult * d as f64).ceil() as usize).max(1)
    }

    pub fn palette(&self, d: usize) -> usize {
        ((self.palette_mult * d as f64).ceil() as usize).max(1)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColorError {
    #[error("no free color in [1, {palette}] for node {node} (d = {d})")]
    PaletteExhausted {
        node: NodeId,
        d: usize,
        palette: usize,
    },
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },
}

/// Telemetry for one color query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryReport {
    pub node: NodeId,
    pub color: u32,
    /// 0 when the node was already colored in this epoch.
    pub vstar_size: usize,
    /// Processed arcs whose processing caused a recursive call.
    pub trigger_arcs: Vec<Arc>,
    pub epoch: u64,
    /// `|V^colored|` after the query.
    pub colored_total: usize,
}

#[derive(Clone, Debug)]
pub struct ColoringState {
    n: usize,
    params: ColorParams,
    decider: RecursionDecider,

    graph_epoch: Option<u64>,
    generation: u64,
    d: usize,
    threshold: usize,
    palette: usize,
    colored_total: usize,

    stamp: Vec<u64>,
    color: Vec<u32>,
    tails_processed: Vec<bool>,
    processed_in: Vec<Vec<NodeId>>,

    query_serial: u64,
    vstar_mark: Vec<u64>,
    local_index: Vec<u32>,
    forbidden: Vec<u64>,
    forbid_stamp: u64,

    cells_touched: u64,
    arc_steps: u64,
}

impl ColoringState {
    pub fn new(n: usize, policy: RecursionPolicy, params: ColorParams) -> Self {
        ColoringState {
            n,
            params,
            decider: RecursionDecider::new(policy),
            graph_epoch: None,
            generation: 0,
            d: 0,
            threshold: 0,
            palette: 0,
            colored_total: 0,
            stamp: vec![0; n],
            color: vec![0; n],
            tails_processed: vec![false; n],
            processed_in: vec![Vec::new(); n],
            query_serial: 0,
            vstar_mark: vec![0; n],
            local_index: vec![0; n],
            forbidden: Vec::new(),
            forbid_stamp: 0,
            cells_touched: 0,
            arc_steps: 0,
        }
    }

    pub fn policy_kind(&self) -> PolicyKind {
        self.decider.kind()
    }

    pub fn params(&self) -> ColorParams {
        self.params
    }

    /// Outdegree bound snapshot of the current epoch.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn palette_size(&self) -> usize {
        self.palette
    }

    /// Graph epoch the current coloring belongs to.
    pub fn epoch(&self) -> Option<u64> {
        self.graph_epoch
    }

    pub fn colored_total(&self) -> usize {
        self.colored_total
    }

    /// Per-node state cells reset so far (lazy epoch resets plus epoch starts).
    pub fn cells_touched(&self) -> u64 {
        self.cells_touched
    }

    /// Out-arcs examined while building `V*` sets.
    pub fn arc_steps(&self) -> u64 {
        self.arc_steps
    }

    #[inline]
    fn live(&self, v: NodeId) -> bool {
        self.stamp[v.index()] == self.generation && self.graph_epoch.is_some()
    }

    pub fn color_of(&self, v: NodeId) -> Option<u32> {
        (self.live(v) && self.color[v.index()] != 0).then(|| self.color[v.index()])
    }

    /// Tails of processed arcs into `v` recorded while `v` was uncolored.
    pub fn processed_in(&self, v: NodeId) -> &[NodeId] {
        if self.live(v) {
            &self.processed_in[v.index()]
        } else {
            &[]
        }
    }

    pub fn processed_count(&self, v: NodeId) -> usize {
        self.processed_in(v).len()
    }

    /// Whether the out-arcs of `v` are in the processed set.
    pub fn out_arcs_processed(&self, v: NodeId) -> bool {
        self.live(v) && self.tails_processed[v.index()]
    }

    #[inline]
    fn touch(&mut self, v: NodeId) {
        let i = v.index();
        if self.stamp[i] != self.generation {
            self.stamp[i] = self.generation;
            self.color[i] = 0;
            self.tails_processed[i] = false;
            self.processed_in[i].clear();
            self.cells_touched += 1;
        }
    }

    #[inline]
    fn in_vstar(&self, v: NodeId) -> bool {
        self.vstar_mark[v.index()] == self.query_serial
    }

    /// Start a new epoch if the graph changed since the last query.
    pub fn begin_epoch_if_stale(&mut self, g: &OrientedGraph) {
        if self.graph_epoch == Some(g.epoch()) {
            return;
        }
        self.graph_epoch = Some(g.epoch());
        self.generation += 1;
        self.d = g.cap();
        self.threshold = self.params.threshold(self.d);
        self.palette = self.params.palette(self.d);
        self.colored_total = 0;
        self.cells_touched += 1;
    }

    pub fn query_color(&mut self, g: &OrientedGraph, u: NodeId) -> Result<QueryReport, ColorError> {
        if u.index() >= self.n || !g.contains_node(u) {
            return Err(ColorError::NodeOutOfRange { node: u, n: self.n });
        }
        self.begin_epoch_if_stale(g);
        self.touch(u);
        if let Some(c) = self.color_of(u) {
            return Ok(QueryReport {
                node: u,
                color: c,
                vstar_size: 0,
                trigger_arcs: Vec::new(),
                epoch: g.epoch(),
                colored_total: self.colored_total,
            });
        }
        let (vstar, trigger_arcs) = self.compute_vstar(g, u);
        self.color_vstar(g, &vstar)?;
        Ok(QueryReport {
            node: u,
            color: self.color[u.index()],
            vstar_size: vstar.len(),
            trigger_arcs,
            epoch: g.epoch(),
            colored_total: self.colored_total,
        })
    }

    /// Gather `V*` for an uncolored `u`. Returns the members in join order and
    /// the arcs that triggered recursive calls.
    pub fn compute_vstar(&mut self, g: &OrientedGraph, u: NodeId) -> (Vec<NodeId>, Vec<Arc>) {
        self.begin_epoch_if_stale(g);
        self.touch(u);
        debug_assert!(self.color_of(u).is_none(), "compute_vstar on colored node");
        self.query_serial += 1;

        let mut vstar = Vec::new();
        let mut triggers = Vec::new();
        let mut stack: Vec<(NodeId, usize)> = Vec::new();

        self.vstar_mark[u.index()] = self.query_serial;
        self.tails_processed[u.index()] = true;
        vstar.push(u);
        stack.push((u, 0));

        while let Some(top) = stack.last_mut() {
            let (v, i) = *top;
            let outs = g.out_neighbors(v);
            if i >= outs.len() {
                stack.pop();
                continue;
            }
            top.1 += 1;
            let w = outs[i];
            self.arc_steps += 1;
            self.touch(w);
            if self.color[w.index()] != 0 || self.in_vstar(w) {
                continue;
            }
            self.processed_in[w.index()].push(v);
            let count = self.processed_in[w.index()].len();
            if self.decider.should_recurse(count, self.threshold) {
                triggers.push(Arc { tail: v, head: w });
                self.vstar_mark[w.index()] = self.query_serial;
                self.tails_processed[w.index()] = true;
                vstar.push(w);
                stack.push((w, 0));
            }
        }
        (vstar, triggers)
    }

    /// Color every member of `vstar` (all uncolored, all marked for the
    /// current query) in reverse smallest-last order of `G[V*]`.
    pub fn color_vstar(
        &mut self,
        g: &OrientedGraph,
        vstar: &[NodeId],
    ) -> Result<Vec<(NodeId, u32)>, ColorError> {
        for (i, &v) in vstar.iter().enumerate() {
            self.local_index[v.index()] = i as u32;
        }
        let mut local_edges = Vec::new();
        for (i, &v) in vstar.iter().enumerate() {
            for &w in g.out_neighbors(v) {
                if self.in_vstar(w) {
                    local_edges.push((i as u32, self.local_index[w.index()]));
                }
            }
        }
        let induced = LocalGraph::from_edges(vstar.len(), &local_edges);
        let (order, _) = induced.smallest_last();

        if self.forbidden.len() < self.palette + 1 {
            self.forbidden.resize(self.palette + 1, 0);
        }
        let mut assigned = Vec::with_capacity(vstar.len());
        for &li in order.iter().rev() {
            let v = vstar[li as usize];
            self.forbid_stamp += 1;
            let stamp = self.forbid_stamp;
            let mark = |state: &mut Self, x: NodeId| {
                if state.stamp[x.index()] == state.generation {
                    let c = state.color[x.index()] as usize;
                    if c != 0 && c <= state.palette {
                        state.forbidden[c] = stamp;
                    }
                }
            };
            for k in 0..self.processed_in[v.index()].len() {
                let t = self.processed_in[v.index()][k];
                mark(self, t);
            }
            for &h in g.out_neighbors(v) {
                mark(self, h);
            }
            for &x in induced.neighbors(li) {
                mark(self, vstar[x as usize]);
            }
            let free = (1..=self.palette).find(|&c| self.forbidden[c] != stamp);
            let Some(c) = free else {
                return Err(ColorError::PaletteExhausted {
                    node: v,
                    d: self.d,
                    palette: self.palette,
                });
            };
            self.color[v.index()] = c as u32;
            self.colored_total += 1;
            assigned.push((v, c as u32));
        }
        Ok(assigned)
    }

    /// Uncolored nodes whose processed in-arc count exceeds the threshold.
    pub fn uncolored_count_violations(&self, g: &OrientedGraph) -> Vec<NodeId> {
        g.nodes()
            .filter(|&v| self.color_of(v).is_none() && self.processed_count(v) > self.threshold)
            .collect()
    }

    /// Colored nodes whose color lies outside `[1, palette]`.
    pub fn palette_violations(&self, g: &OrientedGraph) -> Vec<NodeId> {
        g.nodes()
            .filter(|&v| self.color_of(v).is_some_and(|c| c as usize > self.palette))
            .collect()
    }

    /// Colors of every node in the current epoch.
    pub fn colors(&self) -> Vec<Option<u32>> {
        (0..self.n)
            .map(|v| self.color_of(NodeId::from(v)))
            .collect()
    }
}
