//! Random vertex partitioning.
//!
//! Nodes are hashed into `k` parts. Each part runs its own orientation and
//! coloring stack over the subgraph induced by its nodes, and part `i` owns
//! the color range `[i * w + 1, (i + 1) * w]`. Cross-part edges are never
//! forwarded: disjoint ranges make them conflict-free.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph_store::{Arc, GraphError, NodeId, OrientedGraph};
use crate::implicit_color::{ColorError, ColorParams, ColoringState, QueryReport, RecursionPolicy};
use crate::orientation::{OrientationError, OrientationStrategy, Orienter};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Color(#[from] ColorError),
    #[error(transparent)]
    Orientation(#[from] OrientationError),
    #[error("part count must be >= 1")]
    ZeroParts,
    #[error("alpha estimate must be >= 1 and n >= 2 (got alpha {alpha}, n {n})")]
    Domain { alpha: usize, n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateOp {
    Insert,
    Delete,
}

/// One orientation + coloring stack.
#[derive(Clone, Debug)]
pub struct ColorStack {
    pub graph: OrientedGraph,
    pub orienter: Orienter,
    pub state: ColoringState,
}

impl ColorStack {
    pub fn new(
        n: usize,
        strategy: OrientationStrategy,
        policy: RecursionPolicy,
        params: ColorParams,
    ) -> Result<Self, OrientationError> {
        Ok(ColorStack {
            graph: OrientedGraph::new(n),
            orienter: Orienter::new(strategy)?,
            state: ColoringState::new(n, policy, params),
        })
    }

    /// Whether the coloring state belongs to the graph's current epoch.
    pub fn coloring_current(&self) -> bool {
        self.state.epoch() == Some(self.graph.epoch())
    }

    pub fn color_of(&self, v: NodeId) -> Option<u32> {
        if self.coloring_current() {
            self.state.color_of(v)
        } else {
            None
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionConfig {
    pub k: usize,
    pub seed: u64,
    pub strategy: OrientationStrategy,
    pub policy: RecursionPolicy,
    pub params: ColorParams,
}

/// Result of a global query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalQuery {
    pub part: usize,
    pub color: u32,
    pub range_width: usize,
    pub local: QueryReport,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Part index of `v`; a pure function of `(v, seed, k)`.
pub fn part_of(v: NodeId, seed: u64, k: usize) -> usize {
    if k <= 1 {
        return 0;
    }
    (mix64(seed ^ (v.0 as u64).wrapping_mul(GOLDEN)) % k as u64) as usize
}

/// `max(1, ceil(alpha / ceil(log2 n)))`.
pub fn choose_k(alpha_estimate: usize, n: usize) -> Result<usize, PartitionError> {
    if alpha_estimate == 0 || n < 2 {
        return Err(PartitionError::Domain {
            alpha: alpha_estimate,
            n,
        });
    }
    let log_n = ((n - 1).ilog2() + 1) as usize;
    Ok(alpha_estimate.div_ceil(log_n).max(1))
}

#[derive(Clone, Debug)]
pub struct PartitionedColorer {
    n: usize,
    config: PartitionConfig,
    part: Vec<usize>,
    parts: Vec<ColorStack>,
    edges: BTreeSet<(NodeId, NodeId)>,
}

impl PartitionedColorer {
    pub fn new(n: usize, config: PartitionConfig) -> Result<Self, PartitionError> {
        if config.k == 0 {
            return Err(PartitionError::ZeroParts);
        }
        let part = (0..n)
            .map(|v| part_of(NodeId::from(v), config.seed, config.k))
            .collect();
        let parts = (0..config.k)
            .map(|i| {
                let policy = RecursionPolicy {
                    rng_seed: config
                        .policy
                        .rng_seed
                        .wrapping_add((i as u64).wrapping_mul(GOLDEN)),
                    ..config.policy
                };
                ColorStack::new(n, config.strategy, policy, config.params)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PartitionedColorer {
            n,
            config,
            part,
            parts,
            edges: BTreeSet::new(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.config.k
    }

    pub fn config(&self) -> &PartitionConfig {
        &self.config
    }

    pub fn part_of(&self, v: NodeId) -> usize {
        self.part[v.index()]
    }

    pub fn parts(&self) -> &[ColorStack] {
        &self.parts
    }

    pub fn parts_mut(&mut self) -> &mut [ColorStack] {
        &mut self.parts
    }

    /// Global undirected edge set, sorted.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.edges.iter().copied().collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn key(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
        if u < v {
            (u, v)
        } else {
            (v, u)
        }
    }

    /// Apply an update to the global graph and forward it to the owning part
    /// if both endpoints share one. Returns the arcs whose direction changed in
    /// that part (empty for deletions and cross-part edges).
    pub fn route_update(
        &mut self,
        op: UpdateOp,
        u: NodeId,
        v: NodeId,
    ) -> Result<Vec<Arc>, PartitionError> {
        for x in [u, v] {
            if x.index() >= self.n {
                return Err(GraphError::NodeOutOfRange { node: x, n: self.n }.into());
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u).into());
        }
        let key = Self::key(u, v);
        match op {
            UpdateOp::Insert if self.edges.contains(&key) => {
                return Err(GraphError::DuplicateEdge(u, v).into())
            }
            UpdateOp::Delete if !self.edges.contains(&key) => {
                return Err(GraphError::MissingEdge(u, v).into())
            }
            _ => {}
        }
        let (pu, pv) = (self.part[u.index()], self.part[v.index()]);
        let mut flips = Vec::new();
        if pu == pv {
            let stack = &mut self.parts[pu];
            match op {
                UpdateOp::Insert => flips = stack.graph.insert_edge(u, v, &mut stack.orienter)?,
                UpdateOp::Delete => stack.graph.delete_edge(u, v, &mut stack.orienter)?,
            }
        }
        match op {
            UpdateOp::Insert => self.edges.insert(key),
            UpdateOp::Delete => self.edges.remove(&key),
        };
        Ok(flips)
    }

    /// Width of every part's color range: palette size for the largest cap.
    pub fn range_width(&self) -> usize {
        self.parts
            .iter()
            .map(|p| self.config.params.palette(p.graph.cap()))
            .max()
            .unwrap_or(1)
    }

    pub fn query_color_global(&mut self, u: NodeId) -> Result<GlobalQuery, PartitionError> {
        if u.index() >= self.n {
            return Err(ColorError::NodeOutOfRange { node: u, n: self.n }.into());
        }
        let width = self.range_width();
        let part = self.part[u.index()];
        let stack = &mut self.parts[part];
        let local = stack.state.query_color(&stack.graph, u)?;
        Ok(GlobalQuery {
            part,
            color: (part * width) as u32 + local.color,
            range_width: width,
            local,
        })
    }

    /// Current global colors of every node (`None` if not colored in the
    /// owning part's current epoch).
    pub fn global_colors(&self) -> Vec<Option<u32>> {
        let width = self.range_width() as u32;
        (0..self.n)
            .map(|v| {
                let v = NodeId::from(v);
                let p = self.part[v.index()];
                self.parts[p].color_of(v).map(|c| p as u32 * width + c)
            })
            .collect()
    }
}
