//! Seeded workload generators.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::workload::{Workload, WorkloadEvent};
use crate::graph_store::NodeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid generator parameters: {0}")]
pub struct GenerateError(pub String);

/// Graph shapes used by the amortized-bound stress workloads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Path,
    Cycle,
    Star,
    Grid,
    RandomTree,
    Wheel,
    SparseGnm,
    DenseGnm,
    Funnels,
    Cliques,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Path,
        Family::Cycle,
        Family::Star,
        Family::Grid,
        Family::RandomTree,
        Family::Wheel,
        Family::SparseGnm,
        Family::DenseGnm,
        Family::Funnels,
        Family::Cliques,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Star => "star",
            Family::Grid => "grid",
            Family::RandomTree => "tree",
            Family::Wheel => "wheel",
            Family::SparseGnm => "gnm-sparse",
            Family::DenseGnm => "gnm-dense",
            Family::Funnels => "funnels",
            Family::Cliques => "cliques",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| GenerateError(format!("unknown family `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Build `G(n, m)`, then query every node.
    GnmSweep { n: usize, m: usize },
    /// Interleaved inserts, deletes and queries hovering around `target_m` edges.
    Churn {
        n: usize,
        ops: usize,
        target_m: usize,
    },
    /// Fresh graph of a given family, then every node queried once in a seeded order.
    AmortizedStress { n: usize, family: Family },
    /// Chained funnels whose sinks collect `fan_in` processed in-arcs before the sweep.
    VstarStress { n: usize, d: usize, fan_in: usize },
}

pub fn generate(kind: GeneratorKind, seed: u64) -> Result<Workload, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        GeneratorKind::GnmSweep { n, m } => gnm_sweep(n, m, &mut rng),
        GeneratorKind::Churn { n, ops, target_m } => churn(n, ops, target_m, &mut rng),
        GeneratorKind::AmortizedStress { n, family } => amortized_stress(n, family, &mut rng),
        GeneratorKind::VstarStress { n, d, fan_in } => vstar_stress(n, d, fan_in, &mut rng),
    }
}

fn max_edges(n: usize) -> usize {
    n.saturating_mul(n.saturating_sub(1)) / 2
}

fn random_edges(
    n: usize,
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(u32, u32)>, GenerateError> {
    if m > max_edges(n) {
        return Err(GenerateError(format!(
            "m = {m} exceeds n(n-1)/2 for n = {n}"
        )));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let a = rng.random_range(0..n as u32);
        let b = rng.random_range(0..n as u32);
        if a == b {
            continue;
        }
        if seen.insert((a.min(b), a.max(b))) {
            out.push((a, b));
        }
    }
    Ok(out)
}

fn insert_all(w: &mut Workload, edges: &[(u32, u32)]) {
    for &(a, b) in edges {
        w.push(WorkloadEvent::Insert(NodeId(a), NodeId(b)));
    }
}

fn gnm_sweep(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Workload, GenerateError> {
    if n == 0 {
        return Err(GenerateError("n must be positive".into()));
    }
    let edges = random_edges(n, m, rng)?;
    let mut w = Workload::new(n);
    insert_all(&mut w, &edges);
    w.push(WorkloadEvent::SweepAll);
    Ok(w)
}

fn churn(
    n: usize,
    ops: usize,
    target_m: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Workload, GenerateError> {
    if n < 2 {
        return Err(GenerateError("churn needs n >= 2".into()));
    }
    if target_m == 0 || target_m > max_edges(n) {
        return Err(GenerateError(format!(
            "target_m = {target_m} out of range for n = {n}"
        )));
    }
    let mut w = Workload::new(n);
    let mut present: Vec<(u32, u32)> = Vec::new();
    let mut set = BTreeSet::new();
    let full = max_edges(n);
    for _ in 0..ops {
        let roll: f64 = rng.random();
        let p_insert = if present.len() < target_m { 0.6 } else { 0.3 };
        if present.is_empty() || (roll < p_insert && set.len() < full) {
            loop {
                let a = rng.random_range(0..n as u32);
                let b = rng.random_range(0..n as u32);
                if a != b && set.insert((a.min(b), a.max(b))) {
                    present.push((a, b));
                    w.push(WorkloadEvent::Insert(NodeId(a), NodeId(b)));
                    break;
                }
            }
        } else if roll < 0.8 {
            let i = rng.random_range(0..present.len());
            let (a, b) = present.swap_remove(i);
            set.remove(&(a.min(b), a.max(b)));
            w.push(WorkloadEvent::Delete(NodeId(b), NodeId(a)));
        } else {
            w.push(WorkloadEvent::Query(NodeId(rng.random_range(0..n as u32))));
        }
    }
    w.push(WorkloadEvent::SweepAll);
    Ok(w)
}

fn family_edges(
    n: usize,
    family: Family,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(u32, u32)>, GenerateError> {
    let n32 = n as u32;
    let edges = match family {
        Family::Path => (1..n32).map(|i| (i - 1, i)).collect(),
        Family::Cycle => {
            if n < 3 {
                return Err(GenerateError("cycle needs n >= 3".into()));
            }
            (0..n32).map(|i| (i, (i + 1) % n32)).collect()
        }
        Family::Star => (1..n32).map(|i| (0, i)).collect(),
        Family::Grid => {
            let side = (n as f64).sqrt().floor().max(1.0) as u32;
            let mut e = Vec::new();
            for v in 0..n32 {
                let c = v % side;
                if c + 1 < side && v + 1 < n32 {
                    e.push((v, v + 1));
                }
                if v + side < n32 {
                    e.push((v, v + side));
                }
            }
            e
        }
        Family::RandomTree => (1..n32).map(|i| (rng.random_range(0..i), i)).collect(),
        Family::Wheel => {
            if n < 4 {
                return Err(GenerateError("wheel needs n >= 4".into()));
            }
            let rim = n32 - 1;
            let mut e: Vec<(u32, u32)> = (1..n32).map(|i| (0, i)).collect();
            e.extend((0..rim).map(|i| (1 + i, 1 + (i + 1) % rim)));
            e
        }
        Family::SparseGnm => random_edges(n, (2 * n).min(max_edges(n)), rng)?,
        Family::DenseGnm => random_edges(n, (5 * n).min(max_edges(n)), rng)?,
        Family::Funnels => {
            let fan_in = 11u32;
            let mut e = Vec::new();
            let block = fan_in + 1;
            let blocks = n32 / block;
            for j in 0..blocks {
                let sink = j * block + fan_in;
                e.extend((j * block..sink).map(|t| (t, sink)));
                if j + 1 < blocks {
                    e.push((sink, sink + block));
                }
            }
            e
        }
        Family::Cliques => {
            let size = 6u32;
            let mut e = Vec::new();
            for base in (0..n32).step_by(size as usize) {
                let top = (base + size).min(n32);
                for a in base..top {
                    for b in a + 1..top {
                        e.push((a, b));
                    }
                }
            }
            e
        }
    };
    Ok(edges)
}

fn amortized_stress(
    n: usize,
    family: Family,
    rng: &mut ChaCha8Rng,
) -> Result<Workload, GenerateError> {
    if n < 2 {
        return Err(GenerateError("amortized_stress needs n >= 2".into()));
    }
    let edges = family_edges(n, family, rng)?;
    let mut w = Workload::new(n);
    insert_all(&mut w, &edges);
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    for v in order {
        w.push(WorkloadEvent::Query(NodeId(v)));
    }
    Ok(w)
}

/// Funnels of `fan_in` feeders into a sink, sinks chained in id order. Feeder
/// ids sit below their sink so both orientation strategies point feeder arcs
/// into the sink and chain arcs forward. Every feeder is queried (in seeded
/// order) before a final sweep, leaving each sink `fan_in` processed in-arcs
/// short of the next recursion. For `d > 2` a `(d+1)`-clique is appended so
/// the exact-degeneracy cap equals `d`.
fn vstar_stress(
    n: usize,
    d: usize,
    fan_in: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Workload, GenerateError> {
    if d < 2 {
        return Err(GenerateError("d must be >= 2".into()));
    }
    if fan_in == 0 {
        return Err(GenerateError("fan_in must be positive".into()));
    }
    let block = fan_in + 1;
    let clique = if d > 2 { d + 1 } else { 0 };
    if n < block + clique {
        return Err(GenerateError(format!(
            "n = {n} too small for one funnel of fan-in {fan_in}"
        )));
    }
    let blocks = (n - clique) / block;
    let mut w = Workload::new(n);
    let mut feeders = Vec::with_capacity(blocks * fan_in);
    for j in 0..blocks {
        let sink = (j * block + fan_in) as u32;
        for t in (j * block) as u32..sink {
            w.push(WorkloadEvent::Insert(NodeId(t), NodeId(sink)));
            feeders.push(t);
        }
    }
    for j in 0..blocks.saturating_sub(1) {
        let sink = (j * block + fan_in) as u32;
        w.push(WorkloadEvent::Insert(
            NodeId(sink),
            NodeId(sink + block as u32),
        ));
    }
    let base = (n - clique) as u32;
    for a in base..n as u32 {
        for b in a + 1..n as u32 {
            w.push(WorkloadEvent::Insert(NodeId(a), NodeId(b)));
        }
    }
    feeders.shuffle(rng);
    for t in feeders {
        w.push(WorkloadEvent::Query(NodeId(t)));
    }
    w.push(WorkloadEvent::SweepAll);
    Ok(w)
}
