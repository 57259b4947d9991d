//! Workload replay against a configured coloring stack.

use std::collections::BTreeSet;
use std::io::{self, Write};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use super::workload::{Workload, WorkloadEvent};
use crate::graph_store::NodeId;
use crate::implicit_color::{ColorParams, PolicyKind, RecursionPolicy};
use crate::oracle::{reconstruct_ap_invariant, verify_proper};
use crate::orientation::{OrientationStrategy, StrategyKind};
use crate::partition::{PartitionConfig, PartitionError, PartitionedColorer, UpdateOp};

/// A-p reconstruction is only run in strict mode on graphs up to this size.
pub const AP_CHECK_LIMIT: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub policy: PolicyKind,
    pub orientation: StrategyKind,
    pub partition_k: usize,
    pub seed: u64,
    pub params: ColorParams,
    pub cap_multiplier: f64,
    pub rebuild_interval: usize,
    /// Full-scan invariant checks after every event.
    pub strict: bool,
    /// Include wall-clock timings in the summary (makes output nondeterministic).
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            policy: PolicyKind::Deterministic,
            orientation: StrategyKind::AmortizedFlip,
            partition_k: 1,
            seed: 0,
            params: ColorParams::default(),
            cap_multiplier: 4.0,
            rebuild_interval: 1,
            strict: false,
            timings: false,
        }
    }
}

impl RunConfig {
    fn partition_config(&self) -> PartitionConfig {
        let strategy = OrientationStrategy {
            cap_multiplier: self.cap_multiplier,
            rebuild_interval: self.rebuild_interval,
            ..OrientationStrategy::of_kind(self.orientation)
        };
        PartitionConfig {
            k: self.partition_k,
            seed: self.seed,
            strategy,
            policy: RecursionPolicy {
                kind: self.policy,
                rng_seed: self.seed ^ 0xC0FF_EE00_D15E_A5E5,
            },
            params: self.params,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueryRecord {
    pub node: NodeId,
    pub color: u32,
    pub part: usize,
    pub local_color: u32,
    pub vstar_size: usize,
    pub triggers: usize,
    pub epoch: u64,
    pub d: usize,
    /// Colored nodes across all parts after the query.
    pub colored: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpochStat {
    pub epoch: u64,
    pub queried: usize,
    pub colored: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub insert_ns_mean: f64,
    pub delete_ns_mean: f64,
    pub query_ns_mean: f64,
    pub sweep_ns_mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub n: usize,
    pub policy: PolicyKind,
    pub orientation: &'static str,
    pub partition_k: usize,
    pub seed: u64,
    pub updates: usize,
    pub queries: usize,
    pub sweeps: usize,
    pub vstar_max: usize,
    pub vstar_mean: f64,
    pub vstar_p99: usize,
    pub distinct_colors: usize,
    pub max_color: u32,
    pub conflicts: usize,
    pub invariant_violations: usize,
    pub epochs: Vec<EpochStat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub records: Vec<QueryRecord>,
    pub summary: RunSummary,
    /// Human-readable description of each invariant violation.
    pub violations: Vec<String>,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum JsonLine<'a> {
    Query(&'a QueryRecord),
    Summary(&'a RunSummary),
}

impl RunReport {
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, &JsonLine::Query(r))?;
            out.write_all(b"\n")?;
        }
        serde_json::to_writer(&mut out, &JsonLine::Summary(&self.summary))?;
        out.write_all(b"\n")
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    /// 0 iff no conflicts and no invariant violations.
    pub fn exit_code(&self) -> i32 {
        if self.summary.conflicts == 0 && self.summary.invariant_violations == 0 {
            0
        } else {
            1
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RunError {
    /// The workload is well-formed text but not a valid update sequence.
    #[error("line {line}: {message}")]
    Workload { line: usize, message: String },
    #[error("line {line}: invariant violation: {message}")]
    InvariantViolation { line: usize, message: String },
    #[error("bad configuration: {0}")]
    Config(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::InvariantViolation { .. } => 1,
            RunError::Workload { .. } | RunError::Config(_) => 2,
        }
    }
}

struct EpochTracker {
    epoch: u64,
    seen: Vec<bool>,
    queried: Vec<NodeId>,
    stats: Vec<EpochStat>,
}

impl EpochTracker {
    fn close(&mut self, colored: usize) {
        if self.queried.is_empty() {
            return;
        }
        self.stats.push(EpochStat {
            epoch: self.epoch,
            queried: self.queried.len(),
            colored,
            ratio: colored as f64 / self.queried.len() as f64,
        });
        for v in self.queried.drain(..) {
            self.seen[v.index()] = false;
        }
    }

    fn note(&mut self, v: NodeId) {
        if !self.seen[v.index()] {
            self.seen[v.index()] = true;
            self.queried.push(v);
        }
    }
}

#[derive(Default)]
struct Clock {
    ns: [u128; 4],
    count: [u64; 4],
}

impl Clock {
    fn mean(&self, i: usize) -> f64 {
        if self.count[i] == 0 {
            0.0
        } else {
            self.ns[i] as f64 / self.count[i] as f64
        }
    }
}

struct Runner<'a> {
    cfg: &'a RunConfig,
    pc: PartitionedColorer,
    records: Vec<QueryRecord>,
    violations: Vec<String>,
    conflicts: usize,
}

impl Runner<'_> {
    fn colored_now(&self) -> usize {
        self.pc
            .parts()
            .iter()
            .filter(|p| p.coloring_current())
            .map(|p| p.state.colored_total())
            .sum()
    }

    fn query(&mut self, v: NodeId, line: usize) -> Result<(), RunError> {
        let q = self.pc.query_color_global(v).map_err(|e| match e {
            PartitionError::Color(c) => RunError::InvariantViolation {
                line,
                message: c.to_string(),
            },
            other => RunError::Workload {
                line,
                message: other.to_string(),
            },
        })?;
        let stack = &self.pc.parts()[q.part];
        let palette = stack.state.palette_size();
        if q.local.color as usize > palette {
            self.violations.push(format!(
                "line {line}: node {v} got color {} above palette {palette}",
                q.local.color
            ));
        }
        if self.cfg.strict {
            let bad = stack.state.uncolored_count_violations(&stack.graph);
            if !bad.is_empty() {
                self.violations.push(format!(
                    "line {line}: {} uncolored node(s) exceed {} processed in-arcs",
                    bad.len(),
                    stack.state.threshold()
                ));
            }
            if self.pc.node_count() <= AP_CHECK_LIMIT
                && !reconstruct_ap_invariant(&stack.state, &stack.graph)
            {
                self.violations.push(format!(
                    "line {line}: processed-arc set disagrees with colored set"
                ));
            }
        }
        let d = stack.state.d();
        self.records.push(QueryRecord {
            node: v,
            color: q.color,
            part: q.part,
            local_color: q.local.color,
            vstar_size: q.local.vstar_size,
            triggers: q.local.trigger_arcs.len(),
            epoch: 0,
            d,
            colored: 0,
        });
        let colored = self.colored_now();
        let rec = self.records.last_mut().unwrap();
        rec.colored = colored;
        Ok(())
    }

    fn update(&mut self, op: UpdateOp, u: NodeId, v: NodeId, line: usize) -> Result<(), RunError> {
        let flips = self
            .pc
            .route_update(op, u, v)
            .map_err(|e| RunError::Workload {
                line,
                message: e.to_string(),
            })?;
        let part = self.pc.part_of(u);
        if self.pc.part_of(v) != part {
            return Ok(());
        }
        let g = &self.pc.parts()[part].graph;
        let over: Vec<NodeId> = if self.cfg.strict {
            g.nodes().filter(|&x| g.out_degree(x) > g.cap()).collect()
        } else {
            flips
                .iter()
                .map(|a| a.tail)
                .filter(|&x| g.out_degree(x) > g.cap())
                .collect()
        };
        if !over.is_empty() {
            self.violations.push(format!(
                "line {line}: {} node(s) exceed outdegree cap {}",
                over.len(),
                g.cap()
            ));
        }
        Ok(())
    }

    fn sweep(&mut self, line: usize) -> Result<(), RunError> {
        for v in 0..self.pc.node_count() {
            self.query(NodeId::from(v), line)?;
        }
        let colors = self.pc.global_colors();
        let bad = verify_proper(&self.pc.edges(), &colors);
        self.conflicts += bad.len();
        if self.cfg.strict {
            for (i, p) in self.pc.parts().iter().enumerate() {
                if let Err(msg) = p.graph.check_invariants() {
                    self.violations
                        .push(format!("line {line}: part {i}: {msg}"));
                }
            }
        }
        Ok(())
    }
}

pub fn run(workload: &Workload, config: &RunConfig) -> Result<RunReport, RunError> {
    if config.partition_k == 0 {
        return Err(RunError::Config("partition k must be >= 1".into()));
    }
    let pc = PartitionedColorer::new(workload.n, config.partition_config())
        .map_err(|e| RunError::Config(e.to_string()))?;
    let mut runner = Runner {
        cfg: config,
        pc,
        records: Vec::new(),
        violations: Vec::new(),
        conflicts: 0,
    };
    let mut tracker = EpochTracker {
        epoch: 0,
        seen: vec![false; workload.n],
        queried: Vec::new(),
        stats: Vec::new(),
    };
    let mut clock = Clock::default();
    let (mut updates, mut sweeps) = (0usize, 0usize);

    for (i, event) in workload.events.iter().enumerate() {
        let line = workload.line_of(i);
        let started = config.timings.then(Instant::now);
        let class = match *event {
            WorkloadEvent::Insert(u, v) | WorkloadEvent::Delete(u, v) => {
                let op = if matches!(event, WorkloadEvent::Insert(..)) {
                    UpdateOp::Insert
                } else {
                    UpdateOp::Delete
                };
                runner.update(op, u, v, line)?;
                tracker.close(runner.colored_now());
                updates += 1;
                tracker.epoch = updates as u64;
                if op == UpdateOp::Insert {
                    0
                } else {
                    1
                }
            }
            WorkloadEvent::Query(v) => {
                let before = runner.records.len();
                runner.query(v, line)?;
                for r in &mut runner.records[before..] {
                    r.epoch = tracker.epoch;
                }
                tracker.note(v);
                2
            }
            WorkloadEvent::SweepAll => {
                let before = runner.records.len();
                runner.sweep(line)?;
                for r in &mut runner.records[before..] {
                    r.epoch = tracker.epoch;
                    tracker.note(r.node);
                }
                sweeps += 1;
                3
            }
        };
        if let Some(t) = started {
            clock.ns[class] += t.elapsed().as_nanos();
            clock.count[class] += 1;
        }
    }
    tracker.close(runner.colored_now());

    let records = runner.records;
    let mut sizes: Vec<usize> = records.iter().map(|r| r.vstar_size).collect();
    sizes.sort_unstable();
    let vstar_p99 = if sizes.is_empty() {
        0
    } else {
        let rank = ((sizes.len() as f64) * 0.99).ceil() as usize;
        sizes[rank.clamp(1, sizes.len()) - 1]
    };
    let vstar_mean = if sizes.is_empty() {
        0.0
    } else {
        sizes.iter().sum::<usize>() as f64 / sizes.len() as f64
    };
    let colors: BTreeSet<u32> = records.iter().map(|r| r.color).collect();
    let summary = RunSummary {
        n: workload.n,
        policy: config.policy,
        orientation: match config.orientation {
            StrategyKind::StaticRecompute => "static",
            StrategyKind::AmortizedFlip => "amortized",
        },
        partition_k: config.partition_k,
        seed: config.seed,
        updates,
        queries: records.len(),
        sweeps,
        vstar_max: sizes.last().copied().unwrap_or(0),
        vstar_mean,
        vstar_p99,
        distinct_colors: colors.len(),
        max_color: colors.last().copied().unwrap_or(0),
        conflicts: runner.conflicts,
        invariant_violations: runner.violations.len(),
        epochs: tracker.stats,
        timings: config.timings.then(|| Timings {
            insert_ns_mean: clock.mean(0),
            delete_ns_mean: clock.mean(1),
            query_ns_mean: clock.mean(2),
            sweep_ns_mean: clock.mean(3),
        }),
    };
    Ok(RunReport {
        records,
        summary,
        violations: runner.violations,
    })
}
