//! Line-oriented workload files.
//!
//! ```text
//! # comment
//! n 4
//! + 0 1
//! - 0 1
//! ? 2
//! ! all
//! ```

use std::fmt::{self, Write as _};
use std::path::Path;

use thiserror::Error;

use crate::graph_store::NodeId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WorkloadEvent {
    Insert(NodeId, NodeId),
    Delete(NodeId, NodeId),
    Query(NodeId),
    SweepAll,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Workload {
    pub n: usize,
    pub events: Vec<WorkloadEvent>,
    /// Source line of each event (1-based).
    pub lines: Vec<usize>,
}

impl Workload {
    pub fn new(n: usize) -> Self {
        Workload {
            n,
            events: Vec::new(),
            lines: Vec::new(),
        }
    }

    /// Append an event; its line is the one it will occupy when written out.
    pub fn push(&mut self, event: WorkloadEvent) {
        self.lines.push(self.events.len() + 2);
        self.events.push(event);
    }

    pub fn line_of(&self, event_index: usize) -> usize {
        self.lines
            .get(event_index)
            .copied()
            .unwrap_or(event_index + 2)
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut n: Option<usize> = None;
        let mut w = Workload::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| ParseError { line, message };
            let mut tok = content.split_whitespace();
            let head = tok.next().unwrap();
            let args: Vec<&str> = tok.collect();

            let Some(count) = n else {
                if head != "n" || args.len() != 1 {
                    return Err(err(format!(
                        "expected header `n <count>`, found `{content}`"
                    )));
                }
                let count = args[0]
                    .parse::<usize>()
                    .map_err(|_| err(format!("bad node count `{}`", args[0])))?;
                if count > u32::MAX as usize {
                    return Err(err(format!("node count {count} too large")));
                }
                n = Some(count);
                w.n = count;
                continue;
            };

            let node = |s: &str| -> Result<NodeId, ParseError> {
                let v = s
                    .parse::<u64>()
                    .map_err(|_| err(format!("bad node id `{s}`")))?;
                if v >= count as u64 {
                    return Err(err(format!("node {v} out of range for n = {count}")));
                }
                Ok(NodeId(v as u32))
            };
            let arity = |k: usize| -> Result<(), ParseError> {
                if args.len() == k {
                    Ok(())
                } else {
                    Err(err(format!(
                        "`{head}` takes {k} argument(s), got {}",
                        args.len()
                    )))
                }
            };
            let event = match head {
                "+" => {
                    arity(2)?;
                    WorkloadEvent::Insert(node(args[0])?, node(args[1])?)
                }
                "-" => {
                    arity(2)?;
                    WorkloadEvent::Delete(node(args[0])?, node(args[1])?)
                }
                "?" => {
                    arity(1)?;
                    WorkloadEvent::Query(node(args[0])?)
                }
                "!" => {
                    if args != ["all"] {
                        return Err(err(format!("expected `! all`, found `{content}`")));
                    }
                    WorkloadEvent::SweepAll
                }
                "n" => return Err(err("duplicate header".into())),
                other => return Err(err(format!("unknown event `{other}`"))),
            };
            w.events.push(event);
            w.lines.push(line);
        }
        if n.is_none() {
            return Err(ParseError {
                line: text.lines().count().max(1),
                message: "missing header `n <count>`".into(),
            });
        }
        Ok(w)
    }

    pub fn read(path: &Path) -> Result<Self, WorkloadReadError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| WorkloadReadError::Io(e.to_string()))?;
        Ok(Self::parse(&text)?)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorkloadReadError {
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl fmt::Display for WorkloadEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorkloadEvent::Insert(u, v) => write!(f, "+ {u} {v}"),
            WorkloadEvent::Delete(u, v) => write!(f, "- {u} {v}"),
            WorkloadEvent::Query(u) => write!(f, "? {u}"),
            WorkloadEvent::SweepAll => f.write_str("! all"),
        }
    }
}

impl fmt::Display for Workload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::with_capacity(8 * self.events.len() + 16);
        writeln!(out, "n {}", self.n)?;
        for e in &self.events {
            writeln!(out, "{e}")?;
        }
        f.write_str(&out)
    }
}
