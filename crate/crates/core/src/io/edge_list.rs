//! SNAP-style directed edge lists with optional per-topic weights.

use std::io::{BufRead, BufReader, Read};

use crate::applications::TopicGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// Lines are `u v`; weights are jittered `1/indeg` drawn from `seed`.
    Derived { seed: u64 },
    /// Lines are `u v w1 … wk`.
    Explicit,
}

#[derive(Debug)]
pub struct EdgeListReport {
    pub graph: TopicGraph,
    pub accepted: usize,
    /// Blank and `#` comment lines.
    pub ignored: usize,
    pub rejected: Vec<Error>,
    /// Explicit in-weight sums above 1 were scaled down.
    pub renormalized: bool,
}

impl EdgeListReport {
    pub fn total_lines(&self) -> usize {
        self.accepted + self.ignored + self.rejected.len()
    }
}

pub(crate) fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
}

pub(crate) fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

fn parse_line(line: &str, no: usize, k: usize, mode: WeightMode) -> Result<(usize, usize, Vec<f64>)> {
    let toks: Vec<&str> = fields(line).collect();
    let node = |s: &str| {
        s.parse::<usize>().map_err(|_| Error::MalformedLine {
            line: no,
            reason: format!("invalid node id {s:?}"),
        })
    };
    if toks.len() < 2 {
        return Err(Error::MalformedLine {
            line: no,
            reason: "expected at least two node ids".into(),
        });
    }
    let (u, v) = (node(toks[0])?, node(toks[1])?);
    match mode {
        WeightMode::Derived { .. } => {
            if toks.len() != 2 {
                return Err(Error::MalformedLine {
                    line: no,
                    reason: format!("expected 2 fields, found {}", toks.len()),
                });
            }
            Ok((u, v, Vec::new()))
        }
        WeightMode::Explicit => {
            let mut w = Vec::with_capacity(k);
            for s in &toks[2..] {
                let x: f64 = s.parse().map_err(|_| Error::MalformedLine {
                    line: no,
                    reason: format!("invalid weight {s:?}"),
                })?;
                if !(0.0..=1.0).contains(&x) {
                    return Err(Error::WeightOutOfRange { line: no, value: x });
                }
                w.push(x);
            }
            if w.len() != k {
                return Err(Error::MalformedLine {
                    line: no,
                    reason: format!("expected {k} weights, found {}", w.len()),
                });
            }
            Ok((u, v, w))
        }
    }
}

/// Parses every line, collecting malformed ones instead of failing.
pub fn parse_edge_list_lenient<R: Read>(stream: R, k: usize, mode: WeightMode) -> Result<EdgeListReport> {
    read(stream, k, mode, false)
}

/// Parses an edge list, failing on the first malformed line.
pub fn parse_edge_list<R: Read>(stream: R, k: usize, mode: WeightMode) -> Result<TopicGraph> {
    read(stream, k, mode, true).map(|r| r.graph)
}

fn read<R: Read>(stream: R, k: usize, mode: WeightMode, strict: bool) -> Result<EdgeListReport> {
    if k == 0 {
        return Err(Error::Config("k must be positive".into()));
    }
    let mut edges = Vec::new();
    let mut ignored = 0;
    let mut rejected = Vec::new();
    let mut nodes = 0;
    for (idx, line) in BufReader::new(stream).lines().enumerate() {
        let line = line?;
        if is_skippable(&line) {
            ignored += 1;
            continue;
        }
        match parse_line(&line, idx + 1, k, mode) {
            Ok(edge) => {
                nodes = nodes.max(edge.0 + 1).max(edge.1 + 1);
                edges.push(edge);
            }
            Err(e) if strict => return Err(e),
            Err(e) => rejected.push(e),
        }
    }
    let accepted = edges.len();
    let (graph, renormalized) = match mode {
        WeightMode::Derived { seed } => {
            let pairs = edges.into_iter().map(|(u, v, _)| (u, v)).collect();
            (TopicGraph::with_derived_weights(nodes, k, pairs, seed)?, false)
        }
        WeightMode::Explicit => TopicGraph::new_renormalized(nodes, k, edges)?,
    };
    Ok(EdgeListReport {
        graph,
        accepted,
        ignored,
        rejected,
        renormalized,
    })
}
