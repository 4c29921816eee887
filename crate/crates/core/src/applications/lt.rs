//! Multi-topic Linear Threshold influence spread.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kset::{Element, KSet};
use crate::oracle::Objective;

const WEIGHT_SLACK: f64 = 1e-9;

/// Directed graph with `k` LT weights per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicGraph {
    nodes: usize,
    k: usize,
    edges: Vec<(usize, usize)>,
    /// `weights[edge * k + (i - 1)] = w^i(u, v)`.
    weights: Vec<f64>,
    out_edges: Vec<Vec<usize>>,
    in_sums: Vec<f64>,
}

impl TopicGraph {
    /// Builds a graph from explicit weights. Every weight must lie in
    /// `[0, 1]` and every in-weight sum per topic must be at most 1.
    pub fn new(nodes: usize, k: usize, edges: Vec<(usize, usize, Vec<f64>)>) -> Result<Self> {
        let g = Self::build(nodes, k, edges)?;
        for v in 0..nodes {
            for i in 1..=k {
                let s = g.in_weight_sum(v, i);
                if s > 1.0 + WEIGHT_SLACK {
                    return Err(Error::InvalidInstance(format!(
                        "in-weight sum {s} > 1 at node {v}, topic {i}"
                    )));
                }
            }
        }
        Ok(g)
    }

    /// Like [`TopicGraph::new`], but scales down every `(node, topic)` whose
    /// in-weight sum exceeds 1. The flag reports whether anything changed.
    pub fn new_renormalized(
        nodes: usize,
        k: usize,
        edges: Vec<(usize, usize, Vec<f64>)>,
    ) -> Result<(Self, bool)> {
        let mut g = Self::build(nodes, k, edges)?;
        let changed = g.renormalize();
        Ok((g, changed))
    }

    /// Weights `w^i(u,v) = j_i(u,v) / indeg(v)` with jitter `j_i ~ U[0.8, 1.2]`,
    /// then renormalized so in-weight sums stay at most 1.
    pub fn with_derived_weights(
        nodes: usize,
        k: usize,
        edges: Vec<(usize, usize)>,
        seed: u64,
    ) -> Result<Self> {
        let mut indeg = vec![0usize; nodes];
        for &(u, v) in &edges {
            if u >= nodes || v >= nodes {
                return Err(Error::UnknownNode(u.max(v)));
            }
            indeg[v] += 1;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<Vec<f64>> = edges
            .iter()
            .map(|&(_, v)| {
                (0..k)
                    .map(|_| rng.gen_range(0.8..=1.2) / indeg[v] as f64)
                    .collect()
            })
            .collect();
        let mut sums = vec![0.0; nodes * k];
        for (&(_, v), w) in edges.iter().zip(&raw) {
            for i in 0..k {
                sums[v * k + i] += w[i];
            }
        }
        let weighted = edges
            .into_iter()
            .zip(raw)
            .map(|((u, v), w)| {
                let w = (0..k).map(|i| w[i] / sums[v * k + i].max(1.0)).collect();
                (u, v, w)
            })
            .collect();
        Self::build(nodes, k, weighted)
    }

    fn build(nodes: usize, k: usize, edges: Vec<(usize, usize, Vec<f64>)>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInstance("k must be positive".into()));
        }
        let mut out_edges = vec![Vec::new(); nodes];
        let mut in_sums = vec![0.0; nodes * k];
        let mut flat = Vec::with_capacity(edges.len());
        let mut weights = Vec::with_capacity(edges.len() * k);
        for (idx, (u, v, w)) in edges.into_iter().enumerate() {
            if u >= nodes {
                return Err(Error::UnknownNode(u));
            }
            if v >= nodes {
                return Err(Error::UnknownNode(v));
            }
            if w.len() != k {
                return Err(Error::InvalidInstance(format!(
                    "edge ({u},{v}) has {} weights, expected {k}",
                    w.len()
                )));
            }
            for (i, &x) in w.iter().enumerate() {
                if !(0.0..=1.0).contains(&x) {
                    return Err(Error::InvalidInstance(format!(
                        "weight {x} on edge ({u},{v}) outside [0,1]"
                    )));
                }
                in_sums[v * k + i] += x;
            }
            out_edges[u].push(idx);
            flat.push((u, v));
            weights.extend(w);
        }
        Ok(Self {
            nodes,
            k,
            edges: flat,
            weights,
            out_edges,
            in_sums,
        })
    }

    fn renormalize(&mut self) -> bool {
        let k = self.k;
        let mut changed = false;
        for (idx, &(_, v)) in self.edges.iter().enumerate() {
            for i in 0..k {
                let s = self.in_sums[v * k + i];
                if s > 1.0 {
                    self.weights[idx * k + i] /= s;
                    changed = true;
                }
            }
        }
        if changed {
            self.in_sums.iter_mut().for_each(|s| *s = 0.0);
            for (idx, &(_, v)) in self.edges.iter().enumerate() {
                for i in 0..k {
                    self.in_sums[v * k + i] += self.weights[idx * k + i];
                }
            }
        }
        changed
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `w^i(u,v)` for edge `idx`, `i` in `1..=k`.
    pub fn weight(&self, idx: usize, i: usize) -> f64 {
        self.weights[idx * self.k + i - 1]
    }

    pub fn edge_weights(&self, idx: usize) -> &[f64] {
        &self.weights[idx * self.k..(idx + 1) * self.k]
    }

    pub fn in_weight_sum(&self, v: usize, i: usize) -> f64 {
        self.in_sums[v * self.k + i - 1]
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_edges[u].len()
    }

    fn check_seeds(&self, x: &KSet) -> Result<()> {
        if x.k() != self.k {
            return Err(Error::MismatchedK {
                left: x.k(),
                right: self.k,
            });
        }
        match x.support().find(|&e| e >= self.nodes) {
            Some(e) => Err(Error::UnknownNode(e)),
            None => Ok(()),
        }
    }
}

/// Monte Carlo LT spread `σ̂(x)` over a fixed sample of threshold profiles.
///
/// The `R × k × n` thresholds are drawn once in [`LtObjective::new`], so
/// repeated evaluations of the same k-set agree exactly. Topics spread
/// independently, so the activated sets of each `(topic, seed set)` are
/// cached and a k-set that differs from a recent one in a single topic
/// costs one topic's simulations.
pub struct LtObjective {
    graph: TopicGraph,
    samples: usize,
    seed: u64,
    thresholds: Vec<f64>,
    words: usize,
    reach: Mutex<ReachCache>,
}

/// Activated-node bitsets, `words` per simulation, keyed by topic and seed set.
type Reach = Arc<Vec<u64>>;

struct ReachCache {
    capacity: usize,
    entries: HashMap<(usize, Vec<Element>), Reach>,
}

const REACH_CACHE_BYTES: usize = 64 << 20;

impl LtObjective {
    pub fn new(graph: TopicGraph, samples: usize, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Config("mc-samples must be at least 1".into()));
        }
        let per = graph.k * graph.nodes;
        let mut thresholds = vec![0.0; samples * per];
        thresholds
            .par_chunks_mut(per.max(1))
            .enumerate()
            .for_each(|(r, chunk)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(r as u64);
                chunk.iter_mut().for_each(|t| *t = rng.gen::<f64>());
            });
        let words = graph.nodes.div_ceil(64).max(1);
        let capacity = (REACH_CACHE_BYTES / (8 * words * samples)).max(16);
        Ok(Self {
            graph,
            samples,
            seed,
            thresholds,
            words,
            reach: Mutex::new(ReachCache {
                capacity,
                entries: HashMap::new(),
            }),
        })
    }

    pub fn graph(&self) -> &TopicGraph {
        &self.graph
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Size of the union of activated sets in each simulation.
    pub fn union_counts(&self, x: &KSet) -> Vec<usize> {
        let reaches = self.topic_reaches(x);
        let w = self.words;
        (0..self.samples)
            .map(|r| {
                (0..w)
                    .map(|j| reaches.iter().fold(0u64, |acc, b| acc | b[r * w + j]).count_ones() as usize)
                    .sum()
            })
            .collect()
    }

    fn topic_reaches(&self, x: &KSet) -> Vec<Reach> {
        (1..=self.graph.k)
            .filter_map(|i| {
                let seeds: Vec<Element> = x.iter().filter(|&(_, p)| p == i).map(|(e, _)| e).collect();
                (!seeds.is_empty()).then(|| self.reach(i, seeds))
            })
            .collect()
    }

    fn reach(&self, i: usize, seeds: Vec<Element>) -> Reach {
        let key = (i, seeds);
        if let Some(hit) = self.lock().entries.get(&key) {
            return Arc::clone(hit);
        }
        let w = self.words;
        let mut bits = vec![0u64; self.samples * w];
        bits.par_chunks_mut(w).enumerate().for_each(|(r, out)| {
            SCRATCH.with(|cell| {
                let mut s = cell.borrow_mut();
                s.prepare(self.graph.nodes);
                self.spread(r, key.0, &key.1, &mut s, out);
            })
        });
        let bits = Arc::new(bits);
        let mut cache = self.lock();
        if cache.entries.len() >= cache.capacity {
            cache.entries.clear();
        }
        cache.entries.insert(key, Arc::clone(&bits));
        bits
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, ReachCache> {
        self.reach.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Runs topic `i` of simulation `r` and marks activated nodes in `out`.
    fn spread(&self, r: usize, i: usize, seeds: &[Element], s: &mut Scratch, out: &mut [u64]) {
        let g = &self.graph;
        let (n, k) = (g.nodes, g.k);
        let theta = &self.thresholds[(r * k + i - 1) * n..(r * k + i) * n];
        let epoch = s.bump();
        s.queue.clear();
        for &e in seeds {
            if s.active[e] != epoch {
                s.active[e] = epoch;
                s.queue.push(e);
            }
        }
        while let Some(u) = s.queue.pop() {
            out[u / 64] |= 1 << (u % 64);
            for &idx in &g.out_edges[u] {
                let v = g.edges[idx].1;
                if s.active[v] == epoch {
                    continue;
                }
                if s.acc_epoch[v] != epoch {
                    s.acc_epoch[v] = epoch;
                    s.acc[v] = 0.0;
                }
                s.acc[v] += g.weights[idx * k + i - 1];
                if s.acc[v] >= theta[v] {
                    s.active[v] = epoch;
                    s.queue.push(v);
                }
            }
        }
    }
}

/// Per-thread buffers whose entries are valid only when stamped with the
/// current epoch, so a simulation costs time proportional to what it reaches.
#[derive(Default)]
struct Scratch {
    epoch: u32,
    active: Vec<u32>,
    acc_epoch: Vec<u32>,
    acc: Vec<f64>,
    queue: Vec<usize>,
}

impl Scratch {
    fn prepare(&mut self, n: usize) {
        if self.active.len() < n {
            self.active.resize(n, 0);
            self.acc_epoch.resize(n, 0);
            self.acc.resize(n, 0.0);
        }
    }

    fn bump(&mut self) -> u32 {
        if self.epoch == u32::MAX {
            self.epoch = 0;
            self.active.iter_mut().for_each(|a| *a = 0);
            self.acc_epoch.iter_mut().for_each(|a| *a = 0);
        }
        self.epoch += 1;
        self.epoch
    }
}

thread_local! {
    static SCRATCH: RefCell<Scratch> = RefCell::new(Scratch::default());
}

impl Objective for LtObjective {
    fn k(&self) -> usize {
        self.graph.k
    }

    fn contains(&self, e: Element) -> bool {
        e < self.graph.nodes
    }

    fn evaluate(&self, x: &KSet) -> f64 {
        if x.is_empty() {
            return 0.0;
        }
        let total: usize = self.union_counts(x).iter().sum();
        total as f64 / self.samples as f64
    }
}

/// One-shot estimate of `σ(x)` with `samples` fresh simulations.
pub fn lt_spread_estimate(g: &TopicGraph, x: &KSet, samples: usize, seed: u64) -> Result<f64> {
    g.check_seeds(x)?;
    let f = LtObjective::new(g.clone(), samples, seed)?;
    Ok(f.evaluate(x))
}

/// Exact `σ(x)` by enumerating live-edge outcomes: every node keeps at most
/// one in-edge per topic, edge `(u,v)` with probability `w^i(u,v)`. Topics
/// are independent, so `P(v active) = 1 − Π_i (1 − P_i(v active))`.
///
/// Fails with [`Error::InstanceTooLarge`] when a topic has more than `cap`
/// outcomes.
pub fn lt_exact_spread(g: &TopicGraph, x: &KSet, cap: u64) -> Result<f64> {
    g.check_seeds(x)?;
    let n = g.nodes;
    let mut in_edges = vec![Vec::new(); n];
    for (idx, &(_, v)) in g.edges.iter().enumerate() {
        in_edges[v].push(idx);
    }
    let states: f64 = in_edges.iter().map(|e| (e.len() + 1) as f64).product();
    if states > cap as f64 {
        return Err(Error::InstanceTooLarge { states, cap });
    }

    let mut inactive = vec![1.0; n];
    for i in 1..=g.k {
        let seeds: Vec<usize> = x.iter().filter(|&(_, p)| p == i).map(|(e, _)| e).collect();
        let mut p_active = vec![0.0; n];
        let mut choice = vec![0usize; n];
        loop {
            let mut prob = 1.0;
            let mut live_parent = vec![None; n];
            for v in 0..n {
                let c = choice[v];
                if c == 0 {
                    prob *= 1.0 - g.in_weight_sum(v, i).min(1.0);
                } else {
                    let idx = in_edges[v][c - 1];
                    prob *= g.weight(idx, i);
                    live_parent[v] = Some(g.edges[idx].0);
                }
            }
            if prob > 0.0 {
                for v in 0..n {
                    let mut u = v;
                    let mut steps = 0;
                    let reached = loop {
                        if seeds.contains(&u) {
                            break true;
                        }
                        match live_parent[u] {
                            Some(p) if steps < n => {
                                u = p;
                                steps += 1;
                            }
                            _ => break false,
                        }
                    };
                    if reached {
                        p_active[v] += prob;
                    }
                }
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    break;
                }
                choice[pos] += 1;
                if choice[pos] <= in_edges[pos].len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
        for v in 0..n {
            inactive[v] *= 1.0 - p_active[v];
        }
    }
    Ok(inactive.iter().map(|q| 1.0 - q).sum())
}
