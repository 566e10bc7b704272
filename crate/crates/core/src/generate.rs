//! Deterministic toy graphs and a seeded synthetic temporal network whose node dropout is
//! driven by `mb` importance.

use std::collections::btree_map::Entry;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{numbered_ids, Edge, Snapshot, StrengthMode, TemporalNetwork};
use crate::importance::{node_importance, Scheme};

fn push_clique(edges: &mut Vec<Edge>, nodes: std::ops::Range<usize>, weight: f64) {
    for i in nodes.clone() {
        for j in i + 1..nodes.end {
            edges.push(Edge::new(i, j, weight));
        }
    }
}

/// Two unit-weight cliques joined through a path of `bridge` nodes.
///
/// Nodes `0..n_left` form the first clique, the next `bridge` nodes the path, and the
/// rest the second clique. The path runs from node `n_left - 1` to node
/// `n_left + bridge`; with `bridge = 0` those two nodes are joined directly.
pub fn gen_barbell(n_left: usize, bridge: usize, n_right: usize) -> Result<Snapshot> {
    if n_left < 2 || n_right < 2 {
        return Err(Error::Argument(format!(
            "barbell cliques need at least 2 nodes each, got {n_left} and {n_right}"
        )));
    }
    let n = n_left + bridge + n_right;
    let mut edges = Vec::new();
    push_clique(&mut edges, 0..n_left, 1.0);
    push_clique(&mut edges, n_left + bridge..n, 1.0);
    for i in n_left - 1..n_left + bridge {
        edges.push(Edge::new(i, i + 1, 1.0));
    }
    Snapshot::new(numbered_ids(n), edges, false, 0)
}

pub fn gen_clique(n: usize, weight: f64) -> Result<Snapshot> {
    let mut edges = Vec::new();
    push_clique(&mut edges, 0..n, weight);
    Snapshot::new(numbered_ids(n), edges, false, 0)
}

pub fn gen_cycle(n: usize, weight: f64) -> Result<Snapshot> {
    if n < 3 {
        return Err(Error::Argument(format!("a cycle needs at least 3 nodes, got {n}")));
    }
    let edges = (0..n).map(|i| Edge::new(i, (i + 1) % n, weight)).collect();
    Snapshot::new(numbered_ids(n), edges, false, 0)
}

/// Unit-weight cliques of the given sizes with no edges between them.
pub fn gen_disjoint_cliques(sizes: &[usize]) -> Result<Snapshot> {
    let mut edges = Vec::new();
    let mut start = 0;
    for &k in sizes {
        push_clique(&mut edges, start..start + k, 1.0);
        start += k;
    }
    Snapshot::new(numbered_ids(start), edges, false, 0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub n: usize,
    pub communities: usize,
    pub hub_count: usize,
    /// Slope of the keep-probability logit on the standardized previous-snapshot `mb`.
    pub dropout_coupling: f64,
    pub horizon: usize,
    /// Keep-probability logit of a node with average `mb`.
    pub base_logit: f64,
    /// Standard deviation of the per-snapshot log-normal weight noise.
    pub weight_noise: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            n: 120,
            communities: 4,
            hub_count: 4,
            dropout_coupling: -2.0,
            horizon: 30,
            base_logit: 2.5,
            weight_noise: 0.1,
        }
    }
}

pub(crate) fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Planted-community weighted graph with a few cross-community hubs.
fn base_graph(cfg: &SyntheticConfig, rng: &mut ChaCha8Rng) -> Result<Snapshot> {
    let n = cfg.n;
    let c = cfg.communities;
    // Community sizes proportional to 1, 2, .., c.
    let total: usize = (1..=c).sum();
    let mut sizes: Vec<usize> = (1..=c).map(|k| k * n / total).collect();
    let assigned: usize = sizes.iter().sum();
    sizes[c - 1] += n - assigned;

    let std_normal: Normal<f64> = Normal::new(0.0, 1.0).expect("valid normal");
    let fitness: Vec<f64> = (0..n).map(|_| (0.5 * std_normal.sample(rng)).exp()).collect();
    let weight = |rng: &mut ChaCha8Rng, i: usize, j: usize| {
        (0.5 * std_normal.sample(rng)).exp() * (fitness[i] * fitness[j]).sqrt()
    };

    let mut adj = std::collections::BTreeMap::new();
    let mut start = 0;
    for &size in &sizes {
        let members: Vec<usize> = (start..start + size).collect();
        let reach = 3.min(size.saturating_sub(1) / 2).max(1);
        for (a, &i) in members.iter().enumerate() {
            for step in 1..=reach {
                let j = members[(a + step) % size];
                if i != j {
                    let key = (i.min(j), i.max(j));
                    if let Entry::Vacant(slot) = adj.entry(key) {
                        slot.insert(weight(rng, i, j));
                    }
                }
            }
        }
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                let p = (0.1 * fitness[i] * fitness[j]).min(1.0_f64);
                if rng.gen::<f64>() < p && !adj.contains_key(&(i, j)) {
                    let w = weight(rng, i, j);
                    adj.insert((i, j), w);
                }
            }
        }
        start += size;
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < 0.005 && !adj.contains_key(&(i, j)) {
                let w = weight(rng, i, j);
                adj.insert((i, j), w);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for &h in order.iter().take(cfg.hub_count) {
        for j in 0..n {
            if j != h && rng.gen::<f64>() < 0.15 {
                let key = (h.min(j), h.max(j));
                if let Entry::Vacant(slot) = adj.entry(key) {
                    slot.insert(2.0 * weight(rng, h, j));
                }
            }
        }
    }
    let edges = adj.into_iter().map(|((i, j), w)| Edge::new(i, j, w)).collect();
    Snapshot::new(numbered_ids(n), edges, false, 0)
}

fn standardized(values: &[(usize, f64)]) -> Vec<(usize, f64)> {
    let k = values.len() as f64;
    let mean = values.iter().map(|v| v.1).sum::<f64>() / k;
    let var = values.iter().map(|v| (v.1 - mean).powi(2)).sum::<f64>() / k;
    let sd = var.sqrt();
    values
        .iter()
        .map(|&(i, v)| (i, if sd > 0.0 { (v - mean) / sd } else { 0.0 }))
        .collect()
}

/// Links every kept node that lost all its base neighbours to a uniformly drawn other
/// kept node, so that presence in a snapshot is exactly the keep decision.
fn attach_isolated_survivors(base: &Snapshot, keep: &[bool], edges: &mut Vec<Edge>, rng: &mut ChaCha8Rng) {
    let survivors: Vec<usize> = (0..keep.len()).filter(|&i| keep[i]).collect();
    if survivors.len() < 2 {
        return;
    }
    let mut linked = vec![false; keep.len()];
    for e in edges.iter() {
        linked[e.src] = true;
        linked[e.dst] = true;
    }
    let mut present: std::collections::BTreeSet<(usize, usize)> = edges.iter().map(|e| (e.src, e.dst)).collect();
    let strengths = base.strengths(StrengthMode::Total);
    let degrees = base.degrees();
    for &i in &survivors {
        if linked[i] {
            continue;
        }
        let j = loop {
            let j = survivors[rng.gen_range(0..survivors.len())];
            if j != i {
                break j;
            }
        };
        let key = (i.min(j), i.max(j));
        if present.insert(key) {
            // Mean base weight of the isolated node.
            let w = if degrees[i] > 0 {
                strengths[i] / degrees[i] as f64
            } else {
                1.0
            };
            edges.push(Edge::new(key.0, key.1, w));
        }
        linked[i] = true;
        linked[j] = true;
    }
}

/// Seeded temporal network in which each node's survival into the next snapshot depends
/// on its current `mb` importance.
///
/// Snapshot 0 is the full base graph. In every later snapshot each node is kept with
/// probability `logistic(base_logit + dropout_coupling · z)`, where `z` is the node's
/// standardized `mb` in the most recent snapshot it appeared in. Kept nodes retain their
/// base edges to other kept nodes, with weights multiplied by log-normal noise.
pub fn gen_synthetic_temporal(cfg: &SyntheticConfig, seed: u64) -> Result<TemporalNetwork> {
    if cfg.communities < 1 || cfg.n < cfg.communities {
        return Err(Error::Argument(format!(
            "need n >= communities >= 1, got n={} communities={}",
            cfg.n, cfg.communities
        )));
    }
    if cfg.horizon < 2 {
        return Err(Error::Argument(format!(
            "horizon must be at least 2, got {}",
            cfg.horizon
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = base_graph(cfg, &mut rng)?;
    let noise = Normal::new(0.0, cfg.weight_noise.max(0.0)).map_err(|e| Error::Argument(e.to_string()))?;

    let mut z = vec![0.0; cfg.n];
    let mut snapshots = vec![base.clone()];
    for t in 1..cfg.horizon {
        let prev = &snapshots[t - 1];
        let mb = node_importance(prev, Scheme::Mb)?;
        let values: Vec<(usize, f64)> = mb.values.into_iter().collect();
        if values.len() > 1 {
            for (i, zi) in standardized(&values) {
                z[i] = zi;
            }
        }
        let keep: Vec<bool> = z
            .iter()
            .map(|&zi| rng.gen::<f64>() < logistic(cfg.base_logit + cfg.dropout_coupling * zi))
            .collect();
        let mut edges: Vec<Edge> = base
            .edges()
            .iter()
            .filter_map(|e| {
                let w = e.weight * noise.sample(&mut rng).exp();
                (keep[e.src] && keep[e.dst]).then(|| Edge::new(e.src, e.dst, w))
            })
            .collect();
        attach_isolated_survivors(&base, &keep, &mut edges, &mut rng);
        snapshots.push(Snapshot::new(base.node_ids().to_vec(), edges, false, t)?);
    }
    TemporalNetwork::new(base.node_ids().to_vec(), snapshots)
}
