//! Weighted snapshot graphs, temporal sequences of them, and dense adjacency matrices.
//!
//! Every snapshot inside a [`TemporalNetwork`] shares the network's node universe, so a
//! node index means the same participant in every time slice. A node that did not
//! transact in a given period is simply isolated (zero strength) in that snapshot.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(src: usize, dst: usize, weight: f64) -> Self {
        Edge { src, dst, weight }
    }
}

/// Which incident weights make up a node's strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrengthMode {
    #[default]
    Total,
    In,
    Out,
}

impl std::str::FromStr for StrengthMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "total" => Ok(StrengthMode::Total),
            "in" => Ok(StrengthMode::In),
            "out" => Ok(StrengthMode::Out),
            other => Err(Error::Argument(format!("unknown strength mode `{other}`"))),
        }
    }
}

/// One time slice of a weighted network.
///
/// Undirected edges are stored once with `src < dst`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    node_ids: Vec<String>,
    edges: Vec<Edge>,
    directed: bool,
    timestamp: usize,
}

impl Snapshot {
    /// Validates and canonicalizes a snapshot. Edges are sorted by `(src, dst)`.
    pub fn new(node_ids: Vec<String>, edges: Vec<Edge>, directed: bool, timestamp: usize) -> Result<Self> {
        let n = node_ids.len();
        let mut seen = HashSet::with_capacity(edges.len());
        let mut canon = Vec::with_capacity(edges.len());
        for e in edges {
            if e.src >= n || e.dst >= n {
                return Err(Error::Contract(format!(
                    "edge ({}, {}) references a node outside 0..{n}",
                    e.src, e.dst
                )));
            }
            if e.src == e.dst {
                return Err(Error::Contract(format!("self-loop on node {}", e.src)));
            }
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return Err(Error::Contract(format!(
                    "edge ({}, {}) has non-positive weight {}",
                    e.src, e.dst, e.weight
                )));
            }
            let e = if !directed && e.src > e.dst {
                Edge::new(e.dst, e.src, e.weight)
            } else {
                e
            };
            if !seen.insert((e.src, e.dst)) {
                return Err(Error::Contract(format!("duplicate edge ({}, {})", e.src, e.dst)));
            }
            canon.push(e);
        }
        canon.sort_by_key(|e| (e.src, e.dst));
        Ok(Snapshot {
            node_ids,
            edges: canon,
            directed,
            timestamp,
        })
    }

    pub fn node_ids(&self) -> &[String] {
        &self.node_ids
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn timestamp(&self) -> usize {
        self.timestamp
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.node_ids.iter().position(|n| n == id)
    }

    /// Strength of node `i`. Undirected snapshots ignore `mode`.
    pub fn strength(&self, i: usize, mode: StrengthMode) -> Result<f64> {
        if i >= self.node_count() {
            return Err(Error::Lookup(format!(
                "node index {i} not in snapshot of {} nodes",
                self.node_count()
            )));
        }
        Ok(self.strengths(mode)[i])
    }

    pub fn strengths(&self, mode: StrengthMode) -> Vec<f64> {
        let mut s = vec![0.0; self.node_count()];
        for e in &self.edges {
            if !self.directed {
                s[e.src] += e.weight;
                s[e.dst] += e.weight;
                continue;
            }
            match mode {
                StrengthMode::Out => s[e.src] += e.weight,
                StrengthMode::In => s[e.dst] += e.weight,
                StrengthMode::Total => {
                    s[e.src] += e.weight;
                    s[e.dst] += e.weight;
                }
            }
        }
        s
    }

    /// Number of distinct neighbours (in either direction).
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.node_count()];
        let mut seen = HashSet::new();
        for e in &self.edges {
            let key = (e.src.min(e.dst), e.src.max(e.dst));
            if seen.insert(key) {
                d[e.src] += 1;
                d[e.dst] += 1;
            }
        }
        d
    }

    /// Nodes with at least one incident edge.
    pub fn active_nodes(&self) -> Vec<usize> {
        let mut active = vec![false; self.node_count()];
        for e in &self.edges {
            active[e.src] = true;
            active[e.dst] = true;
        }
        (0..self.node_count()).filter(|&i| active[i]).collect()
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.edges.iter().any(|e| e.src == i || e.dst == i)
    }

    /// The subgraph induced on active nodes, with the mapping from its indices back
    /// to indices of `self`.
    pub fn active_subgraph(&self) -> (Snapshot, Vec<usize>) {
        let active = self.active_nodes();
        let mut local = vec![usize::MAX; self.node_count()];
        for (k, &i) in active.iter().enumerate() {
            local[i] = k;
        }
        let ids = active.iter().map(|&i| self.node_ids[i].clone()).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(local[e.src], local[e.dst], e.weight))
            .collect();
        let sub = Snapshot {
            node_ids: ids,
            edges,
            directed: self.directed,
            timestamp: self.timestamp,
        };
        (sub, active)
    }

    /// Relabels nodes so that old index `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Snapshot> {
        let n = self.node_count();
        if perm.len() != n {
            return Err(Error::Argument("permutation length mismatch".into()));
        }
        let mut ids = vec![String::new(); n];
        for (i, &p) in perm.iter().enumerate() {
            ids[p] = self.node_ids[i].clone();
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(perm[e.src], perm[e.dst], e.weight))
            .collect();
        Snapshot::new(ids, edges, self.directed, self.timestamp)
    }

    pub fn with_timestamp(mut self, timestamp: usize) -> Snapshot {
        self.timestamp = timestamp;
        self
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }
}

/// Time-ordered snapshots over one frozen node universe.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalNetwork {
    universe: Vec<String>,
    snapshots: Vec<Snapshot>,
}

impl TemporalNetwork {
    /// Every snapshot must be indexed by `universe` and timestamps must strictly increase.
    pub fn new(universe: Vec<String>, snapshots: Vec<Snapshot>) -> Result<Self> {
        let directed = snapshots.first().map(|s| s.directed);
        for w in snapshots.windows(2) {
            if w[1].timestamp <= w[0].timestamp {
                return Err(Error::Contract(format!(
                    "snapshot timestamps not strictly increasing ({} then {})",
                    w[0].timestamp, w[1].timestamp
                )));
            }
        }
        for s in &snapshots {
            if s.node_ids != universe {
                return Err(Error::Contract(format!(
                    "snapshot {} is not indexed by the network universe",
                    s.timestamp
                )));
            }
            if Some(s.directed) != directed {
                return Err(Error::Contract("mixed directed and undirected snapshots".into()));
            }
        }
        Ok(TemporalNetwork { universe, snapshots })
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn snapshot(&self, t: usize) -> Result<&Snapshot> {
        self.snapshots.get(t).ok_or_else(|| {
            Error::Lookup(format!(
                "snapshot {t} out of range (network has {})",
                self.snapshots.len()
            ))
        })
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn is_directed(&self) -> bool {
        self.snapshots.first().is_some_and(|s| s.directed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&NetworkFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

/// On-disk JSON layout of a [`TemporalNetwork`]:
///
/// ```json
/// { "directed": false,
///   "universe": ["a", "b", "c"],
///   "snapshots": [ { "timestamp": 0, "edges": [[0, 1, 2.5], [1, 2, 1.0]] } ] }
/// ```
///
/// Edge triples are `[src_index, dst_index, weight]` into `universe`.
#[derive(Debug, Serialize, Deserialize)]
pub struct NetworkFile {
    pub directed: bool,
    pub universe: Vec<String>,
    pub snapshots: Vec<SnapshotRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub timestamp: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl From<&TemporalNetwork> for NetworkFile {
    fn from(tn: &TemporalNetwork) -> Self {
        NetworkFile {
            directed: tn.is_directed(),
            universe: tn.universe.clone(),
            snapshots: tn
                .snapshots
                .iter()
                .map(|s| SnapshotRecord {
                    timestamp: s.timestamp,
                    edges: s.edges.iter().map(|e| (e.src, e.dst, e.weight)).collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<NetworkFile> for TemporalNetwork {
    type Error = Error;

    fn try_from(file: NetworkFile) -> Result<Self> {
        let snapshots = file
            .snapshots
            .into_iter()
            .map(|r| {
                let edges = r.edges.into_iter().map(|(s, d, w)| Edge::new(s, d, w)).collect();
                Snapshot::new(file.universe.clone(), edges, file.directed, r.timestamp)
            })
            .collect::<Result<Vec<_>>>()?;
        TemporalNetwork::new(file.universe, snapshots)
    }
}

/// Dense square matrix in row-major order.
///
/// Matrices built by [`adjacency`] have a zero diagonal and are exactly symmetric for
/// undirected snapshots.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl WeightedMatrix {
    pub fn zeros(n: usize) -> Self {
        WeightedMatrix {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Argument("matrix rows must form a square".into()));
        }
        Ok(WeightedMatrix {
            n,
            entries: rows.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn transpose(&self) -> WeightedMatrix {
        let mut t = WeightedMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// `self · selfᵀ`, symmetric by construction.
    pub fn gram(&self) -> WeightedMatrix {
        let n = self.n;
        let mut m = WeightedMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b).sum();
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scaled(&self, c: f64) -> WeightedMatrix {
        WeightedMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| v * c).collect(),
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.n];
        for i in 0..self.n {
            for (j, v) in self.row(i).iter().enumerate() {
                s[j] += v;
            }
        }
        s
    }
}

/// Dense weighted adjacency matrix of a snapshot.
pub fn adjacency(s: &Snapshot) -> WeightedMatrix {
    let mut a = WeightedMatrix::zeros(s.node_count());
    for e in &s.edges {
        a.set(e.src, e.dst, e.weight);
        if !s.directed {
            a.set(e.dst, e.src, e.weight);
        }
    }
    a
}

/// Strength of node `i` under `mode`; see [`Snapshot::strength`].
pub fn strength(s: &Snapshot, i: usize, mode: StrengthMode) -> Result<f64> {
    s.strength(i, mode)
}

pub(crate) fn numbered_ids(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}
