//! Per-node historical feature vectors and target labels for one prediction horizon.
//!
//! A node's feature at snapshot `t` is the mean of its per-snapshot measure over the
//! snapshots `0..t` in which it was present (had at least one edge). Nothing from
//! snapshot `t` or later enters the features.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Snapshot, StrengthMode, TemporalNetwork};
use crate::importance::{Scheme, SnapshotSpectrum};
use crate::netstats::{detect_communities, pagerank, pearson, PageRankOptions};

/// Fixed column order of a freshly built table.
pub const FEATURE_COLUMNS: [&str; 9] = [
    "ma",
    "mb",
    "mc",
    "md",
    "eig_centrality",
    "pagerank",
    "degree",
    "community_size",
    "presence_count",
];

/// Number of per-snapshot measures (every column except `presence_count`).
const MEASURES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// Node present at `t` is present again at `t + 1`.
    Presence,
    /// Strength moves by more than the threshold fraction between `t` and `t + 1`.
    Change,
    /// Strength increases between `t` and `t + 1`.
    Sign,
    /// Relative strength change `(S(t+1) − S(t)) / S(t)`.
    RelChange,
}

impl Target {
    pub fn is_binary(self) -> bool {
        !matches!(self, Target::RelChange)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Target::Presence => "presence",
            Target::Change => "change",
            Target::Sign => "sign",
            Target::RelChange => "rel_change",
        }
    }
}

impl std::str::FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "presence" => Ok(Target::Presence),
            "change" => Ok(Target::Change),
            "sign" => Ok(Target::Sign),
            "rel_change" | "rel-change" => Ok(Target::RelChange),
            other => Err(Error::Argument(format!("unknown target `{other}`"))),
        }
    }
}

/// All per-node measures of one snapshot; `None` for absent nodes.
#[derive(Debug, Clone)]
pub struct SnapshotMeasures {
    pub values: Vec<Option<[f64; MEASURES]>>,
    pub strengths: Vec<f64>,
}

impl SnapshotMeasures {
    pub fn compute(s: &Snapshot) -> Result<Self> {
        let n = s.node_count();
        let strengths = s.strengths(StrengthMode::Total);
        let mut values = vec![None; n];
        let (sub, nodes) = s.active_subgraph();
        if nodes.is_empty() {
            return Ok(SnapshotMeasures { values, strengths });
        }
        let spectral = SnapshotSpectrum::new(&sub)?;
        let schemes: Vec<_> = Scheme::UNDIRECTED
            .iter()
            .map(|&sc| spectral.importance(sc))
            .collect::<Result<_>>()?;
        let eig: Vec<f64> = spectral.spectrum.eigenvectors[0].iter().map(|c| c.abs()).collect();
        let pr = pagerank(&sub, PageRankOptions::default())?;
        let degree = sub.degrees();
        let communities = detect_communities(&sub)?;
        let sizes = communities.sizes();
        for (local, &node) in nodes.iter().enumerate() {
            let mut row = [0.0; MEASURES];
            for (k, iv) in schemes.iter().enumerate() {
                row[k] = iv.get(local).expect("active node has importance");
            }
            row[4] = eig[local];
            row[5] = pr[local];
            row[6] = degree[local] as f64;
            row[7] = sizes[communities.assignment()[local]] as f64;
            values[node] = Some(row);
        }
        Ok(SnapshotMeasures { values, strengths })
    }

    pub fn is_present(&self, i: usize) -> bool {
        self.values[i].is_some()
    }
}

/// Identifies one observation: a node at the snapshot its features were built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowKey {
    pub as_of: usize,
    pub node: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub mean: f64,
    pub stdev: f64,
}

/// Feature matrix with optional labels. Rows are in `(as_of, node)` order unless pooled
/// or resampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureTable {
    pub columns: Vec<String>,
    pub rows: Vec<RowKey>,
    pub values: Vec<Vec<f64>>,
    pub target: Option<Target>,
    pub labels: Vec<f64>,
}

impl FeatureTable {
    pub fn new(columns: Vec<String>, rows: Vec<RowKey>, values: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != values.len() || values.iter().any(|r| r.len() != columns.len()) {
            return Err(Error::Contract("feature table shape mismatch".into()));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Contract("feature table contains a non-finite value".into()));
        }
        Ok(FeatureTable {
            columns,
            rows,
            values,
            target: None,
            labels: Vec::new(),
        })
    }

    /// Builds a labelled table directly from a design matrix (row keys are synthetic).
    pub fn from_matrix(columns: Vec<String>, values: Vec<Vec<f64>>, target: Target, labels: Vec<f64>) -> Result<Self> {
        let rows = (0..values.len()).map(|i| RowKey { as_of: i, node: 0 }).collect();
        let mut t = FeatureTable::new(columns, rows, values)?;
        if labels.len() != t.values.len() {
            return Err(Error::Contract("label count differs from row count".into()));
        }
        t.target = Some(target);
        t.labels = labels;
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|r| r[j]).collect()
    }

    /// Population mean and standard deviation of every column.
    pub fn column_stats(&self) -> Vec<ColumnStats> {
        let n = self.len().max(1) as f64;
        (0..self.columns.len())
            .map(|j| {
                let col = self.column(j);
                let mean = col.iter().sum::<f64>() / n;
                let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
                ColumnStats {
                    mean,
                    stdev: var.sqrt(),
                }
            })
            .collect()
    }

    /// Keeps only rows whose node has a label, attaching the labels.
    pub fn with_labels(&self, target: Target, labels: &BTreeMap<usize, f64>) -> FeatureTable {
        let mut out = FeatureTable {
            columns: self.columns.clone(),
            rows: Vec::new(),
            values: Vec::new(),
            target: Some(target),
            labels: Vec::new(),
        };
        for (key, row) in self.rows.iter().zip(&self.values) {
            if let Some(&y) = labels.get(&key.node) {
                out.rows.push(*key);
                out.values.push(row.clone());
                out.labels.push(y);
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> FeatureTable {
        FeatureTable {
            columns: self.columns.clone(),
            rows: idx.iter().map(|&i| self.rows[i]).collect(),
            values: idx.iter().map(|&i| self.values[i].clone()).collect(),
            target: self.target,
            labels: if self.labels.is_empty() {
                Vec::new()
            } else {
                idx.iter().map(|&i| self.labels[i]).collect()
            },
        }
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> FeatureTable {
        self.select_rows(&range.collect::<Vec<_>>())
    }

    pub fn drop_columns(&self, names: &[String]) -> FeatureTable {
        let keep: Vec<usize> = (0..self.columns.len())
            .filter(|&j| !names.contains(&self.columns[j]))
            .collect();
        self.keep_columns(&keep)
    }

    pub fn keep_columns(&self, keep: &[usize]) -> FeatureTable {
        FeatureTable {
            columns: keep.iter().map(|&j| self.columns[j].clone()).collect(),
            rows: self.rows.clone(),
            values: self
                .values
                .iter()
                .map(|r| keep.iter().map(|&j| r[j]).collect())
                .collect(),
            target: self.target,
            labels: self.labels.clone(),
        }
    }

    pub fn with_column_values(&self, j: usize, col: &[f64]) -> FeatureTable {
        let mut out = self.clone();
        for (row, &v) in out.values.iter_mut().zip(col) {
            row[j] = v;
        }
        out
    }

    /// Concatenates tables with identical columns and targets, preserving order.
    pub fn pool(tables: &[FeatureTable]) -> Result<FeatureTable> {
        let first = tables
            .first()
            .ok_or_else(|| Error::DataSize("no tables to pool".into()))?;
        let mut out = FeatureTable {
            columns: first.columns.clone(),
            rows: Vec::new(),
            values: Vec::new(),
            target: first.target,
            labels: Vec::new(),
        };
        for t in tables {
            if t.columns != out.columns || t.target != out.target {
                return Err(Error::Contract("pooled tables must share columns and target".into()));
            }
            out.rows.extend_from_slice(&t.rows);
            out.values.extend(t.values.iter().cloned());
            out.labels.extend_from_slice(&t.labels);
        }
        Ok(out)
    }

    pub fn positive_rate(&self) -> f64 {
        self.labels.iter().sum::<f64>() / self.labels.len().max(1) as f64
    }

    /// CSV with header `as_of,node,<columns...>[,target]`; `node` is the universe id.
    pub fn write_csv<W: Write>(&self, universe: &[String], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["as_of".to_string(), "node".to_string()];
        header.extend(self.columns.iter().cloned());
        if let Some(t) = self.target {
            header.push(t.as_str().to_string());
        }
        w.write_record(&header)?;
        for (i, (key, row)) in self.rows.iter().zip(&self.values).enumerate() {
            let mut rec = vec![key.as_of.to_string(), universe[key.node].clone()];
            rec.extend(row.iter().map(|v| v.to_string()));
            if self.target.is_some() {
                rec.push(self.labels[i].to_string());
            }
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<feature csv>", e))?;
        Ok(())
    }
}

/// Per-snapshot measures of a whole network, computed once and reused for every horizon.
#[derive(Debug, Clone)]
pub struct FeatureBuilder<'a> {
    tn: &'a TemporalNetwork,
    measures: Vec<SnapshotMeasures>,
}

impl<'a> FeatureBuilder<'a> {
    /// Computes measures for every snapshot, in parallel across snapshots.
    pub fn new(tn: &'a TemporalNetwork) -> Result<Self> {
        Self::up_to(tn, tn.len())
    }

    /// Computes measures for snapshots `0..end` only.
    pub fn up_to(tn: &'a TemporalNetwork, end: usize) -> Result<Self> {
        if tn.is_directed() {
            return Err(Error::Contract("feature building needs an undirected network".into()));
        }
        let snaps = &tn.snapshots()[..end.min(tn.len())];
        let workers = std::thread::available_parallelism()
            .map_or(1, |n| n.get())
            .min(snaps.len().max(1));
        let chunk = snaps.len().div_ceil(workers).max(1);
        let measures = std::thread::scope(|scope| {
            let handles: Vec<_> = snaps
                .chunks(chunk)
                .map(|part| scope.spawn(move || part.iter().map(SnapshotMeasures::compute).collect::<Result<Vec<_>>>()))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("measure worker panicked"))
                .collect::<Result<Vec<_>>>()
        })?
        .into_iter()
        .flatten()
        .collect();
        Ok(FeatureBuilder { tn, measures })
    }

    pub fn network(&self) -> &TemporalNetwork {
        self.tn
    }

    pub fn measures(&self) -> &[SnapshotMeasures] {
        &self.measures
    }

    /// Historical features for nodes present at `t` that were present at least once
    /// before `t`.
    pub fn features(&self, t: usize) -> Result<FeatureTable> {
        if t == 0 {
            return Err(Error::DataSize(
                "snapshot 0 has no history to build features from".into(),
            ));
        }
        if t >= self.measures.len() {
            return Err(Error::Lookup(format!(
                "snapshot {t} out of range ({} available)",
                self.measures.len()
            )));
        }
        let n = self.tn.universe().len();
        let mut sums = vec![[0.0; MEASURES]; n];
        let mut counts = vec![0usize; n];
        for m in &self.measures[..t] {
            for (i, v) in m.values.iter().enumerate() {
                if let Some(v) = v {
                    counts[i] += 1;
                    for (s, x) in sums[i].iter_mut().zip(v) {
                        *s += x;
                    }
                }
            }
        }
        let mut rows = Vec::new();
        let mut values = Vec::new();
        for i in 0..n {
            if !self.measures[t].is_present(i) || counts[i] == 0 {
                continue;
            }
            let c = counts[i] as f64;
            let mut row: Vec<f64> = sums[i].iter().map(|s| s / c).collect();
            row.push(c);
            rows.push(RowKey { as_of: t, node: i });
            values.push(row);
        }
        FeatureTable::new(FEATURE_COLUMNS.iter().map(|s| s.to_string()).collect(), rows, values)
    }

    /// Features at `t` restricted to and labelled by `target` (change threshold 5%).
    pub fn table(&self, t: usize, target: Target) -> Result<FeatureTable> {
        self.table_with_threshold(t, target, 0.05)
    }

    /// As [`FeatureBuilder::table`] with an explicit relative-change threshold.
    pub fn table_with_threshold(&self, t: usize, target: Target, change_threshold: f64) -> Result<FeatureTable> {
        let labels = match target {
            Target::Presence => label_presence(self.tn, t)?,
            Target::Change => label_change(self.tn, t, change_threshold)?,
            Target::Sign => label_sign(self.tn, t)?,
            Target::RelChange => label_rel_change(self.tn, t)?,
        };
        Ok(self.features(t)?.with_labels(target, &labels))
    }
}

/// Features at `t` computed from scratch; see [`FeatureBuilder::features`].
pub fn build_features(tn: &TemporalNetwork, t: usize) -> Result<FeatureTable> {
    if t == 0 {
        return Err(Error::DataSize(
            "snapshot 0 has no history to build features from".into(),
        ));
    }
    FeatureBuilder::up_to(tn, t + 1)?.features(t)
}

fn horizon_pair(tn: &TemporalNetwork, t: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if t + 1 >= tn.len() {
        return Err(Error::Horizon(format!(
            "snapshot {t} has no successor (network has {} snapshots)",
            tn.len()
        )));
    }
    Ok((
        tn.snapshots()[t].strengths(StrengthMode::Total),
        tn.snapshots()[t + 1].strengths(StrengthMode::Total),
    ))
}

/// 1 for nodes present at `t` that still have an edge at `t + 1`, else 0.
pub fn label_presence(tn: &TemporalNetwork, t: usize) -> Result<BTreeMap<usize, f64>> {
    let (now, next) = horizon_pair(tn, t)?;
    Ok(now
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0.0)
        .map(|(i, _)| (i, if next[i] > 0.0 { 1.0 } else { 0.0 }))
        .collect())
}

fn both_present(tn: &TemporalNetwork, t: usize) -> Result<Vec<(usize, f64, f64)>> {
    let (now, next) = horizon_pair(tn, t)?;
    Ok(now
        .into_iter()
        .zip(next)
        .enumerate()
        .filter(|(_, (a, b))| *a > 0.0 && *b > 0.0)
        .map(|(i, (a, b))| (i, a, b))
        .collect())
}

/// 1 when `|S(t+1) − S(t)| / S(t) > threshold`, for nodes present at both snapshots.
pub fn label_change(tn: &TemporalNetwork, t: usize, threshold: f64) -> Result<BTreeMap<usize, f64>> {
    Ok(both_present(tn, t)?
        .into_iter()
        .map(|(i, a, b)| (i, if (b - a).abs() / a > threshold { 1.0 } else { 0.0 }))
        .collect())
}

/// 1 when strength rises, 0 when it falls; unchanged nodes are left out.
pub fn label_sign(tn: &TemporalNetwork, t: usize) -> Result<BTreeMap<usize, f64>> {
    Ok(both_present(tn, t)?
        .into_iter()
        .filter(|(_, a, b)| a != b)
        .map(|(i, a, b)| (i, if b > a { 1.0 } else { 0.0 }))
        .collect())
}

pub fn label_rel_change(tn: &TemporalNetwork, t: usize) -> Result<BTreeMap<usize, f64>> {
    Ok(both_present(tn, t)?
        .into_iter()
        .map(|(i, a, b)| (i, (b - a) / a))
        .collect())
}

/// Columns dropped first when two correlated features tie; unknown names sit after the
/// centralities.
const DROP_PRIORITY: [&str; 9] = [
    "degree",
    "pagerank",
    "eig_centrality",
    "community_size",
    "presence_count",
    "mc",
    "md",
    "ma",
    "mb",
];

fn drop_rank(name: &str) -> usize {
    DROP_PRIORITY.iter().position(|p| *p == name).unwrap_or(3)
}

/// Repeatedly drops the column with the most `|pearson| > threshold` partners until no
/// pair exceeds the threshold. Returns the pruned table and the dropped column names in
/// drop order.
pub fn prune_correlated(table: &FeatureTable, threshold: f64) -> Result<(FeatureTable, Vec<String>)> {
    if table.columns.len() < 2 {
        return Err(Error::Argument("pruning needs at least two feature columns".into()));
    }
    let cols: Vec<Vec<f64>> = (0..table.columns.len()).map(|j| table.column(j)).collect();
    let m = cols.len();
    let mut corr = vec![vec![0.0; m]; m];
    for a in 0..m {
        for b in a + 1..m {
            // Constant columns correlate with nothing.
            let r = pearson(&cols[a], &cols[b]).unwrap_or(0.0);
            corr[a][b] = r;
            corr[b][a] = r;
        }
    }
    let mut alive: Vec<bool> = vec![true; m];
    let mut dropped = Vec::new();
    loop {
        let counts: Vec<usize> = (0..m)
            .map(|a| {
                if !alive[a] {
                    return 0;
                }
                (0..m)
                    .filter(|&b| b != a && alive[b] && corr[a][b].abs() > threshold)
                    .count()
            })
            .collect();
        let max = *counts.iter().max().unwrap_or(&0);
        if max == 0 {
            break;
        }
        let victim = (0..m)
            .filter(|&a| counts[a] == max)
            .min_by_key(|&a| (drop_rank(&table.columns[a]), std::cmp::Reverse(a)))
            .expect("at least one candidate");
        alive[victim] = false;
        dropped.push(table.columns[victim].clone());
    }
    Ok((table.drop_columns(&dropped), dropped))
}

/// Pairwise Pearson correlations of the table's columns (0 for constant columns).
pub fn correlation_matrix(table: &FeatureTable) -> Vec<Vec<f64>> {
    let cols: Vec<Vec<f64>> = (0..table.columns.len()).map(|j| table.column(j)).collect();
    let m = cols.len();
    let mut corr = vec![vec![0.0; m]; m];
    for a in 0..m {
        corr[a][a] = 1.0;
        for b in a + 1..m {
            let r = pearson(&cols[a], &cols[b]).unwrap_or(0.0);
            corr[a][b] = r;
            corr[b][a] = r;
        }
    }
    corr
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{numbered_ids, Edge};

    fn network(snaps: Vec<Vec<(usize, usize, f64)>>, n: usize) -> TemporalNetwork {
        let ids = numbered_ids(n);
        let snaps = snaps
            .into_iter()
            .enumerate()
            .map(|(t, es)| {
                let edges = es.into_iter().map(|(a, b, w)| Edge::new(a, b, w)).collect();
                Snapshot::new(ids.clone(), edges, false, t).unwrap()
            })
            .collect();
        TemporalNetwork::new(ids, snaps).unwrap()
    }

    #[test]
    fn degree_history_is_averaged() {
        // Node 0 has degree 2 at t=0 and 4 at t=1.
        let s0 = vec![(0, 1, 1.0), (0, 2, 1.0)];
        let s1 = vec![(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (0, 4, 1.0)];
        let s2 = vec![(0, 1, 1.0)];
        let tn = network(vec![s0, s1, s2], 5);
        let f = build_features(&tn, 2).unwrap();
        let row = f.rows.iter().position(|r| r.node == 0).unwrap();
        let degree = f.column_index("degree").unwrap();
        assert_eq!(f.values[row][degree], 3.0);
        assert_eq!(f.values[row][f.column_index("presence_count").unwrap()], 2.0);
    }

    #[test]
    fn single_prior_snapshot_is_its_own_mean() {
        let tn = network(vec![vec![(0, 1, 2.0)], vec![(0, 1, 1.0)], vec![]], 2);
        let f = build_features(&tn, 1).unwrap();
        assert_eq!(f.len(), 2);
        let mb = f.column_index("mb").unwrap();
        assert!((f.values[0][mb] - 1.0).abs() < 1e-12);
        assert_eq!(f.values[0][8], 1.0);
    }

    #[test]
    fn no_history_at_zero() {
        let tn = network(vec![vec![(0, 1, 1.0)], vec![(0, 1, 1.0)]], 2);
        assert!(matches!(build_features(&tn, 0), Err(Error::DataSize(_))));
    }

    #[test]
    fn presence_labels() {
        let tn = network(vec![vec![(0, 1, 1.0), (2, 3, 1.0)], vec![(0, 1, 1.0)]], 4);
        let l = label_presence(&tn, 0).unwrap();
        assert_eq!(
            l.into_iter().collect::<Vec<_>>(),
            vec![(0, 1.0), (1, 1.0), (2, 0.0), (3, 0.0)]
        );
        assert!(matches!(label_presence(&tn, 1), Err(Error::Horizon(_))));
    }

    #[test]
    fn change_sign_and_relative_labels() {
        // Node strengths 100 -> 104, 100 -> 106, 100 -> 95, 100 -> 100 (nodes 0,2,4,6).
        let s0 = vec![(0, 1, 100.0), (2, 3, 100.0), (4, 5, 100.0), (6, 7, 100.0)];
        let s1 = vec![(0, 1, 104.0), (2, 3, 106.0), (4, 5, 95.0), (6, 7, 100.0)];
        let tn = network(vec![s0, s1], 8);
        let ch = label_change(&tn, 0, 0.05).unwrap();
        assert_eq!((ch[&0], ch[&2], ch[&4], ch[&6]), (0.0, 1.0, 0.0, 0.0));
        let sg = label_sign(&tn, 0).unwrap();
        assert_eq!((sg[&2], sg[&4]), (1.0, 0.0));
        assert!(!sg.contains_key(&6));
        let rc = label_rel_change(&tn, 0).unwrap();
        assert!((rc[&2] - 0.06).abs() < 1e-12);
        assert!((rc[&4] + 0.05).abs() < 1e-12);
    }

    #[test]
    fn doubling_weights_doubles_strength() {
        let s0 = vec![(0, 1, 1.0), (1, 2, 3.0)];
        let s1 = vec![(0, 1, 2.0), (1, 2, 6.0)];
        let rc = label_rel_change(&network(vec![s0, s1], 3), 0).unwrap();
        assert!(rc.values().all(|v| (v - 1.0).abs() < 1e-12));
    }

    fn table_from_columns(names: &[&str], cols: &[Vec<f64>]) -> FeatureTable {
        let n = cols[0].len();
        let values = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let rows = (0..n).map(|i| RowKey { as_of: 1, node: i }).collect();
        FeatureTable::new(names.iter().map(|s| s.to_string()).collect(), rows, values).unwrap()
    }

    #[test]
    fn duplicate_column_pruned_once() {
        let x = vec![1.0, 2.0, 3.0, 5.0];
        let y = vec![2.0, -1.0, 0.5, 0.0];
        let t = table_from_columns(&["mb", "ma", "md"], &[x.clone(), x, y]);
        let (pruned, dropped) = prune_correlated(&t, 0.8).unwrap();
        assert_eq!(dropped, vec!["ma".to_string()]);
        assert_eq!(pruned.columns, vec!["mb".to_string(), "md".to_string()]);
    }

    #[test]
    fn orthogonal_columns_survive() {
        let t = table_from_columns(&["a", "b"], &[vec![1.0, -1.0, 1.0, -1.0], vec![1.0, 1.0, -1.0, -1.0]]);
        assert!(prune_correlated(&t, 0.8).unwrap().1.is_empty());
    }

    #[test]
    fn proportional_centralities_leave_one() {
        let x = vec![1.0, 4.0, 2.0, 8.0, 3.0];
        let other = vec![0.3, -0.2, 0.9, 0.1, -0.5];
        let cols = vec![
            x.iter().map(|v| 2.0 * v).collect(),
            x.iter().map(|v| 0.1 * v).collect(),
            x.clone(),
            other,
        ];
        let t = table_from_columns(&["degree", "pagerank", "eig_centrality", "mb"], &cols);
        let (pruned, dropped) = prune_correlated(&t, 0.8).unwrap();
        assert_eq!(dropped.len(), 2);
        assert_eq!(pruned.columns, vec!["eig_centrality".to_string(), "mb".to_string()]);
    }
}
