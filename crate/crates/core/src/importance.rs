//! Structural node importance: the first-order change of a spectral quantity when one
//! node's strength grows by a fixed amount spread proportionally over its edges.
//!
//! For an undirected snapshot and eigenpair `(λ_k, x_k)` the per-component importance of
//! node `i` is
//!
//! ```text
//! m_i^(k) = (2 / S_i) · Σ_j x_{k,i} A_ij x_{k,j} = (2 / S_i) · λ_k · x_{k,i}²
//! ```
//!
//! and the four schemes differ in which components contribute:
//!
//! | scheme | components                                              |
//! |--------|---------------------------------------------------------|
//! | `ma`   | leading eigenpair only                                  |
//! | `mb`   | the eigenpair selected per node by [`select_eigencomponent`] |
//! | `mc`   | sum over every eigenpair                                |
//! | `md`   | sum over eigenpairs with positive eigenvalue            |
//!
//! `mc` is identically `(2 / S_i) · A_ii`, i.e. zero up to round-off on adjacency
//! matrices; it is computed literally and [`component_terms`] exposes the individual
//! summands.
//!
//! Directed snapshots use the leading singular value `s` of `A` and the leading
//! eigenvector `x` of `M = A·Aᵀ`: `m_i = (1 / (S_i · s)) · Σ_j x_i x_j M_ij`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{adjacency, Snapshot, StrengthMode, WeightedMatrix};
use crate::spectral::{eig_sym, leading_singular, select_eigencomponent, ComponentSet, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Ma,
    Mb,
    Mc,
    Md,
    Directed,
}

impl Scheme {
    pub const UNDIRECTED: [Scheme; 4] = [Scheme::Ma, Scheme::Mb, Scheme::Mc, Scheme::Md];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Ma => "ma",
            Scheme::Mb => "mb",
            Scheme::Mc => "mc",
            Scheme::Md => "md",
            Scheme::Directed => "directed",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ma" => Ok(Scheme::Ma),
            "mb" => Ok(Scheme::Mb),
            "mc" => Ok(Scheme::Mc),
            "md" => Ok(Scheme::Md),
            "directed" => Ok(Scheme::Directed),
            other => Err(Error::Argument(format!("unknown importance scheme `{other}`"))),
        }
    }
}

/// Importance values for the nodes of one snapshot, keyed by snapshot node index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceVector {
    pub scheme: Scheme,
    pub values: BTreeMap<usize, f64>,
    /// Selected eigen-rank per node (1-based), populated for `mb` only.
    pub eigen_rank_used: Option<BTreeMap<usize, usize>>,
    /// Nodes left out because their strength is zero.
    pub excluded: Vec<usize>,
}

impl ImportanceVector {
    fn empty(scheme: Scheme) -> Self {
        ImportanceVector {
            scheme,
            values: BTreeMap::new(),
            eigen_rank_used: (scheme == Scheme::Mb).then(BTreeMap::new),
            excluded: Vec::new(),
        }
    }

    pub fn get(&self, i: usize) -> Option<f64> {
        self.values.get(&i).copied()
    }

    /// Writes `node,scheme,value,eig_rank` rows; `eig_rank` is empty unless the scheme is `mb`.
    pub fn write_csv<W: std::io::Write>(&self, node_ids: &[String], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["node", "scheme", "value", "eig_rank"])?;
        for (&i, v) in &self.values {
            let rank = self
                .eigen_rank_used
                .as_ref()
                .and_then(|r| r.get(&i))
                .map(|r| r.to_string())
                .unwrap_or_default();
            w.write_record([node_ids[i].as_str(), self.scheme.as_str(), &v.to_string(), &rank])?;
        }
        w.flush().map_err(|e| Error::io("<importance csv>", e))?;
        Ok(())
    }
}

/// Derivative of the leading eigenvalue with respect to the single entry `A_ij`.
pub fn edge_importance(spec: &Spectrum, i: usize, j: usize) -> Result<f64> {
    if i >= spec.n || j >= spec.n {
        return Err(Error::Lookup(format!(
            "edge ({i}, {j}) outside spectrum of dimension {}",
            spec.n
        )));
    }
    let x = &spec.eigenvectors[0];
    Ok(2.0 * x[i] * x[j])
}

#[inline]
fn component_term(lambda: f64, x_i: f64, strength: f64) -> f64 {
    2.0 / strength * lambda * x_i * x_i
}

/// Every per-eigenpair summand `m_i^(k)` for node `i`, in eigenvalue order.
pub fn component_terms(spec: &Spectrum, strength: f64, i: usize) -> Vec<f64> {
    spec.eigenvalues
        .iter()
        .zip(&spec.eigenvectors)
        .map(|(&l, x)| component_term(l, x[i], strength))
        .collect()
}

/// Spectrum of the active part of an undirected snapshot, reused across schemes.
#[derive(Debug, Clone)]
pub struct SnapshotSpectrum {
    /// Active-subgraph index → snapshot index.
    pub nodes: Vec<usize>,
    pub excluded: Vec<usize>,
    pub adjacency: WeightedMatrix,
    pub spectrum: Spectrum,
    pub strengths: Vec<f64>,
}

impl SnapshotSpectrum {
    pub fn new(s: &Snapshot) -> Result<Self> {
        if s.is_directed() {
            return Err(Error::Contract(
                "undirected importance schemes need an undirected snapshot".into(),
            ));
        }
        let (sub, nodes) = s.active_subgraph();
        let excluded = (0..s.node_count()).filter(|i| !nodes.contains(i)).collect();
        let adjacency = adjacency(&sub);
        let spectrum = eig_sym(&adjacency)?;
        let strengths = sub.strengths(StrengthMode::Total);
        Ok(SnapshotSpectrum {
            nodes,
            excluded,
            adjacency,
            spectrum,
            strengths,
        })
    }

    pub fn importance(&self, scheme: Scheme) -> Result<ImportanceVector> {
        let mut out = ImportanceVector::empty(scheme);
        out.excluded = self.excluded.clone();
        if self.nodes.is_empty() {
            return Ok(out);
        }
        let spec = &self.spectrum;
        let positive = spec.positive_count();
        for (local, &node) in self.nodes.iter().enumerate() {
            let s = self.strengths[local];
            let value = match scheme {
                Scheme::Ma => component_term(spec.eigenvalues[0], spec.component(0, local), s),
                Scheme::Mb => {
                    let rank = select_eigencomponent(spec, local, ComponentSet::Positive)?;
                    if let Some(r) = out.eigen_rank_used.as_mut() {
                        r.insert(node, rank);
                    }
                    component_term(spec.eigenvalues[rank - 1], spec.component(rank - 1, local), s)
                }
                Scheme::Mc => component_terms(spec, s, local).iter().sum(),
                Scheme::Md => component_terms(spec, s, local)[..positive].iter().sum(),
                Scheme::Directed => {
                    return Err(Error::Contract(
                        "use node_importance_directed for the directed scheme".into(),
                    ))
                }
            };
            out.values.insert(node, value);
        }
        Ok(out)
    }

    /// Eigen-rank (1-based, positive eigenvalues only) selected for each active node.
    pub fn selected_ranks(&self) -> Result<BTreeMap<usize, usize>> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(local, &node)| {
                select_eigencomponent(&self.spectrum, local, ComponentSet::Positive).map(|r| (node, r))
            })
            .collect()
    }
}

/// Importance of every node of an undirected snapshot under `scheme`.
///
/// Nodes with zero strength are reported in `excluded` and get no value.
pub fn node_importance(s: &Snapshot, scheme: Scheme) -> Result<ImportanceVector> {
    SnapshotSpectrum::new(s)?.importance(scheme)
}

/// Importance of every node of a directed snapshot from the leading singular structure.
pub fn node_importance_directed(s: &Snapshot, mode: StrengthMode) -> Result<ImportanceVector> {
    let a = adjacency(s);
    let triplet = leading_singular(&a)?;
    if triplet.s <= 0.0 {
        return Err(Error::Degenerate(
            "leading singular value is zero (graph has no edges)".into(),
        ));
    }
    let gram = triplet.gram.as_ref().expect("gram retained");
    let strengths = s.strengths(mode);
    let mx = gram.mul_vec(&triplet.x_m);
    let mut out = ImportanceVector::empty(Scheme::Directed);
    for (i, &strength) in strengths.iter().enumerate() {
        if strength <= 0.0 {
            out.excluded.push(i);
            continue;
        }
        let value = triplet.x_m[i] * mx[i] / (strength * triplet.s);
        out.values.insert(i, value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_barbell, gen_clique, gen_cycle};
    use crate::graph::{numbered_ids, Edge};

    #[test]
    fn edge_importance_on_small_graphs() {
        let two = eig_sym(&WeightedMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()).unwrap();
        assert!((edge_importance(&two, 0, 1).unwrap() - 1.0).abs() < 1e-14);
        let tri = eig_sym(&adjacency(&gen_clique(3, 1.0).unwrap())).unwrap();
        assert!((edge_importance(&tri, 0, 2).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!(edge_importance(&tri, 0, 3).is_err());
    }

    #[test]
    fn regular_graphs_give_two_over_n() {
        for n in 3..=12 {
            for g in [gen_clique(n, 1.0).unwrap(), gen_cycle(n, 1.0).unwrap()] {
                let m = node_importance(&g, Scheme::Ma).unwrap();
                for v in m.values.values() {
                    assert!((v - 2.0 / n as f64).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn dyad_is_weight_independent() {
        for w in [0.1, 1.0, 37.5] {
            let s = Snapshot::new(numbered_ids(2), vec![Edge::new(0, 1, w)], false, 0).unwrap();
            let m = node_importance(&s, Scheme::Ma).unwrap();
            assert!((m.get(0).unwrap() - 1.0).abs() < 1e-12);
            assert!((m.get(1).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn barbell_bridge_dominates_mb() {
        let m = node_importance(&gen_barbell(4, 2, 5).unwrap(), Scheme::Mb).unwrap();
        let bridge = m.get(4).unwrap().min(m.get(5).unwrap());
        let big = (6..11).map(|i| m.get(i).unwrap()).fold(f64::MIN, f64::max);
        let small = (0..4).map(|i| m.get(i).unwrap()).fold(f64::MIN, f64::max);
        assert!(bridge > big && bridge > small && small > big);
        let ranks = m.eigen_rank_used.unwrap();
        assert_eq!(ranks[&5], 3);
    }

    #[test]
    fn mc_vanishes_on_triangle() {
        let m = node_importance(&gen_clique(3, 1.0).unwrap(), Scheme::Mc).unwrap();
        for v in m.values.values() {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn isolated_nodes_are_excluded() {
        let s = Snapshot::new(numbered_ids(3), vec![Edge::new(0, 1, 1.0)], false, 0).unwrap();
        let m = node_importance(&s, Scheme::Md).unwrap();
        assert_eq!(m.excluded, vec![2]);
        assert_eq!(m.values.len(), 2);
        let empty = Snapshot::new(numbered_ids(3), vec![], false, 0).unwrap();
        assert!(node_importance(&empty, Scheme::Mb).unwrap().values.is_empty());
    }

    #[test]
    fn directed_pair() {
        for w in [0.5, 3.0] {
            let s = Snapshot::new(numbered_ids(2), vec![Edge::new(0, 1, w)], true, 0).unwrap();
            let m = node_importance_directed(&s, StrengthMode::Total).unwrap();
            assert!((m.get(0).unwrap() - 1.0).abs() < 1e-12);
            assert!(m.get(1).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn directed_empty_graph_is_degenerate() {
        let s = Snapshot::new(numbered_ids(2), vec![], true, 0).unwrap();
        assert!(matches!(
            node_importance_directed(&s, StrengthMode::Total),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn undirected_scheme_rejects_directed_snapshot() {
        let s = Snapshot::new(numbered_ids(2), vec![Edge::new(0, 1, 1.0)], true, 0).unwrap();
        assert!(matches!(node_importance(&s, Scheme::Ma), Err(Error::Contract(_))));
    }

    #[test]
    fn csv_output() {
        let g = gen_barbell(2, 0, 2).unwrap();
        let m = node_importance(&g, Scheme::Mb).unwrap();
        let mut buf = Vec::new();
        m.write_csv(g.node_ids(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("node,scheme,value,eig_rank\n0,mb,"));
        assert_eq!(text.lines().count(), 5);
    }
}
