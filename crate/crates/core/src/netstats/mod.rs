//! Benchmark centralities, community structure, and the two-group statistics used to
//! compare measures.

mod centrality;
mod community;
mod stats;

pub use centrality::{eigenvector_centrality, pagerank, PageRankOptions};
pub use community::{detect_communities, modularity};
pub use stats::{mean_diff_ttest, pearson, TTestResult};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Assignment of each node to a community id; ids are dense from 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<usize>,
}

impl Partition {
    /// Relabels arbitrary ids densely in order of first appearance.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Partition { assignment }
    }

    pub fn single(n: usize) -> Self {
        Partition { assignment: vec![0; n] }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn community_count(&self) -> usize {
        self.assignment.iter().max().map_or(0, |m| m + 1)
    }

    pub fn community_of(&self, i: usize) -> Result<usize> {
        self.assignment
            .get(i)
            .copied()
            .ok_or_else(|| Error::Lookup(format!("node {i} not in partition")))
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.community_count()];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    /// Members of each community, ascending.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.community_count()];
        for (i, &c) in self.assignment.iter().enumerate() {
            groups[c].push(i);
        }
        groups
    }
}
