use crate::error::{Error, Result};
use crate::graph::{Snapshot, StrengthMode};

use super::Partition;

/// Weighted Newman modularity `Q = (1/2m) Σ_ij (A_ij − S_i S_j / 2m) δ(c_i, c_j)`.
pub fn modularity(s: &Snapshot, p: &Partition) -> Result<f64> {
    if s.is_directed() {
        return Err(Error::Contract(
            "modularity is defined here for undirected snapshots".into(),
        ));
    }
    if p.len() != s.node_count() {
        return Err(Error::Contract(format!(
            "partition covers {} nodes, snapshot has {}",
            p.len(),
            s.node_count()
        )));
    }
    let two_m = 2.0 * s.total_weight();
    if two_m <= 0.0 {
        return Err(Error::Degenerate("modularity is undefined on an empty graph".into()));
    }
    let c = p.assignment();
    let strengths = s.strengths(StrengthMode::Total);
    let within: f64 = s
        .edges()
        .iter()
        .filter(|e| c[e.src] == c[e.dst])
        .map(|e| 2.0 * e.weight)
        .sum();
    let mut totals = vec![0.0; p.community_count()];
    for (i, &st) in strengths.iter().enumerate() {
        totals[c[i]] += st;
    }
    let expected: f64 = totals.iter().map(|t| t * t).sum::<f64>() / two_m;
    Ok((within - expected) / two_m)
}

/// Greedy agglomerative modularity maximization.
///
/// Starts from singletons and repeatedly merges the pair of communities with the largest
/// modularity gain until no merge has a positive gain. Ties go to the lowest pair of
/// community ids, so the result is fully deterministic.
#[allow(clippy::needless_range_loop)]
pub fn detect_communities(s: &Snapshot) -> Result<Partition> {
    if s.is_directed() {
        return Err(Error::Contract(
            "community detection needs an undirected snapshot".into(),
        ));
    }
    let n = s.node_count();
    let two_m = 2.0 * s.total_weight();
    if n == 0 {
        return Err(Error::Degenerate("empty snapshot".into()));
    }
    if two_m <= 0.0 {
        return Ok(Partition::singletons(n));
    }
    // e[i][j]: fraction of edge ends joining communities i and j (each direction).
    let mut e = vec![vec![0.0; n]; n];
    for edge in s.edges() {
        let f = edge.weight / two_m;
        e[edge.src][edge.dst] += f;
        e[edge.dst][edge.src] += f;
    }
    let mut a: Vec<f64> = s.strengths(StrengthMode::Total).iter().map(|st| st / two_m).collect();
    let mut alive = vec![true; n];
    let mut label: Vec<usize> = (0..n).collect();

    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            if !alive[i] {
                continue;
            }
            for j in i + 1..n {
                if !alive[j] || e[i][j] <= 0.0 {
                    continue;
                }
                let gain = 2.0 * (e[i][j] - a[i] * a[j]);
                if best.is_none_or(|(g, _, _)| gain > g + 1e-15) {
                    best = Some((gain, i, j));
                }
            }
        }
        let Some((gain, i, j)) = best else { break };
        if gain <= 1e-15 {
            break;
        }
        // Merge j into i.
        for k in 0..n {
            if k != i && k != j {
                e[i][k] += e[j][k];
                e[k][i] = e[i][k];
            }
        }
        e[i][i] += e[j][j] + 2.0 * e[i][j];
        e[i][j] = 0.0;
        e[j][i] = 0.0;
        for row in e.iter_mut() {
            row[j] = 0.0;
        }
        e[j].iter_mut().for_each(|v| *v = 0.0);
        a[i] += a[j];
        a[j] = 0.0;
        alive[j] = false;
        for l in label.iter_mut() {
            if *l == j {
                *l = i;
            }
        }
    }
    Ok(Partition::from_labels(&label))
}
