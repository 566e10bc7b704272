//! k-means over rows of selected eigenvectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netstats::Partition;
use crate::spectral::Spectrum;

const MAX_ITER: usize = 100;
const RESTARTS: usize = 8;

/// Which eigenvectors supply the coordinates of each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EigvecSelection {
    PositiveOnly,
    All,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

/// Embeds node `i` as `(x_{k,i})_k` over the selected eigenvectors.
pub fn eigvec_rows(spec: &Spectrum, which: EigvecSelection) -> Vec<Vec<f64>> {
    let k = match which {
        EigvecSelection::PositiveOnly => spec.positive_count(),
        EigvecSelection::All => spec.eigenvalues.len(),
    };
    (0..spec.n)
        .map(|i| (0..k).map(|c| spec.eigenvectors[c][i]).collect())
        .collect()
}

#[derive(Debug, Clone)]
pub struct KMeansResult {
    pub partition: Partition,
    pub inertia: f64,
}

/// Lloyd's algorithm with k-means++ seeding, best of several seeded restarts.
pub fn kmeans(rows: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansResult> {
    let n = rows.len();
    if k == 0 || k > n {
        return Err(Error::Argument(format!("k = {k} must lie in 1..={n}")));
    }
    let mut distinct: Vec<&Vec<f64>> = Vec::new();
    for r in rows {
        if !distinct.iter().any(|d| dist2(d, r) == 0.0) {
            distinct.push(r);
            if distinct.len() >= k {
                break;
            }
        }
    }
    if distinct.len() < k {
        return Err(Error::Degenerate(format!(
            "k = {k} exceeds the number of distinct points ({})",
            distinct.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for _ in 0..RESTARTS {
        let (inertia, labels) = lloyd(rows, k, &mut rng);
        if best.as_ref().is_none_or(|(b, _)| inertia < *b - 1e-12) {
            best = Some((inertia, labels));
        }
    }
    let (inertia, labels) = best.expect("at least one restart");
    Ok(KMeansResult {
        partition: Partition::from_labels(&labels),
        inertia,
    })
}

fn seed_centers(rows: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = rows.len();
    let mut centers = vec![rows[rng.gen_range(0..n)].clone()];
    while centers.len() < k {
        let d: Vec<f64> = rows
            .iter()
            .map(|r| centers.iter().map(|c| dist2(r, c)).fold(f64::INFINITY, f64::min))
            .collect();
        let total: f64 = d.iter().sum();
        let pick = if total > 0.0 {
            let mut target = rng.gen::<f64>() * total;
            let mut chosen = n - 1;
            for (i, &di) in d.iter().enumerate() {
                if target < di {
                    chosen = i;
                    break;
                }
                target -= di;
            }
            chosen
        } else {
            rng.gen_range(0..n)
        };
        centers.push(rows[pick].clone());
    }
    centers
}

fn lloyd(rows: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> (f64, Vec<usize>) {
    let dim = rows[0].len();
    let mut centers = seed_centers(rows, k, rng);
    let mut labels = vec![usize::MAX; rows.len()];
    for _ in 0..MAX_ITER {
        let mut changed = false;
        for (i, r) in rows.iter().enumerate() {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (c, center) in centers.iter().enumerate() {
                let d = dist2(r, center);
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (r, &l) in rows.iter().zip(&labels) {
            counts[l] += 1;
            for (s, v) in sums[l].iter_mut().zip(r) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                // Re-seed an empty cluster at the point farthest from its center.
                let far = (0..rows.len())
                    .max_by(|&a, &b| {
                        dist2(&rows[a], &centers[labels[a]]).total_cmp(&dist2(&rows[b], &centers[labels[b]]))
                    })
                    .expect("non-empty rows");
                centers[c] = rows[far].clone();
            } else {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
    }
    let inertia = rows.iter().zip(&labels).map(|(r, &l)| dist2(r, &centers[l])).sum();
    (inertia, labels)
}

/// k-means on the eigenvector embedding of a spectrum.
pub fn kmeans_eigvecs(spec: &Spectrum, which: EigvecSelection, k: usize, seed: u64) -> Result<Partition> {
    let rows = eigvec_rows(spec, which);
    if rows.first().is_none_or(|r| r.is_empty()) {
        return Err(Error::Degenerate("no eigenvectors selected".into()));
    }
    Ok(kmeans(&rows, k, seed)?.partition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_barbell, gen_disjoint_cliques};
    use crate::graph::adjacency;
    use crate::spectral::eig_sym;

    #[test]
    fn barbell_three_clusters() {
        let spec = eig_sym(&adjacency(&gen_barbell(4, 2, 5).unwrap())).unwrap();
        let p = kmeans_eigvecs(&spec, EigvecSelection::PositiveOnly, 3, 1).unwrap();
        assert_eq!(p.assignment(), &[0, 0, 0, 0, 1, 1, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn single_cluster() {
        let spec = eig_sym(&adjacency(&gen_barbell(4, 2, 5).unwrap())).unwrap();
        let p = kmeans_eigvecs(&spec, EigvecSelection::All, 1, 3).unwrap();
        assert_eq!(p.community_count(), 1);
    }

    #[test]
    fn too_many_clusters_is_degenerate() {
        let rows = vec![vec![0.0], vec![0.0], vec![1.0]];
        assert!(matches!(kmeans(&rows, 3, 0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn disjoint_cliques_split() {
        let spec = eig_sym(&adjacency(&gen_disjoint_cliques(&[4, 4]).unwrap())).unwrap();
        let p = kmeans_eigvecs(&spec, EigvecSelection::PositiveOnly, 2, 5).unwrap();
        assert_eq!(p.assignment(), &[0, 0, 0, 0, 1, 1, 1, 1]);
    }
}
