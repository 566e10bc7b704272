//! Logistic and linear models of next-snapshot node activity, with evaluation, null-model
//! baselines and attribution.

mod explain;
mod linear;
mod logistic;
mod metrics;
mod null;
mod select;

pub use explain::{permutation_importance, permutation_importance_r2, shap_linear, FeatureScore, ShapValues};
pub use linear::{fit_linear, null_shuffle_regression, r2_score, LinearModel, R2Distribution};
pub use logistic::{fit_logistic, FitOptions, LogisticModel};
pub use metrics::{
    auc, binom_ci, binom_ci_normal, bootstrap_auc_ci, bootstrap_auc_ci_scores, evaluate, quantile, BootstrapCi,
    ConfusionCounts, Metrics,
};
pub use null::{edge_density, null_edge_presence, null_prior_predictor, random_presence, MetricSummary, NullReport};
pub use select::{time_ordered_select, CvScore, FoldBounds, Selection, SplitInfo};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureTable;

/// Independent seed for sub-stream `stream` of a run seeded with `seed` (splitmix64).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Column-wise standardization constants fitted on training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub columns: Vec<String>,
    pub means: Vec<f64>,
    pub stdevs: Vec<f64>,
    /// Constant columns left out of the fitted set.
    pub dropped: Vec<String>,
}

impl Standardizer {
    pub fn fit(table: &FeatureTable) -> Self {
        let stats = table.column_stats();
        let mut out = Standardizer {
            columns: Vec::new(),
            means: Vec::new(),
            stdevs: Vec::new(),
            dropped: Vec::new(),
        };
        for (name, s) in table.columns.iter().zip(stats) {
            if s.stdev <= 1e-10 * s.mean.abs().max(1.0) {
                log::warn!("dropping constant column `{name}`");
                out.dropped.push(name.clone());
            } else {
                out.columns.push(name.clone());
                out.means.push(s.mean);
                out.stdevs.push(s.stdev);
            }
        }
        out
    }

    /// Pass-through scaling for features that are already standardized.
    pub fn identity(columns: &[String]) -> Self {
        Standardizer {
            columns: columns.to_vec(),
            means: vec![0.0; columns.len()],
            stdevs: vec![1.0; columns.len()],
            dropped: Vec::new(),
        }
    }

    /// Selects the fitted columns from `table` (by name) and scales them.
    pub fn transform(&self, table: &FeatureTable) -> Result<FeatureTable> {
        let idx = self
            .columns
            .iter()
            .map(|c| {
                table
                    .column_index(c)
                    .ok_or_else(|| Error::Lookup(format!("table lacks fitted column `{c}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = table.keep_columns(&idx);
        for row in out.values.iter_mut() {
            for ((v, m), s) in row.iter_mut().zip(&self.means).zip(&self.stdevs) {
                *v = (*v - m) / s;
            }
        }
        Ok(out)
    }
}

/// Standardizes every non-constant column to mean 0 and unit population stdev.
pub fn standardize(table: &FeatureTable) -> Result<(FeatureTable, Standardizer)> {
    let scaler = Standardizer::fit(table);
    let out = scaler.transform(table)?;
    Ok((out, scaler))
}

/// Duplicates minority-class rows, drawn uniformly with replacement, until both classes
/// have the same count. Original rows keep their order; duplicates are appended.
pub fn oversample(table: &FeatureTable, seed: u64) -> Result<FeatureTable> {
    let pos: Vec<usize> = (0..table.len()).filter(|&i| table.labels[i] > 0.5).collect();
    let neg: Vec<usize> = (0..table.len()).filter(|&i| table.labels[i] <= 0.5).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::ClassBalance(format!(
            "oversampling needs both classes ({} positive, {} negative)",
            pos.len(),
            neg.len()
        )));
    }
    let (minority, deficit) = if pos.len() < neg.len() {
        (&pos, neg.len() - pos.len())
    } else {
        (&neg, pos.len() - neg.len())
    };
    let mut rng = rng(seed);
    let mut idx: Vec<usize> = (0..table.len()).collect();
    idx.extend((0..deficit).map(|_| minority[rng.gen_range(0..minority.len())]));
    Ok(table.select_rows(&idx))
}

/// Evaluates `f(0..n)` across worker threads; results come back in index order.
pub(crate) fn par_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = std::thread::available_parallelism()
        .map_or(1, |w| w.get())
        .min(n.max(1));
    let chunk = n.div_ceil(workers).max(1);
    let f = &f;
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..n)
            .step_by(chunk)
            .map(|start| scope.spawn(move || (start..(start + chunk).min(n)).map(f).collect::<Vec<T>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker thread panicked"))
            .collect()
    })
}

/// Uniform shuffle of a copy of `values`.
pub(crate) fn shuffled<T: Clone>(values: &[T], rng: &mut ChaCha8Rng) -> Vec<T> {
    let mut out = values.to_vec();
    out.shuffle(rng);
    out
}

/// Models whose score is an affine function of standardized features.
pub trait LinearScore {
    fn scaler(&self) -> &Standardizer;
    fn intercept(&self) -> f64;
    fn coefficients(&self) -> &[f64];

    /// `intercept + βᵀx` on the standardized version of every row of `table`.
    fn linear_scores(&self, table: &FeatureTable) -> Result<Vec<f64>> {
        let x = self.scaler().transform(table)?;
        Ok(x.values
            .iter()
            .map(|r| self.intercept() + r.iter().zip(self.coefficients()).map(|(a, b)| a * b).sum::<f64>())
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::Target;

    fn table(cols: &[&str], values: Vec<Vec<f64>>, labels: Vec<f64>) -> FeatureTable {
        FeatureTable::from_matrix(
            cols.iter().map(|s| s.to_string()).collect(),
            values,
            Target::Presence,
            labels,
        )
        .unwrap()
    }

    #[test]
    fn standardize_hand_values() {
        let t = table(&["x"], vec![vec![1.0], vec![2.0], vec![3.0]], vec![0.0, 1.0, 0.0]);
        let (s, _) = standardize(&t).unwrap();
        let expected = [-1.2247, 0.0, 1.2247];
        for (row, e) in s.values.iter().zip(expected) {
            assert!((row[0] - e).abs() < 1e-4);
        }
    }

    #[test]
    fn standardize_keeps_standard_column_and_drops_constant() {
        let t = table(
            &["z", "c"],
            vec![vec![-1.0, 4.0], vec![1.0, 4.0], vec![-1.0, 4.0], vec![1.0, 4.0]],
            vec![0.0; 4],
        );
        let (s, scaler) = standardize(&t).unwrap();
        assert_eq!(scaler.dropped, vec!["c".to_string()]);
        assert_eq!(s.columns, vec!["z".to_string()]);
        for (a, b) in s.values.iter().zip(&t.values) {
            assert!((a[0] - b[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn oversample_balances() {
        let mut labels = vec![1.0; 9];
        labels.extend([0.0; 3]);
        let values = (0..12).map(|i| vec![i as f64]).collect();
        let t = table(&["x"], values, labels);
        let o = oversample(&t, 7).unwrap();
        let pos = o.labels.iter().filter(|&&l| l > 0.5).count();
        assert_eq!((pos, o.len() - pos), (9, 9));
        assert_eq!(o, oversample(&t, 7).unwrap());
        // Only negatives are duplicated.
        assert!(o.values[12..].iter().all(|r| r[0] >= 9.0));
    }

    #[test]
    fn oversample_balanced_is_identity_and_single_class_fails() {
        let t = table(&["x"], vec![vec![0.0], vec![1.0]], vec![0.0, 1.0]);
        assert_eq!(oversample(&t, 1).unwrap(), t);
        let one = table(&["x"], vec![vec![0.0], vec![1.0]], vec![1.0, 1.0]);
        assert!(matches!(oversample(&one, 1), Err(Error::ClassBalance(_))));
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
        assert_eq!(derive_seed(5, 3), derive_seed(5, 3));
    }
}
