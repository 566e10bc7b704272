use serde::{Deserialize, Serialize};

use super::{auc, derive_seed, rng, shuffled, LinearModel, LinearScore, LogisticModel};
use crate::error::{Error, Result};
use crate::features::FeatureTable;

/// Mean score degradation after shuffling one feature column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScore {
    pub feature: String,
    pub importance: f64,
}

fn permutation_scores(
    columns: &[String],
    table: &FeatureTable,
    repeats: usize,
    seed: u64,
    score: impl Fn(&FeatureTable) -> Result<f64>,
) -> Result<Vec<FeatureScore>> {
    if table.len() < 2 || repeats == 0 {
        return Err(Error::DataSize(
            "permutation importance needs two rows and one repeat".into(),
        ));
    }
    let base = score(table)?;
    columns
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let j = table
                .column_index(name)
                .ok_or_else(|| Error::Lookup(format!("table lacks model column `{name}`")))?;
            let original = table.column(j);
            let mut r = rng(derive_seed(seed, k as u64));
            let mut drop = 0.0;
            for _ in 0..repeats {
                let permuted = table.with_column_values(j, &shuffled(&original, &mut r));
                drop += base - score(&permuted)?;
            }
            Ok(FeatureScore {
                feature: name.clone(),
                importance: drop / repeats as f64,
            })
        })
        .collect()
}

/// Mean increase in `1 − AUC` when each model feature is shuffled, `repeats` times per
/// feature.
pub fn permutation_importance(
    model: &LogisticModel,
    table: &FeatureTable,
    repeats: usize,
    seed: u64,
) -> Result<Vec<FeatureScore>> {
    permutation_scores(model.columns(), table, repeats, seed, |t| {
        auc(&model.predict_log_odds(t)?, &t.labels)
    })
}

/// Mean decrease in R² when each model feature is shuffled.
pub fn permutation_importance_r2(
    model: &LinearModel,
    table: &FeatureTable,
    repeats: usize,
    seed: u64,
) -> Result<Vec<FeatureScore>> {
    permutation_scores(model.columns(), table, repeats, seed, |t| model.score(t))
}

/// Exact SHAP values of an affine score: `φ_j(x) = β_j·(z_j − z̄_j)` with `z` the
/// standardized features and `z̄` their mean over the background rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapValues {
    pub columns: Vec<String>,
    /// Score at the background mean, `α + βᵀz̄`.
    pub base_value: f64,
    pub background_means: Vec<f64>,
    /// One row of attributions per explained row.
    pub values: Vec<Vec<f64>>,
}

impl ShapValues {
    /// `base_value + Σ_j φ_j` for row `r`, which equals the model score.
    pub fn reconstruct(&self, r: usize) -> f64 {
        self.base_value + self.values[r].iter().sum::<f64>()
    }

    /// Mean absolute attribution per feature.
    pub fn mean_abs(&self) -> Vec<FeatureScore> {
        let n = self.values.len().max(1) as f64;
        self.columns
            .iter()
            .enumerate()
            .map(|(j, c)| FeatureScore {
                feature: c.clone(),
                importance: self.values.iter().map(|r| r[j].abs()).sum::<f64>() / n,
            })
            .collect()
    }
}

pub fn shap_linear<M: LinearScore>(model: &M, background: &FeatureTable, table: &FeatureTable) -> Result<ShapValues> {
    if background.is_empty() {
        return Err(Error::DataSize("SHAP needs background rows".into()));
    }
    let beta = model.coefficients();
    let bg = model.scaler().transform(background)?;
    let means: Vec<f64> = (0..beta.len())
        .map(|j| bg.values.iter().map(|r| r[j]).sum::<f64>() / bg.len() as f64)
        .collect();
    let base = model.intercept() + beta.iter().zip(&means).map(|(b, m)| b * m).sum::<f64>();
    let z = model.scaler().transform(table)?;
    let values = z
        .values
        .iter()
        .map(|row| {
            row.iter()
                .zip(beta)
                .zip(&means)
                .map(|((x, b), m)| b * (x - m))
                .collect()
        })
        .collect();
    Ok(ShapValues {
        columns: model.scaler().columns.clone(),
        base_value: base,
        background_means: means,
        values,
    })
}
