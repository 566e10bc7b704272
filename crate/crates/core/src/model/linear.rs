use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{derive_seed, par_map, quantile, rng, shuffled, LinearScore, MetricSummary, Standardizer};
use crate::error::{Error, Result};
use crate::features::FeatureTable;

/// Ridge added to the normal equations for conditioning.
const RIDGE_JITTER: f64 = 1e-10;

/// Ordinary least squares on standardized features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub scaler: Standardizer,
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// Two-sided t-test p-values of `coefficients`.
    pub coef_pvalues: Vec<f64>,
    /// In-sample coefficient of determination.
    pub r2: f64,
    /// Set when the design had deficient rank and the pseudo-inverse was used.
    pub rank_deficient: bool,
}

impl LinearScore for LinearModel {
    fn scaler(&self) -> &Standardizer {
        &self.scaler
    }

    fn intercept(&self) -> f64 {
        self.intercept
    }

    fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }
}

impl LinearModel {
    pub fn columns(&self) -> &[String] {
        &self.scaler.columns
    }

    pub fn predict(&self, table: &FeatureTable) -> Result<Vec<f64>> {
        self.linear_scores(table)
    }

    /// Out-of-sample R² on a labelled table.
    pub fn score(&self, table: &FeatureTable) -> Result<f64> {
        r2_score(&table.labels, &self.predict(table)?)
    }
}

/// `1 − SS_res / SS_tot`.
pub fn r2_score(y: &[f64], predicted: &[f64]) -> Result<f64> {
    if y.len() != predicted.len() || y.is_empty() {
        return Err(Error::Contract("R² needs equal, non-empty vectors".into()));
    }
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    if ss_tot == 0.0 {
        return Err(Error::Degenerate("R² is undefined for a constant target".into()));
    }
    let ss_res: f64 = y.iter().zip(predicted).map(|(a, b)| (a - b).powi(2)).sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Least-squares fit via the normal equations with a tiny ridge; falls back to the
/// SVD pseudo-inverse when the design lacks full column rank.
pub fn fit_linear(table: &FeatureTable) -> Result<LinearModel> {
    if table.labels.len() != table.len() || table.is_empty() {
        return Err(Error::Contract("linear fit needs a labelled, non-empty table".into()));
    }
    let scaler = Standardizer::fit(table);
    let x = scaler.transform(table)?.values;
    let n = x.len();
    let p = scaler.columns.len() + 1;
    let design = DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { x[i][j - 1] });
    let y = DVector::from_column_slice(&table.labels);
    let xtx = design.transpose() * &design;
    let xty = design.transpose() * &y;

    let sv = xtx.clone().svd(false, false).singular_values;
    let rank_deficient = sv.min() <= 1e-10 * sv.max().max(1.0);
    let inverse = if rank_deficient {
        log::warn!("linear design is rank deficient; using the pseudo-inverse");
        xtx.clone()
            .pseudo_inverse(1e-10 * sv.max().max(1.0))
            .map_err(|e| Error::Numerical {
                message: format!("pseudo-inverse failed: {e}"),
                iterations: 0,
            })?
    } else {
        let ridged = &xtx + DMatrix::identity(p, p) * RIDGE_JITTER;
        ridged.cholesky().map(|c| c.inverse()).ok_or_else(|| Error::Numerical {
            message: "normal equations are not positive definite".into(),
            iterations: 0,
        })?
    };
    let theta = &inverse * xty;
    let fitted = &design * &theta;
    let rss: f64 = (&y - &fitted).iter().map(|r| r * r).sum();
    let r2 = r2_score(&table.labels, fitted.as_slice()).unwrap_or(f64::NAN);

    let dof = n as f64 - p as f64;
    let (std_errors, pvalues) = if dof > 0.0 {
        let sigma2 = rss / dof;
        let t = StudentsT::new(0.0, 1.0, dof).map_err(|e| Error::Statistics(e.to_string()))?;
        (1..p)
            .map(|j| {
                let se = (sigma2 * inverse[(j, j)]).max(0.0).sqrt();
                let stat = theta[j] / se;
                let pv = if stat.is_finite() {
                    (2.0 * t.sf(stat.abs())).min(1.0)
                } else {
                    f64::NAN
                };
                (se, pv)
            })
            .unzip()
    } else {
        (vec![f64::NAN; p - 1], vec![f64::NAN; p - 1])
    };
    Ok(LinearModel {
        scaler,
        intercept: theta[0],
        coefficients: theta.as_slice()[1..].to_vec(),
        std_errors,
        coef_pvalues: pvalues,
        r2,
        rank_deficient,
    })
}

/// Held-out R² of the real fit alongside its distribution under shuffled training targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct R2Distribution {
    pub trials: usize,
    pub values: Vec<f64>,
    pub summary: MetricSummary,
}

/// Refits after shuffling the training targets `trials` times and scores each refit on
/// `test`.
pub fn null_shuffle_regression(
    train: &FeatureTable,
    test: &FeatureTable,
    trials: usize,
    seed: u64,
) -> Result<R2Distribution> {
    if trials == 0 {
        return Err(Error::Argument("shuffled null needs at least one trial".into()));
    }
    let values = par_map(trials, |k| {
        let mut r = rng(derive_seed(seed, k as u64));
        let mut t = train.clone();
        t.labels = shuffled(&train.labels, &mut r);
        fit_linear(&t)?.score(test)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let mut sorted = values.clone();
    sorted.sort_by(f64::total_cmp);
    let summary = MetricSummary {
        mean: Some(values.iter().sum::<f64>() / values.len() as f64),
        ci90: Some((quantile(&sorted, 0.05), quantile(&sorted, 0.95))),
        ci95: Some((quantile(&sorted, 0.025), quantile(&sorted, 0.975))),
        defined_trials: values.len(),
    };
    Ok(R2Distribution {
        trials,
        values,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::Target;
    use rand::Rng;

    fn table(values: Vec<Vec<f64>>, y: Vec<f64>) -> FeatureTable {
        let cols = (0..values[0].len()).map(|j| format!("x{j}")).collect();
        FeatureTable::from_matrix(cols, values, Target::RelChange, y).unwrap()
    }

    #[test]
    fn exact_linear_target() {
        let x: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64, ((i * 7) % 5) as f64]).collect();
        let y = x.iter().map(|r| 3.0 - 2.0 * r[0] + 0.5 * r[1]).collect();
        let m = fit_linear(&table(x, y)).unwrap();
        assert!((m.r2 - 1.0).abs() < 1e-9);
        assert!(!m.rank_deficient);
    }

    #[test]
    fn duplicated_column_is_rank_deficient() {
        let x: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, i as f64]).collect();
        let y: Vec<f64> = (0..10).map(|i| 2.0 * i as f64 + 1.0).collect();
        let t = table(x, y);
        let m = fit_linear(&t).unwrap();
        assert!(m.rank_deficient);
        assert!((m.score(&t).unwrap() - 1.0).abs() < 1e-9);
        // The minimum-norm solution splits the weight evenly.
        assert!((m.coefficients[0] - m.coefficients[1]).abs() < 1e-6);
    }

    #[test]
    fn shuffled_null_of_perfect_fit_is_near_zero() {
        let mut r = rng(3);
        let x: Vec<Vec<f64>> = (0..400).map(|_| vec![r.gen::<f64>()]).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v[0]).collect();
        let t = table(x, y);
        let (train, test) = (t.slice(0..300), t.slice(300..400));
        assert!(fit_linear(&train).unwrap().score(&test).unwrap() > 1.0 - 1e-9);
        let null = null_shuffle_regression(&train, &test, 100, 8).unwrap();
        assert!(null.summary.mean.unwrap().abs() < 0.05);
    }
}
