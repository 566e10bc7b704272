use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::{LinearScore, Standardizer};
use crate::error::{Error, Result};
use crate::features::FeatureTable;

/// Coefficients beyond this magnitude (log-odds per standard deviation) are treated as
/// diverging, i.e. the classes are separable.
const SEPARATION_LIMIT: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iter: 500,
            tol: 1e-8,
        }
    }
}

/// `P(y = 1 | x) = 1 / (1 + exp(−(α + βᵀz)))` with `z` the standardized features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub scaler: Standardizer,
    pub alpha: f64,
    pub beta: Vec<f64>,
    pub alpha_se: f64,
    pub beta_se: Vec<f64>,
    /// Two-sided Wald p-values of `beta`.
    pub coef_pvalues: Vec<f64>,
    pub l2: f64,
    pub iterations: usize,
    pub gradient_norm: f64,
    /// Set when coefficients diverged and the solution was clamped.
    pub separation_warning: bool,
}

impl LinearScore for LogisticModel {
    fn scaler(&self) -> &Standardizer {
        &self.scaler
    }

    fn intercept(&self) -> f64 {
        self.alpha
    }

    fn coefficients(&self) -> &[f64] {
        &self.beta
    }
}

pub(crate) fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + exp(x))` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

impl LogisticModel {
    pub fn columns(&self) -> &[String] {
        &self.scaler.columns
    }

    pub fn predict_log_odds(&self, table: &FeatureTable) -> Result<Vec<f64>> {
        self.linear_scores(table)
    }

    pub fn predict_proba(&self, table: &FeatureTable) -> Result<Vec<f64>> {
        Ok(self.predict_log_odds(table)?.into_iter().map(sigmoid).collect())
    }

    /// Wald 95% interval for coefficient `j`.
    pub fn coef_ci(&self, j: usize) -> (f64, f64) {
        let z = 1.959_963_984_540_054;
        (self.beta[j] - z * self.beta_se[j], self.beta[j] + z * self.beta_se[j])
    }
}

/// Penalized log-likelihood `Σ y·η − log(1 + e^η) − (l2/2)·‖β‖²` (intercept unpenalized).
pub(crate) fn penalized_loglik(x: &[Vec<f64>], y: &[f64], theta: &[f64], l2: f64) -> f64 {
    let ll: f64 = x
        .iter()
        .zip(y)
        .map(|(row, &yi)| {
            let eta = theta[0] + row.iter().zip(&theta[1..]).map(|(a, b)| a * b).sum::<f64>();
            yi * eta - softplus(eta)
        })
        .sum();
    ll - 0.5 * l2 * theta[1..].iter().map(|b| b * b).sum::<f64>()
}

/// Gradient and negative Hessian of [`penalized_loglik`].
fn gradient_hessian(x: &[Vec<f64>], y: &[f64], theta: &[f64], l2: f64) -> (DVector<f64>, DMatrix<f64>) {
    let p = theta.len();
    let mut g = DVector::zeros(p);
    let mut h = DMatrix::zeros(p, p);
    let mut z = vec![1.0; p];
    for (row, &yi) in x.iter().zip(y) {
        z[1..].copy_from_slice(row);
        let eta: f64 = z.iter().zip(theta).map(|(a, b)| a * b).sum();
        let mu = sigmoid(eta);
        let w = mu * (1.0 - mu);
        for a in 0..p {
            g[a] += (yi - mu) * z[a];
            for b in a..p {
                h[(a, b)] += w * z[a] * z[b];
            }
        }
    }
    for a in 1..p {
        g[a] -= l2 * theta[a];
        h[(a, a)] += l2;
    }
    for a in 0..p {
        for b in 0..a {
            h[(a, b)] = h[(b, a)];
        }
    }
    (g, h)
}

fn solve_spd(h: &DMatrix<f64>, g: &DVector<f64>) -> DVector<f64> {
    if let Some(ch) = h.clone().cholesky() {
        return ch.solve(g);
    }
    let mut jittered = h.clone();
    let scale = h.diagonal().amax().max(1.0);
    for i in 0..h.nrows() {
        jittered[(i, i)] += 1e-10 * scale;
    }
    match jittered.clone().cholesky() {
        Some(ch) => ch.solve(g),
        None => jittered
            .pseudo_inverse(1e-12)
            .map(|pinv| pinv * g)
            .unwrap_or_else(|_| DVector::zeros(g.len())),
    }
}

fn inverse_spd(h: &DMatrix<f64>) -> DMatrix<f64> {
    h.clone()
        .cholesky()
        .map(|c| c.inverse())
        .or_else(|| h.clone().pseudo_inverse(1e-12).ok())
        .unwrap_or_else(|| DMatrix::from_element(h.nrows(), h.ncols(), f64::NAN))
}

/// L2-penalized logistic regression by damped Newton (IRLS) iterations.
///
/// Features are standardized on `table`'s rows first; the fitted constants travel with
/// the model. Stops when the gradient norm falls to `opts.tol`. Wald standard errors come
/// from the inverse of the penalized observed information at the solution.
pub fn fit_logistic(table: &FeatureTable, l2: f64, opts: FitOptions) -> Result<LogisticModel> {
    if table.labels.len() != table.len() || table.is_empty() {
        return Err(Error::Contract("logistic fit needs a labelled, non-empty table".into()));
    }
    if table.labels.iter().any(|&y| y != 0.0 && y != 1.0) {
        return Err(Error::Contract("logistic fit needs 0/1 labels".into()));
    }
    let positives = table.labels.iter().filter(|&&y| y == 1.0).count();
    if positives == 0 || positives == table.len() {
        return Err(Error::ClassBalance("logistic fit needs both classes".into()));
    }
    if l2 < 0.0 {
        return Err(Error::Argument(format!("l2 penalty must be non-negative, got {l2}")));
    }
    let scaler = Standardizer::fit(table);
    let x = scaler.transform(table)?.values;
    let y = &table.labels;
    let p = scaler.columns.len() + 1;

    let mut theta = vec![0.0; p];
    let mut iterations = 0;
    let mut separation = false;
    let mut objective = penalized_loglik(&x, y, &theta, l2);
    let (mut g, mut h) = gradient_hessian(&x, y, &theta, l2);
    loop {
        if g.norm() <= opts.tol {
            break;
        }
        if iterations >= opts.max_iter {
            return Err(Error::Numerical {
                message: format!(
                    "logistic fit stalled with gradient norm {:.3e} (objective {objective:.6})",
                    g.norm()
                ),
                iterations,
            });
        }
        iterations += 1;
        let step = solve_spd(&h, &g);
        let mut scale = 1.0;
        let mut candidate: Vec<f64>;
        loop {
            candidate = theta.iter().zip(step.iter()).map(|(t, s)| t + scale * s).collect();
            let obj = penalized_loglik(&x, y, &candidate, l2);
            if obj >= objective - 1e-12 * (1.0 + objective.abs()) || scale < 1e-10 {
                objective = obj;
                break;
            }
            scale *= 0.5;
        }
        theta = candidate;
        if theta.iter().any(|t| t.abs() > SEPARATION_LIMIT) {
            separation = true;
            theta
                .iter_mut()
                .for_each(|t| *t = t.clamp(-SEPARATION_LIMIT, SEPARATION_LIMIT));
            log::warn!("logistic coefficients diverged; classes look separable, solution clamped");
            (g, h) = gradient_hessian(&x, y, &theta, l2);
            break;
        }
        (g, h) = gradient_hessian(&x, y, &theta, l2);
    }

    let max_residual = x
        .iter()
        .zip(y)
        .map(|(row, &yi)| {
            let eta = theta[0] + row.iter().zip(&theta[1..]).map(|(a, b)| a * b).sum::<f64>();
            (yi - sigmoid(eta)).abs()
        })
        .fold(0.0_f64, f64::max);
    if max_residual < 1e-6 && !separation {
        separation = true;
        log::warn!("logistic fit reproduces every label; classes are separable");
    }

    let (se, pvalues) = wald(&h, &theta);
    Ok(LogisticModel {
        scaler,
        alpha: theta[0],
        beta: theta[1..].to_vec(),
        alpha_se: se[0],
        beta_se: se[1..].to_vec(),
        coef_pvalues: pvalues,
        l2,
        iterations,
        gradient_norm: g.norm(),
        separation_warning: separation,
    })
}

/// Standard errors of all parameters and two-sided p-values of the slopes from the
/// inverse of the information matrix `h`.
fn wald(h: &DMatrix<f64>, theta: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let cov = inverse_spd(h);
    let se: Vec<f64> = (0..theta.len()).map(|i| cov[(i, i)].max(0.0).sqrt()).collect();
    let normal = Normal::standard();
    let pvalues = (1..theta.len())
        .map(|i| {
            let z = theta[i] / se[i];
            if z.is_finite() {
                (2.0 * normal.sf(z.abs())).min(1.0)
            } else {
                f64::NAN
            }
        })
        .collect();
    (se, pvalues)
}

impl LogisticModel {
    /// Recomputes standard errors and p-values from the information of `table`'s rows.
    ///
    /// A fit on an oversampled table counts duplicated rows as independent evidence and
    /// has its intercept shifted to balanced odds. The slopes are kept; the intercept is
    /// re-solved on `table` for the information only, so the reported model is unchanged.
    pub fn with_information_from(mut self, table: &FeatureTable) -> Result<LogisticModel> {
        let x = self.scaler.transform(table)?.values;
        let y = &table.labels;
        let offsets: Vec<f64> = x
            .iter()
            .map(|row| row.iter().zip(&self.beta).map(|(a, b)| a * b).sum())
            .collect();
        let mut alpha = self.alpha;
        for _ in 0..100 {
            let (g, h) = offsets.iter().zip(y).fold((0.0, 0.0), |(g, h), (o, yi)| {
                let mu = sigmoid(alpha + o);
                (g + yi - mu, h + mu * (1.0 - mu))
            });
            if g.abs() <= 1e-10 || h <= 0.0 {
                break;
            }
            alpha += g / h;
        }
        let mut theta = vec![alpha];
        theta.extend_from_slice(&self.beta);
        let (_, h) = gradient_hessian(&x, y, &theta, self.l2);
        let (se, pvalues) = wald(&h, &theta);
        self.alpha_se = se[0];
        self.beta_se = se[1..].to_vec();
        self.coef_pvalues = pvalues;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::Target;
    use crate::model::auc;

    fn table(values: Vec<Vec<f64>>, labels: Vec<f64>) -> FeatureTable {
        let cols = (0..values[0].len()).map(|j| format!("x{j}")).collect();
        FeatureTable::from_matrix(cols, values, Target::Presence, labels).unwrap()
    }

    #[test]
    fn separable_label_feature() {
        let labels: Vec<f64> = (0..20).map(|i| (i % 2) as f64).collect();
        let t = table(labels.iter().map(|&y| vec![y]).collect(), labels.clone());
        let m = fit_logistic(&t, 1e-3, FitOptions::default()).unwrap();
        assert!(m.beta[0] > 0.0);
        let p = m.predict_proba(&t).unwrap();
        assert_eq!(auc(&p, &labels).unwrap(), 1.0);
    }

    #[test]
    fn separable_without_penalty_is_flagged() {
        let labels: Vec<f64> = (0..10).map(|i| (i % 2) as f64).collect();
        let t = table(labels.iter().map(|&y| vec![y]).collect(), labels);
        let m = fit_logistic(&t, 0.0, FitOptions::default()).unwrap();
        assert!(m.separation_warning);
    }

    #[test]
    fn symmetric_two_points() {
        let t = table(vec![vec![1.0], vec![-1.0]], vec![1.0, 0.0]);
        let m = fit_logistic(&t, 1e-2, FitOptions::default()).unwrap();
        assert!(m.alpha.abs() < 1e-9);
        let mid = table(vec![vec![0.0]], vec![1.0]);
        assert!((m.predict_proba(&mid).unwrap()[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn single_class_is_rejected() {
        let t = table(vec![vec![1.0], vec![2.0]], vec![1.0, 1.0]);
        assert!(matches!(
            fit_logistic(&t, 1.0, FitOptions::default()),
            Err(Error::ClassBalance(_))
        ));
    }

    #[test]
    fn gradient_vanishes_at_solution() {
        let values: Vec<Vec<f64>> = (0..30)
            .map(|i| vec![(i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()])
            .collect();
        let labels: Vec<f64> = (0..30).map(|i| ((i * 7 % 5) < 2) as u8 as f64).collect();
        let t = table(values, labels);
        let m = fit_logistic(&t, 0.5, FitOptions::default()).unwrap();
        assert!(m.gradient_norm <= 1e-8);
        assert!(m.coef_pvalues.iter().all(|p| (0.0..=1.0).contains(p)));
    }
}
