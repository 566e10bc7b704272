use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::beta::beta_reg;

use super::{derive_seed, par_map, rng, LogisticModel};
use crate::error::{Error, Result};
use crate::features::FeatureTable;
use rand::Rng;

/// Area under the ROC curve by the Mann-Whitney rank statistic; tied scores share their
/// mean rank.
pub fn auc(scores: &[f64], labels: &[f64]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::Contract("score and label counts differ".into()));
    }
    let pos = labels.iter().filter(|&&y| y > 0.5).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::ClassBalance(format!(
            "AUC needs both classes ({pos} positive, {neg} negative)"
        )));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        // Ranks i+1..=j share their mean.
        let mid = (i + 1 + j) as f64 / 2.0;
        rank_sum_pos += mid * order[i..j].iter().filter(|&&k| labels[k] > 0.5).count() as f64;
        i = j;
    }
    let (p, n) = (pos as f64, neg as f64);
    Ok((rank_sum_pos - p * (p + 1.0) / 2.0) / (p * n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn from_predictions(predicted: &[bool], labels: &[f64]) -> Self {
        let mut c = ConfusionCounts::default();
        for (&p, &y) in predicted.iter().zip(labels) {
            match (p, y > 0.5) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, false) => c.tn += 1,
                (false, true) => c.fn_ += 1,
            }
        }
        c
    }

    /// `TP / (TP + FP)`, undefined without positive predictions.
    pub fn precision(&self) -> Option<f64> {
        let d = self.tp + self.fp;
        (d > 0).then(|| self.tp as f64 / d as f64)
    }

    /// `TP / (TP + FN)`, undefined without positive labels.
    pub fn recall(&self) -> Option<f64> {
        let d = self.tp + self.fn_;
        (d > 0).then(|| self.tp as f64 / d as f64)
    }
}

/// Threshold metrics of a classifier on one table, with exact binomial intervals and, for
/// denominators of at least 100, the normal-approximation alternative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub threshold: f64,
    pub counts: ConfusionCounts,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub auc: f64,
    pub ci_precision: Option<(f64, f64)>,
    pub ci_recall: Option<(f64, f64)>,
    pub ci_precision_normal: Option<(f64, f64)>,
    pub ci_recall_normal: Option<(f64, f64)>,
}

impl Metrics {
    /// Metrics of `scores` thresholded at `threshold` (score ≥ threshold predicts 1).
    pub fn from_scores(scores: &[f64], labels: &[f64], threshold: f64) -> Result<Metrics> {
        let auc = auc(scores, labels)?;
        let predicted: Vec<bool> = scores.iter().map(|&s| s >= threshold).collect();
        let counts = ConfusionCounts::from_predictions(&predicted, labels);
        let exact = |k: usize, n: usize| (n > 0).then(|| binom_ci(k, n, 0.05));
        let normal = |k: usize, n: usize| binom_ci_normal(k, n, 0.05);
        let (pd, rd) = (counts.tp + counts.fp, counts.tp + counts.fn_);
        Ok(Metrics {
            threshold,
            counts,
            precision: counts.precision(),
            recall: counts.recall(),
            auc,
            ci_precision: exact(counts.tp, pd),
            ci_recall: exact(counts.tp, rd),
            ci_precision_normal: normal(counts.tp, pd),
            ci_recall_normal: normal(counts.tp, rd),
        })
    }
}

/// Precision, recall and AUC of `model` on `table`.
pub fn evaluate(model: &LogisticModel, table: &FeatureTable, threshold: f64) -> Result<Metrics> {
    let p = model.predict_proba(table)?;
    Metrics::from_scores(&p, &table.labels, threshold)
}

/// Exact (Clopper-Pearson) two-sided `1 − alpha` interval for a binomial proportion,
/// found by bisecting the binomial tail probabilities in `p` to 1e-12.
pub fn binom_ci(k: usize, n: usize, alpha: f64) -> (f64, f64) {
    assert!(n >= 1 && k <= n, "binom_ci needs 0 <= k <= n and n >= 1");
    let (kf, nf) = (k as f64, n as f64);
    let half = alpha / 2.0;
    // P(X >= k | p) = I_p(k, n - k + 1), increasing in p.
    let lo = if k == 0 {
        0.0
    } else {
        bisect(|p| beta_reg(kf, nf - kf + 1.0, p) - half)
    };
    // P(X <= k | p) = 1 − I_p(k + 1, n − k), decreasing in p.
    let hi = if k == n {
        1.0
    } else {
        bisect(|p| half - (1.0 - beta_reg(kf + 1.0, nf - kf, p)))
    };
    (lo, hi)
}

/// Root of an increasing function on `[0, 1]`.
fn bisect(f: impl Fn(f64) -> f64) -> f64 {
    let (mut a, mut b) = (0.0_f64, 1.0_f64);
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        if f(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Wald interval `p̂ ± z·sqrt(p̂(1 − p̂)/n)` clipped to `[0, 1]`; offered only for `n ≥ 100`.
pub fn binom_ci_normal(k: usize, n: usize, alpha: f64) -> Option<(f64, f64)> {
    if n < 100 || k > n {
        return None;
    }
    let z = Normal::standard().inverse_cdf(1.0 - alpha / 2.0);
    let p = k as f64 / n as f64;
    let half = z * (p * (1.0 - p) / n as f64).sqrt();
    Some(((p - half).max(0.0), (p + half).min(1.0)))
}

/// Linear-interpolation quantile of already sorted values.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapCi {
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
    /// Iterations abandoned after ten single-class resamples.
    pub skipped: usize,
}

const MAX_REDRAWS: usize = 10;

/// Percentile bootstrap (2.5%, 97.5%) of the AUC of fixed scores.
///
/// Each iteration resamples rows with replacement from its own derived seed; a resample
/// holding one class is redrawn up to ten times, then skipped.
pub fn bootstrap_auc_ci_scores(scores: &[f64], labels: &[f64], iters: usize, seed: u64) -> Result<BootstrapCi> {
    auc(scores, labels)?;
    if iters == 0 {
        return Err(Error::Argument("bootstrap needs at least one iteration".into()));
    }
    let n = scores.len();
    let draws = par_map(iters, |it| {
        let mut r = rng(derive_seed(seed, it as u64));
        for _ in 0..=MAX_REDRAWS {
            let idx: Vec<usize> = (0..n).map(|_| r.gen_range(0..n)).collect();
            let s: Vec<f64> = idx.iter().map(|&i| scores[i]).collect();
            let y: Vec<f64> = idx.iter().map(|&i| labels[i]).collect();
            if let Ok(a) = auc(&s, &y) {
                return Some(a);
            }
        }
        None
    });
    let skipped = draws.iter().filter(|d| d.is_none()).count();
    let mut values: Vec<f64> = draws.into_iter().flatten().collect();
    if values.is_empty() {
        return Err(Error::ClassBalance(
            "every bootstrap resample held a single class".into(),
        ));
    }
    values.sort_by(f64::total_cmp);
    Ok(BootstrapCi {
        lo: quantile(&values, 0.025),
        hi: quantile(&values, 0.975),
        iterations: values.len(),
        skipped,
    })
}

/// [`bootstrap_auc_ci_scores`] on the model's predicted probabilities for `table`.
pub fn bootstrap_auc_ci(model: &LogisticModel, table: &FeatureTable, iters: usize, seed: u64) -> Result<BootstrapCi> {
    let p = model.predict_proba(table)?;
    bootstrap_auc_ci_scores(&p, &table.labels, iters, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auc_hand_cases() {
        assert_eq!(auc(&[0.9, 0.8, 0.3], &[1.0, 0.0, 1.0]).unwrap(), 0.5);
        assert_eq!(auc(&[0.9, 0.1], &[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(auc(&[0.1, 0.9], &[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(auc(&[0.5, 0.5], &[1.0, 0.0]).unwrap(), 0.5);
        assert!(auc(&[0.5, 0.4], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn perfect_predictor_metrics() {
        let m = Metrics::from_scores(&[0.9, 0.8, 0.2, 0.1], &[1.0, 1.0, 0.0, 0.0], 0.5).unwrap();
        assert_eq!((m.precision, m.recall, m.auc), (Some(1.0), Some(1.0), 1.0));
        assert_eq!(m.ci_precision.unwrap().1, 1.0);
        assert!(m.ci_precision_normal.is_none());
    }

    #[test]
    fn no_positive_predictions_leave_precision_undefined() {
        let m = Metrics::from_scores(&[0.2, 0.1], &[1.0, 0.0], 0.5).unwrap();
        assert_eq!(m.precision, None);
        assert_eq!(m.ci_precision, None);
        assert_eq!(m.recall, Some(0.0));
    }

    #[test]
    fn binom_boundaries() {
        assert_eq!(binom_ci(0, 10, 0.05).0, 0.0);
        assert_eq!(binom_ci(10, 10, 0.05).1, 1.0);
        // k = 0: upper limit solves (1 − p)^n = alpha/2.
        let hi = binom_ci(0, 10, 0.05).1;
        assert!((hi - (1.0 - 0.025_f64.powf(0.1))).abs() < 1e-9);
    }

    #[test]
    fn normal_interval_needs_large_n() {
        assert!(binom_ci_normal(5, 10, 0.05).is_none());
        let (lo, hi) = binom_ci_normal(50, 100, 0.05).unwrap();
        assert!((lo - (0.5 - 1.959964 * 0.05)).abs() < 1e-5);
        assert!((hi - (0.5 + 1.959964 * 0.05)).abs() < 1e-5);
    }

    #[test]
    fn quantile_interpolates() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
        assert!((quantile(&v, 0.5) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn bootstrap_cases() {
        let s = [0.9, 0.8, 0.7, 0.3, 0.2, 0.1];
        let y = [1.0, 1.0, 1.0, 0.0, 0.0, 0.0];
        let ci = bootstrap_auc_ci_scores(&s, &y, 200, 3).unwrap();
        assert_eq!((ci.lo, ci.hi), (1.0, 1.0));
        let one = bootstrap_auc_ci_scores(&s, &[1.0, 0.0, 1.0, 0.0, 1.0, 0.0], 1, 9).unwrap();
        assert_eq!(one.lo, one.hi);
        let noisy = [1.0, 0.0, 1.0, 0.0, 1.0, 0.0];
        assert_eq!(
            bootstrap_auc_ci_scores(&s, &noisy, 100, 4).unwrap(),
            bootstrap_auc_ci_scores(&s, &noisy, 100, 4).unwrap()
        );
    }
}
