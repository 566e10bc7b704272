use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{auc, derive_seed, par_map, quantile, rng, ConfusionCounts, LogisticModel};
use crate::error::{Error, Result};
use crate::features::FeatureTable;
use crate::graph::TemporalNetwork;

/// Mean and empirical intervals of one metric over null-model trials. The 90% interval
/// trims 5% from each tail; the 95% interval trims 2.5%.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: Option<f64>,
    pub ci90: Option<(f64, f64)>,
    pub ci95: Option<(f64, f64)>,
    /// Trials in which the metric was defined.
    pub defined_trials: usize,
}

impl MetricSummary {
    pub fn from_trials(values: &[Option<f64>]) -> Self {
        let mut v: Vec<f64> = values.iter().flatten().copied().collect();
        if v.is_empty() {
            return MetricSummary {
                mean: None,
                ci90: None,
                ci95: None,
                defined_trials: 0,
            };
        }
        v.sort_by(f64::total_cmp);
        // Shifted by the minimum so that identical trials average exactly.
        let shift = v[0];
        MetricSummary {
            mean: Some(shift + v.iter().map(|x| x - shift).sum::<f64>() / v.len() as f64),
            ci90: Some((quantile(&v, 0.05), quantile(&v, 0.95))),
            ci95: Some((quantile(&v, 0.025), quantile(&v, 0.975))),
            defined_trials: v.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullReport {
    pub trials: usize,
    pub precision: MetricSummary,
    pub recall: MetricSummary,
    pub auc: MetricSummary,
    /// Mean fraction of positive labels (or predictions) the null produced.
    pub mean_positive_rate: f64,
}

struct Trial {
    precision: Option<f64>,
    recall: Option<f64>,
    auc: Option<f64>,
    positive_rate: f64,
}

fn summarize(trials: Vec<Trial>) -> NullReport {
    let n = trials.len();
    let pick = |f: fn(&Trial) -> Option<f64>| trials.iter().map(f).collect::<Vec<_>>();
    NullReport {
        trials: n,
        precision: MetricSummary::from_trials(&pick(|t| t.precision)),
        recall: MetricSummary::from_trials(&pick(|t| t.recall)),
        auc: MetricSummary::from_trials(&pick(|t| t.auc)),
        mean_positive_rate: trials.iter().map(|t| t.positive_rate).sum::<f64>() / n.max(1) as f64,
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials < 20 {
        return Err(Error::Argument(format!(
            "null models need at least 20 trials for a 90% interval, got {trials}"
        )));
    }
    Ok(())
}

/// Predicts 1 with the training positive rate, independently per test row, and scores the
/// random predictions against the real test labels.
pub fn null_prior_predictor(train_labels: &[f64], test_labels: &[f64], trials: usize, seed: u64) -> Result<NullReport> {
    check_trials(trials)?;
    if train_labels.is_empty() || test_labels.is_empty() {
        return Err(Error::DataSize("null predictor needs training and test labels".into()));
    }
    let prior = train_labels.iter().filter(|&&y| y > 0.5).count() as f64 / train_labels.len() as f64;
    let results = par_map(trials, |k| {
        let mut r = rng(derive_seed(seed, k as u64));
        let predicted: Vec<bool> = test_labels.iter().map(|_| r.gen_bool(prior)).collect();
        let scores: Vec<f64> = predicted.iter().map(|&p| if p { 1.0 } else { 0.0 }).collect();
        let counts = ConfusionCounts::from_predictions(&predicted, test_labels);
        Trial {
            precision: counts.precision(),
            recall: counts.recall(),
            auc: auc(&scores, test_labels).ok(),
            positive_rate: scores.iter().sum::<f64>() / scores.len() as f64,
        }
    });
    Ok(summarize(results))
}

/// Presence of every node in a random graph on `n` nodes where each pair is an edge
/// independently with probability `density`.
pub fn random_presence<R: Rng>(n: usize, density: f64, rng: &mut R) -> Vec<bool> {
    let mut present = vec![false; n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                present[i] = true;
                present[j] = true;
            }
        }
    }
    present
}

/// Edge density of snapshot `t` over all unordered pairs of the universe.
pub fn edge_density(tn: &TemporalNetwork, t: usize) -> Result<f64> {
    let s = tn
        .snapshots()
        .get(t)
        .ok_or_else(|| Error::Horizon(format!("snapshot {t} does not exist")))?;
    let n = tn.universe().len();
    let pairs = if tn.is_directed() { n * (n - 1) } else { n * (n - 1) / 2 };
    Ok(if pairs == 0 {
        0.0
    } else {
        s.edges().len() as f64 / pairs as f64
    })
}

/// Scores the fitted model against presence labels drawn from a density-matched random
/// graph: for every horizon `t` among `table`'s rows, each pair of universe nodes is an
/// edge at `t + 1` with the observed density of snapshot `t + 1`.
pub fn null_edge_presence(
    tn: &TemporalNetwork,
    model: &LogisticModel,
    table: &FeatureTable,
    threshold: f64,
    trials: usize,
    seed: u64,
) -> Result<NullReport> {
    check_trials(trials)?;
    let scores = model.predict_proba(table)?;
    let mut densities = BTreeMap::new();
    for key in &table.rows {
        if let Entry::Vacant(slot) = densities.entry(key.as_of) {
            slot.insert(edge_density(tn, key.as_of + 1)?);
        }
    }
    let n = tn.universe().len();
    let predicted: Vec<bool> = scores.iter().map(|&s| s >= threshold).collect();
    let results = par_map(trials, |k| {
        let mut r = rng(derive_seed(seed, k as u64));
        let present: BTreeMap<usize, Vec<bool>> = densities
            .iter()
            .map(|(&t, &d)| (t, random_presence(n, d, &mut r)))
            .collect();
        let labels: Vec<f64> = table
            .rows
            .iter()
            .map(|key| if present[&key.as_of][key.node] { 1.0 } else { 0.0 })
            .collect();
        let counts = ConfusionCounts::from_predictions(&predicted, &labels);
        Trial {
            precision: counts.precision(),
            recall: counts.recall(),
            auc: auc(&scores, &labels).ok(),
            positive_rate: labels.iter().sum::<f64>() / labels.len().max(1) as f64,
        }
    });
    Ok(summarize(results))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_prior_is_chance() {
        let train: Vec<f64> = (0..200).map(|i| (i % 2) as f64).collect();
        let test: Vec<f64> = (0..400).map(|i| (i % 2) as f64).collect();
        let r = null_prior_predictor(&train, &test, 200, 11).unwrap();
        // Per-trial precision and AUC have sd ≈ 0.035 over 400 rows; the mean of 200
        // trials has sd ≈ 0.0025.
        assert!((r.precision.mean.unwrap() - 0.5).abs() < 0.0075);
        assert!((r.auc.mean.unwrap() - 0.5).abs() < 0.0075);
        assert_eq!(r, null_prior_predictor(&train, &test, 200, 11).unwrap());
    }

    #[test]
    fn certain_prior() {
        let train = vec![1.0; 10];
        let test = vec![1.0, 0.0, 0.0, 1.0, 0.0];
        let r = null_prior_predictor(&train, &test, 20, 1).unwrap();
        assert_eq!(r.recall.mean, Some(1.0));
        assert_eq!(r.precision.mean, Some(0.4));
        assert_eq!(r.precision.ci90, Some((0.4, 0.4)));
    }

    #[test]
    fn too_few_trials() {
        assert!(null_prior_predictor(&[1.0, 0.0], &[1.0, 0.0], 19, 1).is_err());
    }

    #[test]
    fn random_presence_boundaries_and_rate() {
        let mut r = rng(5);
        assert!(random_presence(10, 0.0, &mut r).iter().all(|p| !p));
        assert!(random_presence(10, 1.0, &mut r).iter().all(|&p| p));
        let (n, d) = (40, 0.02);
        let trials = 500;
        let hits: usize = (0..trials)
            .map(|_| random_presence(n, d, &mut r).iter().filter(|&&p| p).count())
            .sum();
        let rate = hits as f64 / (trials * n) as f64;
        let expected = 1.0 - (1.0 - d).powi(n as i32 - 1);
        // Node indicators are positively correlated; 3σ of independent draws is doubled.
        let sigma = (expected * (1.0 - expected) / (trials * n) as f64).sqrt();
        assert!((rate - expected).abs() < 6.0 * sigma, "{rate} vs {expected}");
    }
}
