use serde::{Deserialize, Serialize};

use super::{auc, derive_seed, fit_logistic, oversample, FitOptions, LogisticModel};
use crate::error::{Error, Result};
use crate::features::FeatureTable;

/// Number of equal time blocks the train+validation rows are cut into.
const BLOCKS: usize = 10;
const FOLDS: usize = 5;

/// Row boundaries of the time-ordered split, as half-open ranges into the pooled rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitInfo {
    pub rows: usize,
    pub train_val: (usize, usize),
    pub test: (usize, usize),
    /// Per fold: training rows `0..train_end` and validation rows `val.0..val.1`.
    pub folds: Vec<FoldBounds>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldBounds {
    pub train_end: usize,
    pub val: (usize, usize),
}

impl SplitInfo {
    /// Last 20% of rows held out; the first 80% cut into ten blocks, fold `f` training on
    /// blocks `0..5+f` and validating on block `5+f`.
    pub fn new(rows: usize) -> Self {
        let tv = rows * 4 / 5;
        let edge = |k: usize| k * tv / BLOCKS;
        SplitInfo {
            rows,
            train_val: (0, tv),
            test: (tv, rows),
            folds: (0..FOLDS)
                .map(|f| FoldBounds {
                    train_end: edge(BLOCKS - FOLDS + f),
                    val: (edge(BLOCKS - FOLDS + f), edge(BLOCKS - FOLDS + f + 1)),
                })
                .collect(),
        }
    }
}

/// Validation AUCs of one penalty across folds; folds where either side held one class
/// are left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvScore {
    pub l2: f64,
    pub fold_auc: Vec<Option<f64>>,
    pub mean_auc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub model: LogisticModel,
    pub l2: f64,
    pub cv: Vec<CvScore>,
    pub split: SplitInfo,
    /// Train+validation rows, not oversampled.
    pub train_val: FeatureTable,
    pub test: FeatureTable,
}

/// Minimum pooled rows for the split to leave every fold a non-trivial block.
const MIN_ROWS: usize = 50;

/// Chooses the L2 penalty by forward-chaining cross-validation over the earliest 80% of
/// pooled rows and refits on all of them; the latest 20% is returned untouched as the test
/// set. Training sides are oversampled to balance; validation sides never are. Ties in
/// mean validation AUC go to the smallest penalty. Reported standard errors use the
/// information of the original, not oversampled, training rows.
pub fn time_ordered_select(tables: &[FeatureTable], l2_grid: &[f64], seed: u64, opts: FitOptions) -> Result<Selection> {
    if tables.len() < 5 {
        return Err(Error::DataSize(format!(
            "model selection needs at least 5 horizon tables, got {}",
            tables.len()
        )));
    }
    if l2_grid.is_empty() {
        return Err(Error::Argument("empty l2 grid".into()));
    }
    let pooled = FeatureTable::pool(tables)?;
    if pooled.len() < MIN_ROWS {
        return Err(Error::DataSize(format!(
            "{} pooled rows is too few for a 40/40/20 split (need {MIN_ROWS})",
            pooled.len()
        )));
    }
    let split = SplitInfo::new(pooled.len());
    let train_val = pooled.slice(split.train_val.0..split.train_val.1);
    let test = pooled.slice(split.test.0..split.test.1);

    let mut grid = l2_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut cv = Vec::with_capacity(grid.len());
    for &l2 in &grid {
        let mut fold_auc = Vec::with_capacity(FOLDS);
        for (f, fold) in split.folds.iter().enumerate() {
            let val = pooled.slice(fold.val.0..fold.val.1);
            let train = match oversample(&pooled.slice(0..fold.train_end), derive_seed(seed, f as u64)) {
                Ok(t) => t,
                Err(Error::ClassBalance(_)) => {
                    fold_auc.push(None);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let model = fit_logistic(&train, l2, opts)?;
            fold_auc.push(auc(&model.predict_log_odds(&val)?, &val.labels).ok());
        }
        let defined: Vec<f64> = fold_auc.iter().flatten().copied().collect();
        let mean_auc = (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);
        cv.push(CvScore { l2, fold_auc, mean_auc });
    }

    let mut best: Option<(f64, f64)> = None;
    for s in &cv {
        if let Some(m) = s.mean_auc {
            if best.is_none_or(|(_, b)| m > b + 1e-12) {
                best = Some((s.l2, m));
            }
        }
    }
    let l2 = match best {
        Some((l2, _)) => l2,
        None => {
            log::warn!("no fold had both classes on each side; using the smallest penalty");
            grid[0]
        }
    };
    let final_train = oversample(&train_val, derive_seed(seed, FOLDS as u64))?;
    let model = fit_logistic(&final_train, l2, opts)?.with_information_from(&train_val)?;
    Ok(Selection {
        model,
        l2,
        cv,
        split,
        train_val,
        test,
    })
}
