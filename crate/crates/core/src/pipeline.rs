//! The end-to-end prediction run: historical features for every horizon, correlation
//! pruning, time-ordered model selection, held-out evaluation, null baselines and
//! attribution.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{prune_correlated, FeatureBuilder, FeatureTable, RowKey, Target};
use crate::graph::TemporalNetwork;
use crate::model::{
    bootstrap_auc_ci, derive_seed, evaluate, fit_linear, null_edge_presence, null_prior_predictor,
    null_shuffle_regression, permutation_importance, permutation_importance_r2, shap_linear, time_ordered_select,
    BootstrapCi, CvScore, FeatureScore, FitOptions, LinearModel, LogisticModel, Metrics, NullReport, R2Distribution,
    ShapValues, SplitInfo,
};

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictConfig {
    pub target: Target,
    pub l2_grid: Vec<f64>,
    pub seed: u64,
    pub bootstrap_iters: usize,
    pub null_trials: usize,
    pub permutation_repeats: usize,
    /// Absolute Pearson correlation above which one of two features is pruned.
    pub prune_threshold: f64,
    /// Probability at or above which a row is predicted positive.
    pub threshold: f64,
    /// Relative strength change counted as a change by the `change` target.
    pub change_threshold: f64,
    pub fit: FitOptions,
}

impl Default for PredictConfig {
    fn default() -> Self {
        PredictConfig {
            target: Target::Presence,
            l2_grid: vec![0.01, 0.1, 1.0, 10.0],
            seed: 0,
            bootstrap_iters: 1000,
            null_trials: 100,
            permutation_repeats: 10,
            prune_threshold: 0.8,
            threshold: 0.5,
            change_threshold: 0.05,
            fit: FitOptions::default(),
        }
    }
}

/// Seeds of every stochastic step, derived from the run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedLog {
    pub run: u64,
    pub selection: u64,
    pub bootstrap: u64,
    pub null_prior: u64,
    pub null_edge: u64,
    pub permutation: u64,
    pub regression_null: u64,
}

impl SeedLog {
    pub fn new(run: u64) -> Self {
        SeedLog {
            run,
            selection: derive_seed(run, 1),
            bootstrap: derive_seed(run, 2),
            null_prior: derive_seed(run, 3),
            null_edge: derive_seed(run, 4),
            permutation: derive_seed(run, 5),
            regression_null: derive_seed(run, 6),
        }
    }
}

/// One row of the coefficient table, on standardized features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub feature: String,
    pub coef: f64,
    pub std_error: f64,
    pub pvalue: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

const Z95: f64 = 1.959_963_984_540_054;

fn coefficient_rows(columns: &[String], coef: &[f64], se: &[f64], pvalues: &[f64]) -> Vec<CoefficientRow> {
    columns
        .iter()
        .enumerate()
        .map(|(j, c)| CoefficientRow {
            feature: c.clone(),
            coef: coef[j],
            std_error: se[j],
            pvalue: pvalues[j],
            ci_lo: coef[j] - Z95 * se[j],
            ci_hi: coef[j] + Z95 * se[j],
        })
        .collect()
}

/// CSV with header `feature,coef,pvalue,ci_lo,ci_hi`.
pub fn write_coefficients_csv<W: Write>(rows: &[CoefficientRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["feature", "coef", "pvalue", "ci_lo", "ci_hi"])?;
    for r in rows {
        w.write_record([
            r.feature.clone(),
            r.coef.to_string(),
            r.pvalue.to_string(),
            r.ci_lo.to_string(),
            r.ci_hi.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<coefficient csv>", e))?;
    Ok(())
}

/// Held-out evaluation of the selected logistic model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub l2: f64,
    pub cv: Vec<CvScore>,
    pub split: SplitInfo,
    pub test_positive_rate: f64,
    pub metrics: Metrics,
    pub ci_auc: BootstrapCi,
    pub null_prior: NullReport,
    /// Density-matched random-edge null; presence target only.
    pub null_edge: Option<NullReport>,
    pub permutation_importance: Vec<FeatureScore>,
    pub shap_mean_abs: Vec<FeatureScore>,
    pub shap: ShapValues,
    pub test_rows: Vec<RowKey>,
    pub coefficients: Vec<CoefficientRow>,
    pub separation_warning: bool,
    #[serde(skip)]
    pub model: Option<LogisticModel>,
}

/// Held-out evaluation of the least-squares model of relative strength change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub split: SplitInfo,
    pub r2_train: f64,
    pub r2_test: f64,
    pub null_shuffled: R2Distribution,
    pub permutation_importance: Vec<FeatureScore>,
    pub shap_mean_abs: Vec<FeatureScore>,
    pub shap: ShapValues,
    pub test_rows: Vec<RowKey>,
    pub coefficients: Vec<CoefficientRow>,
    pub rank_deficient: bool,
    #[serde(skip)]
    pub model: Option<LinearModel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub tool: String,
    pub config: PredictConfig,
    pub seeds: SeedLog,
    /// Snapshot indices whose next-snapshot outcome was modelled.
    pub horizons: Vec<usize>,
    pub rows: usize,
    pub positive_rate: Option<f64>,
    /// Columns removed for correlation above the pruning threshold, in drop order.
    pub pruned_columns: Vec<String>,
    /// Columns left out of the fit because they were constant on the training rows.
    pub constant_columns: Vec<String>,
    pub classification: Option<EvaluationReport>,
    pub regression: Option<RegressionReport>,
}

impl PredictionReport {
    pub fn coefficients(&self) -> &[CoefficientRow] {
        match (&self.classification, &self.regression) {
            (Some(c), _) => &c.coefficients,
            (_, Some(r)) => &r.coefficients,
            _ => &[],
        }
    }
}

/// Feature tables for every horizon `1..T−1` with at least one labelled row.
pub fn horizon_tables(tn: &TemporalNetwork, target: Target, change_threshold: f64) -> Result<Vec<FeatureTable>> {
    if tn.len() < 3 {
        return Err(Error::DataSize(format!(
            "prediction needs at least 3 snapshots, got {}",
            tn.len()
        )));
    }
    let builder = FeatureBuilder::new(tn)?;
    let mut tables = Vec::new();
    for t in 1..tn.len() - 1 {
        let table = builder.table_with_threshold(t, target, change_threshold)?;
        if !table.is_empty() {
            tables.push(table);
        }
    }
    Ok(tables)
}

/// Runs the full prediction pipeline on `tn`.
pub fn run_prediction(tn: &TemporalNetwork, cfg: &PredictConfig) -> Result<PredictionReport> {
    let seeds = SeedLog::new(cfg.seed);
    let tables = horizon_tables(tn, cfg.target, cfg.change_threshold)?;
    if tables.len() < 5 {
        return Err(Error::DataSize(format!(
            "prediction needs at least 5 horizons with labelled rows, got {}",
            tables.len()
        )));
    }
    let horizons: Vec<usize> = tables.iter().map(|t| t.rows[0].as_of).collect();
    let pooled = FeatureTable::pool(&tables)?;
    let split = SplitInfo::new(pooled.len());
    let (_, pruned) = prune_correlated(&pooled.slice(split.train_val.0..split.train_val.1), cfg.prune_threshold)?;
    let tables: Vec<FeatureTable> = tables.iter().map(|t| t.drop_columns(&pruned)).collect();
    let pooled = pooled.drop_columns(&pruned);

    let mut report = PredictionReport {
        tool: TOOL_VERSION.to_string(),
        config: cfg.clone(),
        seeds,
        horizons,
        rows: pooled.len(),
        positive_rate: cfg.target.is_binary().then(|| pooled.positive_rate()),
        pruned_columns: pruned,
        constant_columns: Vec::new(),
        classification: None,
        regression: None,
    };
    if cfg.target.is_binary() {
        let eval = classify(tn, &tables, cfg, &seeds)?;
        report.constant_columns = eval.model.as_ref().map_or_else(Vec::new, |m| m.scaler.dropped.clone());
        report.classification = Some(eval);
    } else {
        let reg = regress(&pooled, split, cfg, &seeds)?;
        report.constant_columns = reg.model.as_ref().map_or_else(Vec::new, |m| m.scaler.dropped.clone());
        report.regression = Some(reg);
    }
    Ok(report)
}

fn classify(
    tn: &TemporalNetwork,
    tables: &[FeatureTable],
    cfg: &PredictConfig,
    seeds: &SeedLog,
) -> Result<EvaluationReport> {
    let sel = time_ordered_select(tables, &cfg.l2_grid, seeds.selection, cfg.fit)?;
    let model = &sel.model;
    let test = &sel.test;
    let metrics = evaluate(model, test, cfg.threshold)?;
    let ci_auc = bootstrap_auc_ci(model, test, cfg.bootstrap_iters, seeds.bootstrap)?;
    let null_prior = null_prior_predictor(&sel.train_val.labels, &test.labels, cfg.null_trials, seeds.null_prior)?;
    let null_edge = match cfg.target {
        Target::Presence => Some(null_edge_presence(
            tn,
            model,
            test,
            cfg.threshold,
            cfg.null_trials,
            seeds.null_edge,
        )?),
        _ => None,
    };
    let permutation = permutation_importance(model, test, cfg.permutation_repeats, seeds.permutation)?;
    let shap = shap_linear(model, &sel.train_val, test)?;
    Ok(EvaluationReport {
        l2: sel.l2,
        cv: sel.cv.clone(),
        split: sel.split.clone(),
        test_positive_rate: test.positive_rate(),
        metrics,
        ci_auc,
        null_prior,
        null_edge,
        permutation_importance: permutation,
        shap_mean_abs: shap.mean_abs(),
        shap,
        test_rows: test.rows.clone(),
        coefficients: coefficient_rows(model.columns(), &model.beta, &model.beta_se, &model.coef_pvalues),
        separation_warning: model.separation_warning,
        model: Some(sel.model),
    })
}

fn regress(pooled: &FeatureTable, split: SplitInfo, cfg: &PredictConfig, seeds: &SeedLog) -> Result<RegressionReport> {
    let train = pooled.slice(split.train_val.0..split.train_val.1);
    let test = pooled.slice(split.test.0..split.test.1);
    let model = fit_linear(&train)?;
    let r2_test = model.score(&test)?;
    let null_shuffled = null_shuffle_regression(&train, &test, cfg.null_trials, seeds.regression_null)?;
    let permutation = permutation_importance_r2(&model, &test, cfg.permutation_repeats, seeds.permutation)?;
    let shap = shap_linear(&model, &train, &test)?;
    Ok(RegressionReport {
        split,
        r2_train: model.r2,
        r2_test,
        null_shuffled,
        permutation_importance: permutation,
        shap_mean_abs: shap.mean_abs(),
        shap,
        test_rows: test.rows.clone(),
        coefficients: coefficient_rows(
            model.columns(),
            &model.coefficients,
            &model.std_errors,
            &model.coef_pvalues,
        ),
        rank_deficient: model.rank_deficient,
        model: Some(model),
    })
}
