//! Permutation importance and exact linear SHAP values for a logistic model.
//!
//! cargo run --example explain_model

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_importance::features::{FeatureTable, Target};
use spectral_importance::model::{fit_logistic, permutation_importance, shap_linear, FitOptions};

pub fn run() -> spectral_importance::Result<()> {
    // Only `strong` and `weak` influence the outcome; `noise` does not.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let columns: Vec<String> = ["strong", "weak", "noise"].iter().map(|s| s.to_string()).collect();
    let mut values = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..600 {
        let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let logit = 2.5 * x[0] - 0.8 * x[1];
        labels.push(if rng.gen_bool(1.0 / (1.0 + (-logit).exp())) {
            1.0
        } else {
            0.0
        });
        values.push(x);
    }
    let table = FeatureTable::from_matrix(columns, values, Target::Presence, labels)?;
    let train = table.slice(0..400);
    let test = table.slice(400..600);
    let model = fit_logistic(&train, 0.1, FitOptions::default())?;

    println!("permutation importance (AUC drop):");
    for s in permutation_importance(&model, &test, 10, 1)? {
        println!("  {:>6} {:+.4}", s.feature, s.importance);
    }
    let shap = shap_linear(&model, &train, &test)?;
    println!("mean |SHAP| on the log-odds:");
    for s in shap.mean_abs() {
        println!("  {:>6} {:.4}", s.feature, s.importance);
    }
    let log_odds = model.predict_log_odds(&test)?;
    println!(
        "row 0: base {:.3} + attributions {:?} = {:.4} (model log-odds {:.4})",
        shap.base_value,
        shap.values[0].iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>(),
        shap.reconstruct(0),
        log_odds[0]
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> spectral_importance::Result<()> {
    run()
}
