//! Least-squares regression of relative strength change against a shuffled-target null.
//!
//! cargo run --release --example change_regression

use spectral_importance::features::Target;
use spectral_importance::generate::{gen_synthetic_temporal, SyntheticConfig};
use spectral_importance::pipeline::{run_prediction, PredictConfig};

pub fn run() -> spectral_importance::Result<()> {
    let tn = gen_synthetic_temporal(&SyntheticConfig::default(), 1)?;
    let cfg = PredictConfig {
        target: Target::RelChange,
        null_trials: 50,
        permutation_repeats: 3,
        ..PredictConfig::default()
    };
    let report = run_prediction(&tn, &cfg)?;
    let reg = report.regression.as_ref().expect("rel_change is a regression target");
    println!(
        "rows {}, R² train {:.4}, R² test {:.4}",
        report.rows, reg.r2_train, reg.r2_test
    );
    let null = &reg.null_shuffled.summary;
    if let (Some(mean), Some((lo, hi))) = (null.mean, null.ci90) {
        println!("shuffled-target R²: mean {mean:.4}, 90% interval [{lo:.4}, {hi:.4}]");
    }
    for c in &reg.coefficients {
        println!("{:>16} {:+.4}  p = {:.1e}", c.feature, c.coef, c.pvalue);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> spectral_importance::Result<()> {
    run()
}
