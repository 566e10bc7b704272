//! Exact and normal-approximation binomial intervals for precision and recall, and a
//! bootstrap interval for AUC.
//!
//! cargo run --example confidence_intervals

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_importance::model::{auc, binom_ci, binom_ci_normal, bootstrap_auc_ci_scores, Metrics};

pub fn run() -> spectral_importance::Result<()> {
    println!("   k/n    exact 95%          normal 95%");
    for (k, n) in [(0, 10), (3, 10), (10, 10), (45, 150), (140, 150)] {
        let (lo, hi) = binom_ci(k, n, 0.05);
        let normal = binom_ci_normal(k, n, 0.05).map_or("n < 100".to_string(), |(a, b)| format!("[{a:.3}, {b:.3}]"));
        println!("{k:>3}/{n:<3}  [{lo:.3}, {hi:.3}]  {normal}");
    }

    // Noisy scores that carry some signal about the labels.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let labels: Vec<f64> = (0..300).map(|_| if rng.gen_bool(0.3) { 1.0 } else { 0.0 }).collect();
    let scores: Vec<f64> = labels.iter().map(|y| 0.8 * y + rng.gen_range(0.0..1.0)).collect();
    let m = Metrics::from_scores(&scores, &labels, 0.9)?;
    println!("\nthreshold 0.9: {:?}", m.counts);
    println!("precision {:?}, exact CI {:?}", m.precision, m.ci_precision);
    println!("recall    {:?}, exact CI {:?}", m.recall, m.ci_recall);
    let ci = bootstrap_auc_ci_scores(&scores, &labels, 1000, 7)?;
    println!(
        "AUC {:.3}, bootstrap 95% CI [{:.3}, {:.3}]",
        auc(&scores, &labels)?,
        ci.lo,
        ci.hi
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> spectral_importance::Result<()> {
    run()
}
