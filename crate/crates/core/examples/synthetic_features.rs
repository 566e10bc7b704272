//! A synthetic temporal network whose dropout depends on spectral importance, and the
//! history-based feature table built from it.
//!
//! cargo run --example synthetic_features

use spectral_importance::features::{correlation_matrix, prune_correlated, FeatureBuilder, FeatureTable, Target};
use spectral_importance::generate::{gen_synthetic_temporal, SyntheticConfig};

pub fn run() -> spectral_importance::Result<()> {
    let cfg = SyntheticConfig {
        n: 80,
        horizon: 12,
        ..SyntheticConfig::default()
    };
    let tn = gen_synthetic_temporal(&cfg, 4)?;
    let active: Vec<usize> = tn.snapshots().iter().map(|s| s.active_nodes().len()).collect();
    println!("active nodes per snapshot: {active:?}");

    let builder = FeatureBuilder::new(&tn)?;
    let tables = (1..tn.len() - 1)
        .map(|t| builder.table(t, Target::Presence))
        .collect::<spectral_importance::Result<Vec<_>>>()?;
    let pooled = FeatureTable::pool(&tables)?;
    println!("{} rows, positive rate {:.3}", pooled.len(), pooled.positive_rate());

    println!("\nPearson correlations:");
    print!("{:>16}", "");
    for c in &pooled.columns {
        print!("{:>7.6}", c);
    }
    println!();
    for (c, row) in pooled.columns.iter().zip(correlation_matrix(&pooled)) {
        let cells: String = row.iter().map(|v| format!("{v:>7.2}")).collect();
        println!("{c:>16}{cells}");
    }
    let (kept, dropped) = prune_correlated(&pooled, 0.8)?;
    println!("\npruned above |r| = 0.8: {dropped:?}");
    println!("kept: {:?}", kept.columns);
    Ok(())
}

#[allow(dead_code)]
fn main() -> spectral_importance::Result<()> {
    run()
}
