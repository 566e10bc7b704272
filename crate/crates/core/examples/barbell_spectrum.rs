//! Eigendecomposition of the 4-2-5 barbell: the three positive eigenvectors and the
//! eigencomponent each node loads on most.
//!
//! cargo run --example barbell_spectrum

use spectral_importance::generate::gen_barbell;
use spectral_importance::{adjacency, eig_sym, select_eigencomponent, ComponentSet};

pub fn run() -> spectral_importance::Result<()> {
    let barbell = gen_barbell(4, 2, 5)?;
    let spec = eig_sym(&adjacency(&barbell))?;
    let positive = spec.positive_count();
    let shown: Vec<String> = spec.eigenvalues.iter().map(|l| format!("{l:.3}")).collect();
    println!("eigenvalues: {}", shown.join(" "));
    println!("{positive} positive eigenvalues\n");
    println!("node {:>8} {:>8} {:>8}  selected rank", "x1", "x2", "x3");
    for i in 0..spec.n {
        let row: Vec<String> = (0..positive)
            .map(|k| format!("{:>8.3}", spec.component(k, i)))
            .collect();
        let rank = select_eigencomponent(&spec, i, ComponentSet::Positive)?;
        println!("{i:>4} {}  {rank}", row.join(" "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> spectral_importance::Result<()> {
    run()
}
