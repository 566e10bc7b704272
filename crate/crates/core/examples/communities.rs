//! Community structure three ways: k-means on positive eigenvectors, greedy modularity
//! maximization, and the modularity of each partition. Benchmark centralities follow.
//!
//! cargo run --example communities

use spectral_importance::cluster::{kmeans_eigvecs, EigvecSelection};
use spectral_importance::generate::gen_barbell;
use spectral_importance::netstats::{
    detect_communities, eigenvector_centrality, modularity, pagerank, PageRankOptions,
};
use spectral_importance::{adjacency, eig_sym};

pub fn run() -> spectral_importance::Result<()> {
    let barbell = gen_barbell(4, 2, 5)?;
    let spec = eig_sym(&adjacency(&barbell))?;

    let spectral = kmeans_eigvecs(&spec, EigvecSelection::PositiveOnly, 3, 42)?;
    println!("k-means on positive eigenvectors: {:?}", spectral.groups());
    println!("  modularity {:.4}", modularity(&barbell, &spectral)?);

    let greedy = detect_communities(&barbell)?;
    println!("greedy modularity: {:?}", greedy.groups());
    println!("  modularity {:.4}", modularity(&barbell, &greedy)?);

    let eig = eigenvector_centrality(&barbell)?;
    let pr = pagerank(&barbell, PageRankOptions::default())?;
    println!("\nnode  eigenvector  pagerank");
    for i in 0..barbell.node_count() {
        println!("{i:>4}  {:>11.4}  {:>8.4}", eig[i], pr[i]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> spectral_importance::Result<()> {
    run()
}
