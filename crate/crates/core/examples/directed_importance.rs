//! Importance in a directed network through the leading singular value, under each
//! choice of node strength.
//!
//! cargo run --example directed_importance

use spectral_importance::{node_importance_directed, Edge, Snapshot, StrengthMode};

pub fn run() -> spectral_importance::Result<()> {
    // A small payment network in which most flows pass through a hub.
    let ids: Vec<String> = ["a", "b", "c", "hub", "d"].iter().map(|s| s.to_string()).collect();
    let edges = vec![
        Edge::new(0, 1, 2.0),
        Edge::new(0, 2, 1.0),
        Edge::new(1, 2, 1.5),
        Edge::new(1, 3, 1.0),
        Edge::new(2, 3, 3.0),
        Edge::new(4, 3, 1.0),
        Edge::new(4, 0, 0.5),
        Edge::new(3, 0, 2.5),
        Edge::new(3, 1, 1.0),
        Edge::new(3, 4, 0.5),
    ];
    let s = Snapshot::new(ids.clone(), edges, true, 0)?;
    for mode in [StrengthMode::Total, StrengthMode::In, StrengthMode::Out] {
        let iv = node_importance_directed(&s, mode)?;
        let cells: Vec<String> = iv.values.iter().map(|(&i, v)| format!("{}={v:.4}", ids[i])).collect();
        println!("{mode:?}: {}", cells.join("  "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> spectral_importance::Result<()> {
    run()
}
