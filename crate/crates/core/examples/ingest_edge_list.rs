//! Loading a dated transaction list into weekly snapshots and writing it back out.
//!
//! cargo run --example ingest_edge_list

use spectral_importance::ingest::{load_snapshots, write_edge_list, IngestOptions, LoadSummary};

const RECORDS: &str = "\
time,src,dst,value
2024-01-01,alice,bob,10
2024-01-02,bob,alice,-4
2024-01-03,bob,carol,5
2024-01-03,carol,carol,7
2024-01-09,alice,carol,3
2024-01-10,carol,dave,2
2024-01-11,dave,carol,2
2024-01-12,carol,dave,-2
2024-01-16,dave,alice,8
";

pub fn run() -> spectral_importance::Result<()> {
    let report = load_snapshots(
        RECORDS.as_bytes(),
        IngestOptions {
            period: 7,
            directed: false,
        },
    )?;
    println!("{}", serde_json::to_string_pretty(&LoadSummary::from(&report))?);
    let tn = &report.network;
    for s in tn.snapshots() {
        let edges: Vec<String> = s
            .edges()
            .iter()
            .map(|e| format!("{}-{} ({})", tn.universe()[e.src], tn.universe()[e.dst], e.weight))
            .collect();
        println!("snapshot {}: {}", s.timestamp(), edges.join(", "));
    }
    let mut out = Vec::new();
    write_edge_list(tn, &mut out, &["directed=false".to_string()])?;
    print!("\n{}", String::from_utf8_lossy(&out));
    Ok(())
}

#[allow(dead_code)]
fn main() -> spectral_importance::Result<()> {
    run()
}
