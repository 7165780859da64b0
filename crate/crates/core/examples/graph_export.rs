//! Exports the heat-kernel graph of a toy as an edge list, reads it back and
//! checks that the thresholded matrix survives the round trip.
//!
//! cargo run --example graph_export -- [edges.tsv]

use std::io::BufReader;
use std::path::PathBuf;

use ssdr::costs::{heat_kernel_costs, read_edge_list, HeatKernelSpec};
use ssdr::dataset::{center_columns, generate_multimodal_toy, ToyKind};
use ssdr::harness::export_neighbor_graph;
use ssdr::{Error, Result};

fn main() -> Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("ssdr-edges.tsv"));
    let d = generate_multimodal_toy(ToyKind::TwoCluster, 25, 1.0, 0)?;
    let cu = heat_kernel_costs(&center_columns(d.x()).0, &HeatKernelSpec::local(7))?;

    let threshold = 0.5;
    let edges = export_neighbor_graph(&cu, threshold, &path)?;
    println!(
        "{edges} edges above {threshold} written to {}",
        path.display()
    );

    let file = std::fs::File::open(&path).map_err(|e| Error::io(&path, e))?;
    let back = read_edge_list(BufReader::new(file), d.len())?;
    let mut mismatches = 0;
    for i in 0..d.len() {
        for j in 0..d.len() {
            let want = if i != j && cu.get(i, j) > threshold {
                cu.get(i, j)
            } else {
                0.0
            };
            mismatches += usize::from(back.get(i, j) != want);
        }
    }
    println!("round-trip mismatches: {mismatches}");
    Ok(())
}
