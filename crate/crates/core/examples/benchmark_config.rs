//! Runs a benchmark config file and prints the summary table and the
//! per-realization parameters chosen by cross-validation.
//!
//! cargo run --release --example benchmark_config -- crates/core/configs/ssl-only.conf

use ssdr::harness::{run_benchmark, ExperimentConfig};
use ssdr::Result;

fn main() -> Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/ssl-only.conf").into());
    let mut cfg = ExperimentConfig::from_file(&path)?;
    cfg.split = cfg.split.with_realizations(5);
    let report = run_benchmark(&cfg)?;
    print!("{}", report.summary_tsv());
    println!();
    print!("{}", report.detail_tsv());
    Ok(())
}
