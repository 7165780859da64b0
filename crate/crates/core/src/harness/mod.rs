//! Experiment driver: configuration, cross-validation, the realization
//! protocol and report formatting.

mod benchmark;
mod config;
mod cv;

pub use benchmark::{run_benchmark, run_benchmark_on, LearnerResult, Report, RunOutcome};
pub use config::{
    DatasetSource, ExperimentConfig, DEFAULT_ALPHA_GRID, DEFAULT_FOLDS, DEFAULT_GAMMA_GRID,
};
pub use cv::{
    cross_validate, embedded_accuracy, embedded_predictions, grid_scores, stratified_folds,
    CvOutcome, GridScore,
};

use std::path::Path;

use crate::costs::{write_edge_list, CostMatrix};
use crate::error::{Error, Result};

/// Writes the pairs of `cu` above `threshold` as a TSV edge list. Returns
/// the number of edges written.
pub fn export_neighbor_graph(cu: &CostMatrix, threshold: f64, path: &Path) -> Result<usize> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    let rows = write_edge_list(cu, threshold, &mut w)?;
    std::io::Write::flush(&mut w).map_err(|e| Error::io(path, e))?;
    Ok(rows)
}
