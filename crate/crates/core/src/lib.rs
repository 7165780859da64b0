//! Semi-supervised spectral dimensionality reduction.
//!
//! Learners are assembled from a label cost matrix, an unlabel cost matrix
//! and a constraint; the projection solves a generalized symmetric
//! eigenproblem and new points are classified by nearest neighbor in the
//! embedded space. Kernel variants go through explicit kernel PCA
//! coordinates.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod costs;
pub mod dataset;
pub mod error;
pub mod harness;
pub mod knn;
pub mod kpca;
pub mod learner;
pub mod solver;

pub use dataset::{ClassId, Dataset};
pub use error::{Error, Result};
pub use learner::{fit, fit_pipeline, BaseLearner, LearnerSpec, Pipeline, UnlabelCost};
pub use solver::{EmbeddingModel, WeightingMode};
