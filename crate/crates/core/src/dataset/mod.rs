//! Column-major datasets with partially known labels.
//!
//! Examples are stored as the columns of a `d0 × n` matrix. Class ids are
//! zero-based and contiguous (`0..n_classes`); the original label strings are
//! kept in [`Dataset::class_names`] for reporting.

mod csv_io;
mod split;
mod synth;

pub use csv_io::{load_csv, load_csv_with, write_csv, CsvOptions};
pub use split::{split, SplitIndices, SplitSpec};
pub use synth::{
    generate_balance, generate_multimodal_toy, toy_components, ToyKind, BALANCE_CLASSES,
};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A class id in `0..n_classes`.
pub type ClassId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: DMatrix<f64>,
    labels: Vec<Option<ClassId>>,
    n_classes: usize,
    class_names: Vec<String>,
    feature_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset, checking that every present label is below `n_classes`.
    pub fn new(x: DMatrix<f64>, labels: Vec<Option<ClassId>>, n_classes: usize) -> Result<Self> {
        if labels.len() != x.ncols() {
            return Err(Error::DimensionMismatch {
                expected: x.ncols(),
                got: labels.len(),
                context: "one label slot per column",
            });
        }
        if let Some(bad) = labels.iter().flatten().find(|&&y| y >= n_classes) {
            return Err(Error::invalid(
                "labels",
                format!("class id {bad} outside 0..{n_classes}"),
            ));
        }
        let class_names = (1..=n_classes).map(|c| c.to_string()).collect();
        let feature_names = (1..=x.nrows()).map(|i| format!("x{i}")).collect();
        Ok(Self {
            x,
            labels,
            n_classes,
            class_names,
            feature_names,
        })
    }

    /// Convenience constructor for fully labeled data.
    pub fn labeled(x: DMatrix<f64>, labels: Vec<ClassId>, n_classes: usize) -> Result<Self> {
        Self::new(x, labels.into_iter().map(Some).collect(), n_classes)
    }

    pub fn with_class_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n_classes {
            return Err(Error::DimensionMismatch {
                expected: self.n_classes,
                got: names.len(),
                context: "class names",
            });
        }
        self.class_names = names;
        Ok(self)
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: names.len(),
                context: "feature names",
            });
        }
        self.feature_names = names;
        Ok(self)
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn labels(&self) -> &[Option<ClassId>] {
        &self.labels
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Input dimensionality `d0`.
    pub fn dim(&self) -> usize {
        self.x.nrows()
    }

    pub fn len(&self) -> usize {
        self.x.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.x.ncols() == 0
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Number of examples carrying a label.
    pub fn n_labeled(&self) -> usize {
        self.labels.iter().flatten().count()
    }

    /// Per-class counts over labeled examples; sums to [`Dataset::n_labeled`].
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes];
        for &y in self.labels.iter().flatten() {
            counts[y] += 1;
        }
        counts
    }

    pub fn column(&self, i: usize) -> DVector<f64> {
        self.x.column(i).into_owned()
    }

    /// Selects columns in the given order. Labels follow their columns.
    pub fn select(&self, idx: &[usize]) -> Dataset {
        let x = self.x.select_columns(idx);
        let labels = idx.iter().map(|&i| self.labels[i]).collect();
        Dataset {
            x,
            labels,
            n_classes: self.n_classes,
            class_names: self.class_names.clone(),
            feature_names: self.feature_names.clone(),
        }
    }

    /// Copy with the labels of every column outside `keep` removed.
    pub fn mask_labels(&self, keep: &[usize]) -> Dataset {
        let mut labels = vec![None; self.len()];
        for &i in keep {
            labels[i] = self.labels[i];
        }
        Dataset {
            labels,
            ..self.clone()
        }
    }

    /// Same labels, new inputs (e.g. KPCA coordinates of the same examples).
    pub fn with_inputs(&self, x: DMatrix<f64>) -> Result<Dataset> {
        if x.ncols() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: x.ncols(),
                context: "replacement inputs",
            });
        }
        let feature_names = (1..=x.nrows()).map(|i| format!("x{i}")).collect();
        Ok(Dataset {
            x,
            labels: self.labels.clone(),
            n_classes: self.n_classes,
            class_names: self.class_names.clone(),
            feature_names,
        })
    }

    /// Translates the columns to zero mean and returns the removed mean.
    pub fn center(&self) -> (Dataset, DVector<f64>) {
        let (x, mean) = center_columns(&self.x);
        (Dataset { x, ..self.clone() }, mean)
    }
}

/// Column mean and the mean-subtracted matrix.
pub fn center_columns(x: &DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>) {
    let n = x.ncols();
    if n == 0 {
        return (x.clone(), DVector::zeros(x.nrows()));
    }
    let mean = x.column_mean();
    let mut centered = x.clone();
    for mut col in centered.column_iter_mut() {
        col -= &mean;
    }
    (centered, mean)
}
