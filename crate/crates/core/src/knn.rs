//! Exact nearest-neighbor classification by brute force.

use nalgebra::{DMatrix, DVector};

use crate::costs::CostMatrix;
use crate::dataset::{ClassId, Dataset};
use crate::error::{Error, Result};
use crate::kpca::{kpca_fit, KernelSpec, DEFAULT_EIGEN_TOL};

/// Labeled reference points (columns) for k-NN queries.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnIndex {
    points: DMatrix<f64>,
    labels: Vec<ClassId>,
    k: usize,
}

impl KnnIndex {
    pub fn new(points: DMatrix<f64>, labels: Vec<ClassId>, k: usize) -> Result<Self> {
        if labels.len() != points.ncols() {
            return Err(Error::DimensionMismatch {
                expected: points.ncols(),
                got: labels.len(),
                context: "one label per reference point",
            });
        }
        if points.ncols() == 0 {
            return Err(Error::Empty("k-NN index has no reference points".into()));
        }
        if k == 0 || k > points.ncols() {
            return Err(Error::invalid(
                "k",
                format!("{k} must be in 1..={}", points.ncols()),
            ));
        }
        Ok(Self { points, labels, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Reference indices ordered by distance to `z`, ties by index.
    pub fn ranked(&self, z: &[f64]) -> Vec<usize> {
        let mut order: Vec<(f64, usize)> = self
            .points
            .column_iter()
            .enumerate()
            .map(|(i, p)| (p.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum(), i))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        order.into_iter().map(|(_, i)| i).collect()
    }

    /// Majority vote among the `k` nearest. A tied vote goes to the tied
    /// class whose closest member ranks first.
    pub fn classify(&self, z: &[f64]) -> Result<ClassId> {
        if z.len() != self.points.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.points.nrows(),
                got: z.len(),
                context: "query dimension",
            });
        }
        let ranked = self.ranked(z);
        Ok(vote(ranked.iter().take(self.k).map(|&i| self.labels[i])))
    }

    pub fn classify_columns(&self, z: &DMatrix<f64>) -> Result<Vec<ClassId>> {
        z.column_iter()
            .map(|c| self.classify(c.clone_owned().as_slice()))
            .collect()
    }
}

/// `neighbors` in rank order.
fn vote(neighbors: impl Iterator<Item = ClassId>) -> ClassId {
    // (class, votes, first rank)
    let mut tally: Vec<(ClassId, usize, usize)> = Vec::new();
    for (rank, c) in neighbors.enumerate() {
        match tally.iter_mut().find(|t| t.0 == c) {
            Some(t) => t.1 += 1,
            None => tally.push((c, 1, rank)),
        }
    }
    tally
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2)))
        .map(|t| t.0)
        .expect("at least one neighbor")
}

pub fn knn_classify(index: &KnnIndex, z: &DVector<f64>) -> Result<ClassId> {
    index.classify(z.as_slice())
}

/// Fraction of positions where `predicted` equals `truth`.
pub fn accuracy(predicted: &[ClassId], truth: &[ClassId]) -> f64 {
    assert_eq!(predicted.len(), truth.len(), "prediction / truth length");
    if truth.is_empty() {
        return 0.0;
    }
    let hits = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
    hits as f64 / truth.len() as f64
}

/// Leave-one-out 1-NN accuracy of fully labeled columns.
pub fn loo_one_nn_accuracy(x: &DMatrix<f64>, labels: &[ClassId]) -> Result<f64> {
    let n = x.ncols();
    if n < 2 {
        return Err(Error::invalid(
            "n",
            "leave-one-out needs at least two examples",
        ));
    }
    if labels.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: labels.len(),
            context: "one label per column",
        });
    }
    let mut hits = 0;
    for i in 0..n {
        let mut best = (f64::INFINITY, usize::MAX);
        for j in 0..n {
            if j == i {
                continue;
            }
            let dist = (x.column(i) - x.column(j)).norm_squared();
            if dist < best.0 {
                best = (dist, j);
            }
        }
        if labels[best.1] == labels[i] {
            hits += 1;
        }
    }
    Ok(hits as f64 / n as f64)
}

/// Leave-one-out 1-NN accuracy with every label revealed, on the raw inputs
/// or, given a kernel, on the kernel PCA coordinates.
pub fn good_neighbors_score(d: &Dataset, kernel: Option<&KernelSpec>) -> Result<f64> {
    let labels = full_labels(d)?;
    match kernel {
        None => loo_one_nn_accuracy(d.x(), &labels),
        Some(k) => {
            let map = kpca_fit(d.x(), k, DEFAULT_EIGEN_TOL)?;
            loo_one_nn_accuracy(map.training_coordinates(), &labels)
        }
    }
}

pub(crate) fn full_labels(d: &Dataset) -> Result<Vec<ClassId>> {
    d.labels()
        .iter()
        .enumerate()
        .map(|(i, y)| {
            y.ok_or_else(|| Error::invalid("labels", format!("example {i} is unlabeled")))
        })
        .collect()
}

/// Among unordered pairs with `c_ij > threshold`, the fraction whose labels agree.
pub fn good_nearby_ratio(cu: &CostMatrix, labels: &[ClassId], threshold: f64) -> Result<f64> {
    if labels.len() != cu.len() {
        return Err(Error::DimensionMismatch {
            expected: cu.len(),
            got: labels.len(),
            context: "one label per cost row",
        });
    }
    if !(threshold >= 0.0) {
        return Err(Error::invalid(
            "threshold",
            format!("{threshold} must be >= 0"),
        ));
    }
    let (mut near, mut good) = (0usize, 0usize);
    for i in 0..cu.len() {
        for j in i + 1..cu.len() {
            if cu.get(i, j) > threshold {
                near += 1;
                if labels[i] == labels[j] {
                    good += 1;
                }
            }
        }
    }
    if near == 0 {
        return Err(Error::EmptyPairSet { threshold });
    }
    Ok(good as f64 / near as f64)
}

/// The `(count + 1)`-th largest off-diagonal entry (0 when there are not
/// that many pairs). Without ties exactly `count` pairs lie strictly above it.
pub fn threshold_for_top_pairs(cu: &CostMatrix, count: usize) -> f64 {
    let mut values: Vec<f64> = (0..cu.len())
        .flat_map(|i| (i + 1..cu.len()).map(move |j| (i, j)))
        .map(|(i, j)| cu.get(i, j))
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values.get(count).copied().unwrap_or(0.0).max(0.0)
}
