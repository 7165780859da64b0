use std::collections::BTreeSet;

use nalgebra::DMatrix;

use super::{CostKind, CostMatrix};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Sparse symmetric 0/1 graph over all `n` columns of a dataset, stored as
/// undirected edges `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborGraph {
    n: usize,
    kind: CostKind,
    edges: BTreeSet<(usize, usize)>,
}

impl NeighborGraph {
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn to_cost_matrix(&self) -> CostMatrix {
        let mut m = DMatrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            m[(i, j)] = 1.0;
            m[(j, i)] = 1.0;
        }
        CostMatrix::new(m, self.kind).expect("edge set is symmetric")
    }
}

/// Same-class (`C^I`) and different-class (`C^E`) k-nearest-neighbor graphs
/// over the labeled columns, by Euclidean distance in input space.
///
/// `c_ij = 1` when either endpoint is among the other's `k` nearest labeled
/// neighbors of the relevant kind. Unlabeled columns have no edges. Distance
/// ties go to the smaller index; a class with fewer than `k` peers links to
/// all of them.
pub fn neighbor_graphs(d: &Dataset, k: usize) -> Result<(NeighborGraph, NeighborGraph)> {
    if k == 0 {
        return Err(Error::invalid("k", "must be at least 1"));
    }
    let n = d.len();
    let labeled: Vec<usize> = (0..n).filter(|&i| d.labels()[i].is_some()).collect();
    let mut intra = BTreeSet::new();
    let mut extra = BTreeSet::new();
    let x = d.x();
    for &i in &labeled {
        let yi = d.labels()[i];
        let mut same = Vec::new();
        let mut diff = Vec::new();
        for &j in &labeled {
            if j == i {
                continue;
            }
            let dist = (x.column(i) - x.column(j)).norm_squared();
            if d.labels()[j] == yi {
                same.push((dist, j));
            } else {
                diff.push((dist, j));
            }
        }
        for (set, mut cands) in [(&mut intra, same), (&mut extra, diff)] {
            cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for &(_, j) in cands.iter().take(k) {
                set.insert((i.min(j), i.max(j)));
            }
        }
    }
    Ok((
        NeighborGraph {
            n,
            kind: CostKind::Intra,
            edges: intra,
        },
        NeighborGraph {
            n,
            kind: CostKind::Extra,
            edges: extra,
        },
    ))
}
