//! Pairwise cost matrices.
//!
//! Every learner is a choice of a label cost `C^ℓ`, an unlabel cost `C^u` and
//! a constraint matrix `B`. The objective minimized is
//! `Σ_ij c_ij ‖A x_i − A x_j‖²` with `c_ij = c^ℓ_ij + γ c^u_ij`, which equals
//! `2 trace(A X (D − C) X^T A^T)` for the row-sum degree matrix `D`.
//!
//! Positive costs pull embedded points together, negative costs push them
//! apart. All constructors return exactly symmetric matrices.

mod export;
mod heat;
mod label;
mod neighbors;

pub use export::{read_edge_list, write_dense_csv, write_edge_list};
pub use heat::{heat_kernel_costs, HeatKernelSpec, HeatScaling};
pub use label::{
    between_class_costs, cost_dne, cost_lfda, cost_mfa, cost_mmc, within_class_costs,
    ClassSizeUniverse, Constraint, LabelCosts,
};
pub use neighbors::{neighbor_graphs, NeighborGraph};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostKind {
    /// same-class neighbor graph `C^I`
    Intra,
    /// different-class neighbor graph `C^E`
    Extra,
    Label,
    Unlabel,
    Combined,
    /// within-class weights used inside a constraint matrix
    Constraint,
}

/// Symmetric `n × n` matrix of pairwise costs.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    entries: DMatrix<f64>,
    kind: CostKind,
}

impl CostMatrix {
    /// Wraps a matrix, rejecting anything that is not exactly symmetric.
    pub fn new(entries: DMatrix<f64>, kind: CostKind) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: entries.ncols(),
                context: "cost matrix must be square",
            });
        }
        let n = entries.nrows();
        for i in 0..n {
            for j in 0..i {
                if entries[(i, j)] != entries[(j, i)] {
                    return Err(Error::invalid(
                        "entries",
                        format!("not symmetric at ({i}, {j})"),
                    ));
                }
            }
        }
        Ok(Self { entries, kind })
    }

    /// Builds from a symmetric entry function evaluated on `i <= j`.
    pub fn from_upper(n: usize, kind: CostKind, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let v = f(i, j);
                entries[(i, j)] = v;
                entries[(j, i)] = v;
            }
        }
        Self { entries, kind }
    }

    pub fn zeros(n: usize, kind: CostKind) -> Self {
        Self {
            entries: DMatrix::zeros(n, n),
            kind,
        }
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn kind(&self) -> CostKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: CostKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.nrows() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// Row sums `D_ii = Σ_j c_ij`.
    pub fn degrees(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.entries.row_iter().map(|r| r.sum()))
    }

    /// Graph Laplacian `D − C`.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let mut l = -self.entries.clone();
        for (i, d) in self.degrees().iter().enumerate() {
            l[(i, i)] += d;
        }
        l
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    /// `Σ_ij c_ij ‖z_i − z_j‖²` over ordered pairs for embedded columns `z`.
    pub fn weighted_pair_sum(&self, z: &DMatrix<f64>) -> f64 {
        let n = self.len();
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                let c = self.entries[(i, j)];
                if c != 0.0 {
                    total += c * (z.column(i) - z.column(j)).norm_squared();
                }
            }
        }
        total
    }

    fn check_same_size(&self, other: &CostMatrix) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
                context: "cost matrices must have equal size",
            });
        }
        Ok(())
    }
}

/// Constant cost `−1/(2n)` on every pair. With centered data the unlabel
/// objective it induces equals `−Σ_i ‖A x_i‖²`, i.e. PCA.
pub fn self_cost(n: usize) -> Result<CostMatrix> {
    if n == 0 {
        return Err(Error::invalid("n", "at least one example"));
    }
    let c = -1.0 / (2.0 * n as f64);
    Ok(CostMatrix {
        entries: DMatrix::from_element(n, n, c),
        kind: CostKind::Unlabel,
    })
}

/// Entrywise `alpha`-th power rescaled to the Frobenius norm of the input.
///
/// For non-negative input this keeps symmetry, non-negativity and the rank
/// order of entries, while shrinking small costs relative to large ones.
pub fn hadamard_power(cu: &CostMatrix, alpha: u32) -> Result<CostMatrix> {
    if alpha == 0 {
        return Err(Error::invalid("alpha", "must be a positive integer"));
    }
    if alpha == 1 {
        return Ok(cu.clone());
    }
    let norm = cu.frobenius_norm();
    if norm == 0.0 {
        return Err(Error::Degenerate(
            "Hadamard power of an all-zero cost matrix".into(),
        ));
    }
    let powered = cu.entries.map(|v| v.powi(alpha as i32));
    let powered_norm = powered.norm();
    if powered_norm == 0.0 || !powered_norm.is_finite() {
        return Err(Error::Degenerate(format!(
            "entrywise power {alpha} has Frobenius norm {powered_norm}"
        )));
    }
    let scale = norm / powered_norm;
    Ok(CostMatrix {
        entries: powered * scale,
        kind: cu.kind,
    })
}

/// `C = C^ℓ + γ C^u` and its degree vector.
pub fn combine(cl: &CostMatrix, cu: &CostMatrix, gamma: f64) -> Result<(CostMatrix, DVector<f64>)> {
    cl.check_same_size(cu)?;
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(
            "gamma",
            format!("{gamma} must be finite and >= 0"),
        ));
    }
    let entries = if gamma == 0.0 {
        cl.entries.clone()
    } else {
        &cl.entries + &cu.entries * gamma
    };
    let c = CostMatrix {
        entries,
        kind: CostKind::Combined,
    };
    let d = c.degrees();
    Ok((c, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn rejects_asymmetric() {
        assert!(CostMatrix::new(dmatrix![0.0, 1.0; 2.0, 0.0], CostKind::Label).is_err());
        assert!(CostMatrix::new(dmatrix![0.0, 1.0; 1.0, 0.0], CostKind::Label).is_ok());
    }

    #[test]
    fn self_cost_n2() {
        let c = self_cost(2).unwrap();
        assert!(c.entries().iter().all(|&v| v == -0.25));
    }

    #[test]
    fn self_cost_matches_pca_on_centered_data() {
        let x = dmatrix![1.0, -2.0, 0.5, 0.5; 0.0, 3.0, -1.0, -2.0; 2.0, -1.0, -1.0, 0.0];
        let a = dmatrix![0.3, -1.2, 0.7; 1.0, 0.4, -0.2];
        let z = &a * &x;
        let fu = self_cost(4).unwrap().weighted_pair_sum(&z);
        let fpca: f64 = -z.column_iter().map(|c| c.norm_squared()).sum::<f64>();
        assert!((fu - fpca).abs() <= 1e-10 * fpca.abs());
    }

    #[test]
    fn self_cost_on_uncentered_data_misses_by_mean_term() {
        // expanding the pair sum leaves (1/n)‖A Σ x_i‖² behind
        let x = dmatrix![1.0, 2.0, 4.0; -1.0, 0.0, 5.0];
        let a = dmatrix![0.5, 2.0];
        let z = &a * &x;
        let n = 3.0;
        let fu = self_cost(3).unwrap().weighted_pair_sum(&z);
        let fpca: f64 = -z.column_iter().map(|c| c.norm_squared()).sum::<f64>();
        let sum = z.column_sum();
        assert!((fu - fpca - sum.norm_squared() / n).abs() < 1e-10);
    }

    #[test]
    fn hadamard_alpha_one_is_identity() {
        let c = CostMatrix::new(dmatrix![0.0, 0.3; 0.3, 1.0], CostKind::Unlabel).unwrap();
        assert_eq!(hadamard_power(&c, 1).unwrap(), c);
    }

    #[test]
    fn hadamard_hand_example() {
        let c = CostMatrix::new(dmatrix![0.0, 0.9; 0.9, 0.1], CostKind::Unlabel).unwrap();
        let p = hadamard_power(&c, 2).unwrap();
        let scale = (2.0f64 * 0.81 + 0.01).sqrt() / (2.0f64 * 0.6561 + 0.0001).sqrt();
        let expected = dmatrix![0.0, 0.81; 0.81, 0.01] * scale;
        assert!((p.entries() - expected).amax() < 1e-15);
    }

    #[test]
    fn hadamard_rejects_zero() {
        let c = CostMatrix::zeros(3, CostKind::Unlabel);
        assert!(matches!(hadamard_power(&c, 2), Err(Error::Degenerate(_))));
        let one = CostMatrix::new(dmatrix![1.0], CostKind::Unlabel).unwrap();
        assert!(hadamard_power(&one, 0).is_err());
    }

    #[test]
    fn combine_reductions() {
        let cl = CostMatrix::new(dmatrix![0.0, 1.0; 1.0, 0.0], CostKind::Label).unwrap();
        let cu = CostMatrix::new(dmatrix![0.0, 0.5; 0.5, 0.0], CostKind::Unlabel).unwrap();
        let (c, _) = combine(&cl, &cu, 0.0).unwrap();
        assert_eq!(c.entries(), cl.entries());
        let zero = CostMatrix::zeros(2, CostKind::Label);
        let (c, d) = combine(&zero, &cu, 1.0).unwrap();
        assert_eq!(c.entries(), cu.entries());
        assert_eq!(d.as_slice(), &[0.5, 0.5]);
        assert!(combine(&cl, &CostMatrix::zeros(3, CostKind::Unlabel), 1.0).is_err());
        assert!(combine(&cl, &cu, -1.0).is_err());
    }

    #[test]
    fn combine_degrees_match_row_sums() {
        let cl = CostMatrix::from_upper(5, CostKind::Label, |i, j| ((i * 3 + j) % 4) as f64 - 1.5);
        let cu = CostMatrix::from_upper(5, CostKind::Unlabel, |i, j| 1.0 / (1.0 + (i + j) as f64));
        let (c, d) = combine(&cl, &cu, 0.7).unwrap();
        for i in 0..5 {
            let mut s = 0.0;
            for j in 0..5 {
                s += cl.get(i, j) + 0.7 * cu.get(i, j);
            }
            assert!((d[i] - s).abs() < 1e-14);
            for j in 0..5 {
                assert_eq!(c.get(i, j), c.get(j, i));
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn sym_nonneg(max_n: usize) -> impl Strategy<Value = CostMatrix> {
            (2..max_n).prop_flat_map(|n| {
                proptest::collection::vec(0.0f64..1.0, n * n).prop_map(move |v| {
                    CostMatrix::from_upper(n, CostKind::Unlabel, |i, j| v[i * n + j])
                })
            })
        }

        proptest! {
            #[test]
            fn hadamard_preserves_norm_symmetry_order(c in sym_nonneg(9), alpha in 1u32..9) {
                prop_assume!(c.frobenius_norm() > 1e-3);
                let p = hadamard_power(&c, alpha).unwrap();
                let rel = (p.frobenius_norm() - c.frobenius_norm()).abs() / c.frobenius_norm();
                prop_assert!(rel <= 1e-12);
                let n = c.len();
                for i in 0..n {
                    for j in 0..n {
                        prop_assert_eq!(p.get(i, j), p.get(j, i));
                        prop_assert!(p.get(i, j) >= 0.0);
                        for k in 0..n {
                            if c.get(i, j) < c.get(i, k) {
                                prop_assert!(p.get(i, j) <= p.get(i, k));
                            }
                        }
                    }
                }
            }

            #[test]
            fn pair_sum_equals_twice_scatter_trace(
                n in 2usize..9, d0 in 1usize..5, d in 1usize..3,
                v in proptest::collection::vec(-1.0f64..1.0, 200),
            ) {
                let c = CostMatrix::from_upper(n, CostKind::Combined, |i, j| v[(i * 7 + j * 3) % 200]);
                let x = DMatrix::from_fn(d0, n, |i, j| v[(i * 11 + j * 5 + 50) % 200] * 3.0);
                let a = DMatrix::from_fn(d, d0, |i, j| v[(i * 13 + j + 120) % 200]);
                let lhs = c.weighted_pair_sum(&(&a * &x));
                let rhs = 2.0 * (&a * &x * c.laplacian() * x.transpose() * a.transpose()).trace();
                prop_assert!((lhs - rhs).abs() <= 1e-8 * lhs.abs().max(rhs.abs()).max(1e-12));
            }
        }
    }
}
