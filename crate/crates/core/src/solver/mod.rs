//! Generalized eigenproblem machinery shared by every learner.
//!
//! A learner hands over a Laplacian scatter `L = X (D − C) X^T` and a
//! constraint matrix `B`; the projection rows are the bottom generalized
//! eigenvectors of `(L, B + εI)`.

mod gev;
mod model;
pub(crate) mod serialize;

pub use gev::{solve_gev, solve_gev_with_fallback, GevSolution};
pub use model::EmbeddingModel;
pub use serialize::{read_model, write_model, MODEL_MAGIC, MODEL_VERSION};

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::costs::CostMatrix;
use crate::error::{Error, Result};

/// Relative singular-value cutoff used when no other is given.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// `X (D − C) X^T` for inputs `x` (columns aligned with `c`).
pub fn laplacian_scatter(x: &DMatrix<f64>, c: &CostMatrix) -> Result<DMatrix<f64>> {
    if x.ncols() != c.len() {
        return Err(Error::DimensionMismatch {
            expected: c.len(),
            got: x.ncols(),
            context: "input columns vs cost matrix size",
        });
    }
    let l = x * c.laplacian() * x.transpose();
    Ok(symmetrize(l))
}

pub(crate) fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// `B + εI`.
pub fn regularize(b: &DMatrix<f64>, epsilon: f64) -> DMatrix<f64> {
    let mut out = b.clone();
    if epsilon != 0.0 {
        for i in 0..out.nrows().min(out.ncols()) {
            out[(i, i)] += epsilon;
        }
    }
    out
}

/// Diagonal rescaling `T` applied to the rows of the solved projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WeightingMode {
    /// `T = I`
    #[default]
    Identity,
    /// `T_ii = 1 / ‖a_i‖`
    UnitRows,
    /// `T_ii = √λ_i`
    SqrtLambda,
    /// `T_ii = √λ_i / ‖a_i‖`
    Combined,
}

impl WeightingMode {
    pub fn code(self) -> u64 {
        match self {
            WeightingMode::Identity => 1,
            WeightingMode::UnitRows => 2,
            WeightingMode::SqrtLambda => 3,
            WeightingMode::Combined => 4,
        }
    }

    pub fn from_code(code: u64) -> Option<Self> {
        Some(match code {
            1 => WeightingMode::Identity,
            2 => WeightingMode::UnitRows,
            3 => WeightingMode::SqrtLambda,
            4 => WeightingMode::Combined,
            _ => return None,
        })
    }
}

impl fmt::Display for WeightingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.code())
    }
}

impl FromStr for WeightingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .strip_prefix(['T', 't'])
            .and_then(|n| n.parse().ok())
            .and_then(Self::from_code)
            .ok_or_else(|| Error::invalid("weighting", format!("`{s}` is not one of T1..T4")))
    }
}

/// Rescales row `i` of `a` according to `mode`. Slightly negative eigenvalues
/// from round-off are clamped to zero.
pub fn axis_weighting(
    a: &DMatrix<f64>,
    lambda: &DVector<f64>,
    mode: WeightingMode,
) -> Result<DMatrix<f64>> {
    if lambda.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: lambda.len(),
            context: "one eigenvalue per projection row",
        });
    }
    let mut out = a.clone();
    for (i, mut row) in out.row_iter_mut().enumerate() {
        let norm = a.row(i).norm();
        let root = lambda[i].max(0.0).sqrt();
        let scale = match mode {
            WeightingMode::Identity => 1.0,
            WeightingMode::SqrtLambda => root,
            WeightingMode::UnitRows | WeightingMode::Combined => {
                if norm == 0.0 {
                    return Err(Error::Degenerate(format!(
                        "projection row {i} has zero norm"
                    )));
                }
                if mode == WeightingMode::UnitRows {
                    1.0 / norm
                } else {
                    root / norm
                }
            }
        };
        row *= scale;
    }
    Ok(out)
}

/// Projects `x` (`d0 × n`) onto its left singular vectors with singular value
/// above `rank_tol · σ_max`. Returns the reduced data (`r × n`) and the basis
/// (`r × d0`, orthonormal rows).
pub fn pca_preprocess(x: &DMatrix<f64>, rank_tol: f64) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    if x.ncols() < 2 {
        return Err(Error::invalid("x", "PCA needs at least two columns"));
    }
    let basis = principal_basis(x, rank_tol)?;
    Ok((&basis * x, basis))
}

/// Numerical rank of `x` by relative singular-value cutoff.
pub fn numerical_rank(x: &DMatrix<f64>, rank_tol: f64) -> usize {
    let sv = x.clone().singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rank_tol * max).count()
}

fn principal_basis(x: &DMatrix<f64>, rank_tol: f64) -> Result<DMatrix<f64>> {
    let svd = x.clone().svd(true, false);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let sv = &svd.singular_values;
    let max = sv.max();
    if max == 0.0 {
        return Err(Error::Degenerate("all inputs are zero".into()));
    }
    let mut keep: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > rank_tol * max).collect();
    keep.sort_by(|&i, &j| sv[j].total_cmp(&sv[i]).then(i.cmp(&j)));
    let mut basis = DMatrix::zeros(keep.len(), x.nrows());
    for (r, &k) in keep.iter().enumerate() {
        let mut col = u.column(k).clone_owned();
        fix_sign(&mut col);
        basis.set_row(r, &col.transpose());
    }
    Ok(basis)
}

/// Flips `v` so that its first component that is not round-off is positive.
pub(crate) fn fix_sign(v: &mut DVector<f64>) {
    let cutoff = 1e-12 * v.amax();
    if let Some(first) = v.iter().find(|c| c.abs() > cutoff) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
}
