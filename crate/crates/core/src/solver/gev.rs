use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use super::{fix_sign, regularize, symmetrize};
use crate::error::{Error, Result};

/// Bottom generalized eigenpairs of `(L, B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GevSolution {
    /// `d × d0`, one eigenvector per row, normalized so `A B A^T = I`.
    pub a: DMatrix<f64>,
    /// ascending
    pub eigenvalues: DVector<f64>,
}

/// Solves `L a = λ B a` for the `d` smallest `λ`.
///
/// `B` is factored as `G G^T`; the standard problem `G^{-1} L G^{-T} v = λ v`
/// is solved with a symmetric eigensolver and mapped back by `a = G^{-T} v`.
/// Each row is signed so its first significant component is positive.
pub fn solve_gev(l: &DMatrix<f64>, b: &DMatrix<f64>, d: usize) -> Result<GevSolution> {
    let d0 = l.nrows();
    if !l.is_square() || b.shape() != l.shape() {
        return Err(Error::DimensionMismatch {
            expected: d0,
            got: b.nrows(),
            context: "L and B must be square of equal size",
        });
    }
    if d == 0 || d > d0 {
        return Err(Error::invalid(
            "d",
            format!("target dimension {d} must be in 1..={d0}"),
        ));
    }
    let chol = Cholesky::new(symmetrize(b.clone())).ok_or(Error::NotPositiveDefinite)?;
    let g = chol.l();
    // M = G^{-1} L G^{-T}; L is symmetric so (G^{-1} L)^T = L G^{-T}.
    let left = g
        .solve_lower_triangular(l)
        .ok_or(Error::NotPositiveDefinite)?;
    let m = g
        .solve_lower_triangular(&left.transpose())
        .ok_or(Error::NotPositiveDefinite)?;
    let eig = SymmetricEigen::new(symmetrize(m));

    let mut order: Vec<usize> = (0..d0).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .total_cmp(&eig.eigenvalues[j])
            .then(i.cmp(&j))
    });

    let gt = g.transpose();
    let mut a = DMatrix::zeros(d, d0);
    let mut eigenvalues = DVector::zeros(d);
    for (row, &k) in order.iter().take(d).enumerate() {
        let v = eig.eigenvectors.column(k).clone_owned();
        let mut ak = gt
            .solve_upper_triangular(&v)
            .ok_or(Error::NotPositiveDefinite)?;
        fix_sign(&mut ak);
        a.set_row(row, &ak.transpose());
        eigenvalues[row] = eig.eigenvalues[k];
    }
    Ok(GevSolution { a, eigenvalues })
}

/// [`solve_gev`] on `B + εI`. With `ε = 0` and a singular `B`, retries once
/// with `ε = 1e-8 · trace(B) / d0`. Returns the solution and the `ε` used.
pub fn solve_gev_with_fallback(
    l: &DMatrix<f64>,
    b: &DMatrix<f64>,
    epsilon: f64,
    d: usize,
) -> Result<(GevSolution, f64)> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::invalid(
            "epsilon",
            format!("{epsilon} must be finite and >= 0"),
        ));
    }
    match solve_gev(l, &regularize(b, epsilon), d) {
        Err(Error::NotPositiveDefinite) if epsilon == 0.0 => {
            let d0 = b.nrows().max(1) as f64;
            let fallback = 1e-8 * b.trace() / d0;
            if !(fallback > 0.0) {
                return Err(Error::NotPositiveDefinite);
            }
            log::warn!("constraint matrix is singular; regularizing with epsilon = {fallback:e}");
            Ok((solve_gev(l, &regularize(b, fallback), d)?, fallback))
        }
        other => other.map(|s| (s, epsilon)),
    }
}
