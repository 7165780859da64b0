use nalgebra::DMatrix;

use super::{CostKind, CostMatrix, NeighborGraph};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::solver::laplacian_scatter;

/// Which example count is used as `n` in the `1/n` terms of the LFDA and
/// scatter-matrix costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClassSizeUniverse {
    /// `n = ℓ`, the number of labeled examples.
    #[default]
    Labeled,
    /// `n = ℓ + u`, every training column.
    All,
}

impl ClassSizeUniverse {
    fn size(self, d: &Dataset) -> usize {
        match self {
            ClassSizeUniverse::Labeled => d.n_labeled(),
            ClassSizeUniverse::All => d.len(),
        }
    }
}

/// How the constraint matrix `B` of `A B A^T = I` is formed.
#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    Identity,
    /// `B = X (D' − C') X^T` for the stored cost `C'`.
    Scatter(CostMatrix),
}

/// A label cost `C^ℓ` together with the constraint it is paired with.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelCosts {
    pub label: CostMatrix,
    pub constraint: Constraint,
}

impl LabelCosts {
    /// Materializes `B` for inputs `x` (columns aligned with the costs).
    pub fn constraint_matrix(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        match &self.constraint {
            Constraint::Identity => Ok(DMatrix::identity(x.nrows(), x.nrows())),
            Constraint::Scatter(c) => laplacian_scatter(x, c),
        }
    }
}

fn same_size(a: &NeighborGraph, b: &NeighborGraph) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
            context: "neighbor graphs must cover the same columns",
        });
    }
    Ok(())
}

/// DNE: `C^ℓ = C^I − C^E`, `B = I`.
pub fn cost_dne(ci: &NeighborGraph, ce: &NeighborGraph) -> Result<LabelCosts> {
    same_size(ci, ce)?;
    let label = &ci.to_cost_matrix().into_entries() - &ce.to_cost_matrix().into_entries();
    Ok(LabelCosts {
        label: CostMatrix::new(label, CostKind::Label)?,
        constraint: Constraint::Identity,
    })
}

/// MFA: `C^ℓ = −C^E`, `B = X (D^I − C^I) X^T`.
pub fn cost_mfa(ci: &NeighborGraph, ce: &NeighborGraph) -> Result<LabelCosts> {
    same_size(ci, ce)?;
    let label = -ce.to_cost_matrix().into_entries();
    Ok(LabelCosts {
        label: CostMatrix::new(label, CostKind::Label)?,
        constraint: Constraint::Scatter(ci.to_cost_matrix().with_kind(CostKind::Constraint)),
    })
}

fn labeled_counts(d: &Dataset, universe: ClassSizeUniverse) -> Result<(Vec<f64>, f64)> {
    if d.n_labeled() == 0 {
        return Err(Error::NoLabels);
    }
    let counts = d.class_counts().into_iter().map(|c| c as f64).collect();
    Ok((counts, universe.size(d) as f64))
}

/// LFDA: `C^ℓ = C^bet`, `B = X (D^wit − C^wit) X^T` with
///
/// ```text
/// c^bet_ij = c^I_ij (1/n_k − 1/n)   if y_i = y_j = k
///          = −1/n                    if both labeled, y_i ≠ y_j
/// c^wit_ij = c^I_ij / n_k            if y_i = y_j = k
/// ```
///
/// Pairs involving an unlabeled column cost nothing.
pub fn cost_lfda(
    ci: &NeighborGraph,
    d: &Dataset,
    universe: ClassSizeUniverse,
) -> Result<LabelCosts> {
    if ci.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: d.len(),
            got: ci.len(),
            context: "neighbor graph vs dataset",
        });
    }
    let (counts, n) = labeled_counts(d, universe)?;
    let y = d.labels();
    let bet = CostMatrix::from_upper(d.len(), CostKind::Label, |i, j| match (y[i], y[j]) {
        (Some(a), Some(b)) if a == b => {
            if ci.contains(i, j) {
                1.0 / counts[a] - 1.0 / n
            } else {
                0.0
            }
        }
        (Some(_), Some(_)) => -1.0 / n,
        _ => 0.0,
    });
    let wit = CostMatrix::from_upper(d.len(), CostKind::Constraint, |i, j| match (y[i], y[j]) {
        (Some(a), Some(b)) if a == b && ci.contains(i, j) => 1.0 / counts[a],
        _ => 0.0,
    });
    Ok(LabelCosts {
        label: bet,
        constraint: Constraint::Scatter(wit),
    })
}

/// Within-class scatter weights `c^w_ij = 1/n_k` for `y_i = y_j = k`.
///
/// Over unordered pairs, `Σ_{i<j} c^w_ij ‖A x_i − A x_j‖² = trace(A S_w A^T)`.
pub fn within_class_costs(d: &Dataset) -> Result<CostMatrix> {
    let (counts, _) = labeled_counts(d, ClassSizeUniverse::Labeled)?;
    let y = d.labels();
    Ok(CostMatrix::from_upper(
        d.len(),
        CostKind::Label,
        |i, j| match (y[i], y[j]) {
            (Some(a), Some(b)) if a == b => 1.0 / counts[a],
            _ => 0.0,
        },
    ))
}

/// Between-class weights `c^b_ij = 1/n_k − 1/n` for `y_i = y_j = k` and
/// `−1/n` for labeled pairs of different classes.
///
/// With `n = ℓ` these satisfy `Σ_{i<j} c^b_ij ‖A x_i − A x_j‖² =
/// −trace(A S_B A^T)` for the class-size weighted between-class scatter
/// `S_B = Σ_k n_k (μ_k − μ)(μ_k − μ)^T`.
pub fn between_class_costs(d: &Dataset, universe: ClassSizeUniverse) -> Result<CostMatrix> {
    let (counts, n) = labeled_counts(d, universe)?;
    let y = d.labels();
    Ok(CostMatrix::from_upper(
        d.len(),
        CostKind::Label,
        |i, j| match (y[i], y[j]) {
            (Some(a), Some(b)) if a == b => 1.0 / counts[a] - 1.0 / n,
            (Some(_), Some(_)) => -1.0 / n,
            _ => 0.0,
        },
    ))
}

/// Maximum-margin-criterion label cost `c^ℓ = γ′ c^w − c^b`, exactly as the
/// combination is usually written.
///
/// Note the sign: since `Σ c^b d_ij` is the *negative* between-class scatter,
/// this combination penalizes class separation. The `Mmc` learner therefore
/// uses `γ′ c^w + c^b` (see [`crate::learner::BaseLearner::Mmc`]).
pub fn cost_mmc(d: &Dataset, gamma_prime: f64, universe: ClassSizeUniverse) -> Result<CostMatrix> {
    check_mmc_args(d, gamma_prime)?;
    let w = within_class_costs(d)?;
    let b = between_class_costs(d, universe)?;
    let m = w.entries() * gamma_prime - b.entries();
    CostMatrix::new(m, CostKind::Label)
}

pub(crate) fn check_mmc_args(d: &Dataset, gamma_prime: f64) -> Result<()> {
    if !(gamma_prime >= 0.0 && gamma_prime.is_finite()) {
        return Err(Error::invalid(
            "gamma_prime",
            format!("{gamma_prime} must be >= 0"),
        ));
    }
    if let Some(k) = d.class_counts().iter().position(|&c| c == 0) {
        return Err(Error::invalid(
            "class_counts",
            format!("class {} has no labeled examples", d.class_names()[k]),
        ));
    }
    Ok(())
}
