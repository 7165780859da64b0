use nalgebra::DMatrix;

use super::{CostKind, CostMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeatScaling {
    /// one bandwidth `σ` for every pair
    Global { sigma: f64 },
    /// `σ_i` = distance from `x_i` to its `k`-th nearest neighbor
    Local { k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatKernelSpec {
    pub scaling: HeatScaling,
    /// Lower bound for local scales; `None` uses `1e-12 ×` the data diameter.
    pub distance_floor: Option<f64>,
}

impl HeatKernelSpec {
    pub fn global(sigma: f64) -> Self {
        Self {
            scaling: HeatScaling::Global { sigma },
            distance_floor: None,
        }
    }

    pub fn local(k: usize) -> Self {
        Self {
            scaling: HeatScaling::Local { k },
            distance_floor: None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self.scaling {
            HeatScaling::Global { sigma } if !(sigma > 0.0 && sigma.is_finite()) => {
                Err(Error::invalid("sigma", format!("{sigma} must be positive")))
            }
            HeatScaling::Local { k: 0 } => {
                Err(Error::invalid("k", "local scale rank must be >= 1"))
            }
            _ => match self.distance_floor {
                Some(f) if !(f > 0.0) => Err(Error::invalid("distance_floor", "must be positive")),
                _ => Ok(()),
            },
        }
    }
}

/// `local:K` or `global:σ`.
impl std::str::FromStr for HeatKernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid("heat", format!("`{s}` is not local:K or global:SIGMA"));
        let (kind, value) = s.trim().split_once(':').ok_or_else(bad)?;
        let spec = match kind {
            "local" => Self::local(value.parse().map_err(|_| bad())?),
            "global" => Self::global(value.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl std::fmt::Display for HeatKernelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.scaling {
            HeatScaling::Local { k } => write!(f, "local:{k}"),
            HeatScaling::Global { sigma } => write!(f, "global:{sigma}"),
        }
    }
}

impl Default for HeatKernelSpec {
    fn default() -> Self {
        Self::local(7)
    }
}

/// Squared Euclidean distances between all columns.
pub(crate) fn pairwise_sq_dists(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.ncols();
    let mut d = DMatrix::zeros(n, n);
    for j in 0..n {
        let xj = x.column(j);
        for i in 0..j {
            let v = (x.column(i) - xj).norm_squared();
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    d
}

/// Heat-kernel unlabel costs
///
/// ```text
/// global: c^u_ij = exp(−‖x_i − x_j‖² / σ²)
/// local:  c^u_ij = exp(−‖x_i − x_j‖² / (σ_i σ_j))
/// ```
///
/// The exponent is negative: nearby pairs get costs close to 1, distant
/// pairs costs close to 0. The diagonal is zero.
pub fn heat_kernel_costs(x: &DMatrix<f64>, spec: &HeatKernelSpec) -> Result<CostMatrix> {
    spec.validate()?;
    let n = x.ncols();
    if n < 2 {
        return Err(Error::invalid(
            "n",
            "heat-kernel costs need at least two examples",
        ));
    }
    let sq = pairwise_sq_dists(x);
    let entries = match spec.scaling {
        HeatScaling::Global { sigma } => {
            let s2 = sigma * sigma;
            DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    0.0
                } else {
                    (-sq[(i, j)] / s2).exp()
                }
            })
        }
        HeatScaling::Local { k } => {
            let scales = local_scales(&sq, k, spec.distance_floor);
            DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    0.0
                } else {
                    (-sq[(i, j)] / (scales[i] * scales[j])).exp()
                }
            })
        }
    };
    CostMatrix::new(entries, CostKind::Unlabel)
}

/// Distance to the `k`-th nearest other column (clamped to `n − 1`), floored.
fn local_scales(sq: &DMatrix<f64>, k: usize, floor: Option<f64>) -> Vec<f64> {
    let n = sq.nrows();
    let rank = k.min(n - 1);
    let floor = floor.unwrap_or_else(|| {
        let diameter = sq.max().sqrt();
        (1e-12 * diameter).max(f64::MIN_POSITIVE)
    });
    (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| sq[(i, j)]).collect();
            let (_, kth, _) = row.select_nth_unstable_by(rank - 1, f64::total_cmp);
            kth.sqrt().max(floor)
        })
        .collect()
}
