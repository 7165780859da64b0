//! Learner definitions and the fitting pipeline.
//!
//! A learner is a label cost (with its constraint), an unlabel cost and the
//! trade-off `γ` between them. Fitting centers the data, reduces it to its
//! numerical rank if needed, builds the costs and solves the generalized
//! eigenproblem.

use std::fmt;
use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector};

use crate::costs::{
    between_class_costs, combine, cost_dne, cost_lfda, cost_mfa, hadamard_power, heat_kernel_costs,
    neighbor_graphs, self_cost, within_class_costs, ClassSizeUniverse, Constraint, CostKind,
    CostMatrix, HeatKernelSpec, LabelCosts,
};
use crate::dataset::{center_columns, Dataset};
use crate::error::{Error, Result};
use crate::kpca::{kpca_fit, read_kpca, write_kpca, KernelSpec, KpcaMap, DEFAULT_EIGEN_TOL};
use crate::solver::serialize::{read_u64, write_u64};
use crate::solver::{
    axis_weighting, laplacian_scatter, numerical_rank, pca_preprocess, read_model,
    solve_gev_with_fallback, write_model, EmbeddingModel, WeightingMode, DEFAULT_RANK_TOL,
};

/// The supervised half of a learner.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum BaseLearner {
    /// no label cost; `B = I`
    #[default]
    None,
    /// `C^ℓ = C^I − C^E`, `B = I`
    Dne,
    /// `C^ℓ = −C^E`, `B = X (D^I − C^I) X^T`
    Mfa,
    /// local between-class cost, `B` from the local within-class cost
    Lfda,
    /// between-class cost, `B` from the within-class cost
    Fda,
    /// `C^ℓ = γ′ C^w + C^b`, `B = I`; minimizes `γ′ tr(A S_w A^T) − tr(A S_B A^T)`
    Mmc { gamma_prime: f64 },
}

impl BaseLearner {
    pub fn name(&self) -> &'static str {
        match self {
            BaseLearner::None => "none",
            BaseLearner::Dne => "DNE",
            BaseLearner::Mfa => "MFA",
            BaseLearner::Lfda => "LFDA",
            BaseLearner::Fda => "FDA",
            BaseLearner::Mmc { .. } => "MMC",
        }
    }

    pub fn uses_neighbors(&self) -> bool {
        matches!(
            self,
            BaseLearner::Dne | BaseLearner::Mfa | BaseLearner::Lfda
        )
    }
}

/// The unsupervised half of a learner.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum UnlabelCost {
    #[default]
    None,
    /// heat-kernel neighborhood costs, sharpened by the Hadamard power `α`
    Heat(HeatKernelSpec),
    /// constant `−1/(2n)`: the PCA objective
    SelfPca,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnerSpec {
    pub name: String,
    pub base: BaseLearner,
    pub unlabel: UnlabelCost,
    pub gamma: f64,
    pub alpha: u32,
    /// neighbor count for the label graphs; `None` means `min(3, min_c n_c)`
    pub k: Option<usize>,
    pub dim: usize,
    pub weighting: WeightingMode,
    pub kernel: Option<KernelSpec>,
    /// constraint regularizer; `None` means `ε = γ`
    pub epsilon: Option<f64>,
    pub universe: ClassSizeUniverse,
}

/// Learner names understood by [`LearnerSpec::preset`].
pub const PRESETS: &[&str] = &[
    "PCA", "LPP", "LPP*", "DNE", "MFA", "LFDA", "FDA", "MMC", "SELF", "SS-DNE", "SS-MFA",
    "SS-LFDA", "SS-FDA", "SS-MMC",
];

impl LearnerSpec {
    pub fn new(base: BaseLearner, unlabel: UnlabelCost, gamma: f64) -> Self {
        Self {
            name: String::new(),
            base,
            unlabel,
            gamma,
            alpha: 1,
            k: None,
            dim: 1,
            weighting: WeightingMode::Identity,
            kernel: None,
            epsilon: None,
            universe: ClassSizeUniverse::Labeled,
        }
    }

    /// A named learner with default parameters (`γ = 0.1` for the
    /// semi-supervised ones, heat costs with local scaling).
    pub fn preset(name: &str) -> Result<Self> {
        let heat = UnlabelCost::Heat(HeatKernelSpec::default());
        let mmc = BaseLearner::Mmc { gamma_prime: 1.0 };
        let (base, unlabel, gamma) = match name {
            "PCA" => (BaseLearner::None, UnlabelCost::SelfPca, 1.0),
            "LPP" | "LPP*" => (BaseLearner::None, heat, 1.0),
            "DNE" => (BaseLearner::Dne, UnlabelCost::None, 0.0),
            "MFA" => (BaseLearner::Mfa, UnlabelCost::None, 0.0),
            "LFDA" => (BaseLearner::Lfda, UnlabelCost::None, 0.0),
            "FDA" => (BaseLearner::Fda, UnlabelCost::None, 0.0),
            "MMC" => (mmc, UnlabelCost::None, 0.0),
            "SELF" => (BaseLearner::Lfda, UnlabelCost::SelfPca, 0.1),
            "SS-DNE" => (BaseLearner::Dne, heat, 0.1),
            "SS-MFA" => (BaseLearner::Mfa, heat, 0.1),
            "SS-LFDA" => (BaseLearner::Lfda, heat, 0.1),
            "SS-FDA" => (BaseLearner::Fda, heat, 0.1),
            "SS-MMC" => (mmc, heat, 0.1),
            _ => {
                return Err(Error::invalid(
                    "learner",
                    format!(
                        "unknown learner `{name}`; expected one of {}",
                        PRESETS.join(", ")
                    ),
                ))
            }
        };
        let mut spec = Self::new(base, unlabel, gamma);
        spec.name = name.to_string();
        Ok(spec)
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_alpha(mut self, alpha: u32) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_kernel(mut self, kernel: Option<KernelSpec>) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn with_heat(mut self, heat: HeatKernelSpec) -> Self {
        if let UnlabelCost::Heat(_) = self.unlabel {
            self.unlabel = UnlabelCost::Heat(heat);
        }
        self
    }

    /// `γ` is worth tuning only when both halves are present.
    pub fn tunes_gamma(&self) -> bool {
        self.base != BaseLearner::None && self.unlabel != UnlabelCost::None
    }

    /// `α` only acts on heat costs.
    pub fn tunes_alpha(&self) -> bool {
        matches!(self.unlabel, UnlabelCost::Heat(_))
    }

    pub fn uses_labels(&self) -> bool {
        self.base != BaseLearner::None
    }

    /// Whether the unlabel cost takes part in the objective.
    pub fn unlabel_active(&self) -> bool {
        self.unlabel != UnlabelCost::None && (self.base == BaseLearner::None || self.gamma > 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.base == BaseLearner::None && self.unlabel == UnlabelCost::None {
            return Err(Error::invalid(
                "unlabel",
                "a learner without label costs needs an unlabel cost",
            ));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::invalid(
                "gamma",
                format!("{} must be finite and >= 0", self.gamma),
            ));
        }
        if self.alpha == 0 {
            return Err(Error::invalid("alpha", "must be a positive integer"));
        }
        if self.dim == 0 {
            return Err(Error::invalid("dim", "must be at least 1"));
        }
        if self.k == Some(0) {
            return Err(Error::invalid("k", "must be at least 1"));
        }
        if let BaseLearner::Mmc { gamma_prime } = self.base {
            if !(gamma_prime >= 0.0 && gamma_prime.is_finite()) {
                return Err(Error::invalid(
                    "gamma_prime",
                    format!("{gamma_prime} must be >= 0"),
                ));
            }
        }
        if let Some(e) = self.epsilon {
            if !(e >= 0.0 && e.is_finite()) {
                return Err(Error::invalid(
                    "epsilon",
                    format!("{e} must be finite and >= 0"),
                ));
            }
        }
        if let Some(k) = &self.kernel {
            k.validate()?;
        }
        Ok(())
    }

    /// Weight on `C^u` in the combined cost. A learner without label costs
    /// uses its unlabel cost alone.
    fn effective_gamma(&self) -> f64 {
        if self.base == BaseLearner::None {
            1.0
        } else if self.unlabel == UnlabelCost::None {
            0.0
        } else {
            self.gamma
        }
    }
}

impl fmt::Display for LearnerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.name.is_empty() {
            write!(f, "{}", self.base.name())
        } else {
            write!(f, "{}", self.name)
        }
    }
}

/// `k = min(3, min_c n_c)`.
pub fn resolve_k(class_counts: &[usize]) -> Result<usize> {
    match class_counts.iter().min() {
        None => Err(Error::NoLabels),
        Some(0) => Err(Error::invalid(
            "class_counts",
            "a class has no labeled examples",
        )),
        Some(&m) => Ok(m.min(3)),
    }
}

/// Training inputs after centering and rank reduction, plus the raw
/// unlabel cost. Everything here depends on the inputs only, so it can be
/// shared by every fit that differs in labels, `γ` or `α`.
#[derive(Debug, Clone)]
pub struct PreparedInputs {
    mean: DVector<f64>,
    basis: Option<DMatrix<f64>>,
    x: DMatrix<f64>,
    heat: Option<(HeatKernelSpec, CostMatrix)>,
}

impl PreparedInputs {
    /// Centers `x` and projects onto its numerical span when it is rank deficient.
    pub fn new(x: &DMatrix<f64>) -> Result<Self> {
        if x.ncols() < 2 {
            return Err(Error::invalid(
                "n",
                "fitting needs at least two training examples",
            ));
        }
        let (xc, mean) = center_columns(x);
        let (x, basis) = if numerical_rank(&xc, DEFAULT_RANK_TOL) < xc.nrows() {
            let (r, b) = pca_preprocess(&xc, DEFAULT_RANK_TOL)?;
            (r, Some(b))
        } else {
            (xc, None)
        };
        Ok(Self {
            mean,
            basis,
            x,
            heat: None,
        })
    }

    /// Also builds the heat-kernel costs `spec` calls for.
    pub fn for_spec(x: &DMatrix<f64>, spec: &LearnerSpec) -> Result<Self> {
        Self::new(x)?.with_heat_for(spec)
    }

    /// Caches the heat costs `spec` uses, if any.
    pub fn with_heat_for(mut self, spec: &LearnerSpec) -> Result<Self> {
        if let UnlabelCost::Heat(h) = spec.unlabel {
            self.ensure_heat(&h)?;
        }
        Ok(self)
    }

    fn ensure_heat(&mut self, h: &HeatKernelSpec) -> Result<()> {
        if !matches!(&self.heat, Some((cached, _)) if cached == h) {
            self.heat = Some((*h, heat_kernel_costs(&self.x, h)?));
        }
        Ok(())
    }

    /// Centered, possibly reduced inputs (`r × n`).
    pub fn inputs(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn len(&self) -> usize {
        self.x.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.x.ncols() == 0
    }

    pub fn reduced_dim(&self) -> usize {
        self.x.nrows()
    }

    /// The unlabel cost for `spec`, with the Hadamard power applied.
    pub fn unlabel_cost(&self, spec: &LearnerSpec) -> Result<Option<CostMatrix>> {
        match spec.unlabel {
            UnlabelCost::None => Ok(None),
            UnlabelCost::SelfPca => Ok(Some(self_cost(self.len())?)),
            UnlabelCost::Heat(h) => {
                let owned;
                let raw = match &self.heat {
                    Some((cached, c)) if *cached == h => c,
                    _ => {
                        owned = heat_kernel_costs(&self.x, &h)?;
                        &owned
                    }
                };
                Ok(Some(hadamard_power(raw, spec.alpha)?))
            }
        }
    }
}

/// Label costs and constraint for `spec.base` on the labels of `d`.
pub fn label_costs(d: &Dataset, spec: &LearnerSpec) -> Result<Option<LabelCosts>> {
    if spec.base == BaseLearner::None {
        return Ok(None);
    }
    if d.n_labeled() == 0 {
        return Err(Error::NoLabels);
    }
    let k = || -> Result<usize> {
        match spec.k {
            Some(k) => Ok(k),
            None => resolve_k(&d.class_counts()),
        }
    };
    let costs = match spec.base {
        BaseLearner::None => unreachable!(),
        BaseLearner::Dne => {
            let (ci, ce) = neighbor_graphs(d, k()?)?;
            cost_dne(&ci, &ce)?
        }
        BaseLearner::Mfa => {
            let (ci, ce) = neighbor_graphs(d, k()?)?;
            cost_mfa(&ci, &ce)?
        }
        BaseLearner::Lfda => {
            let (ci, _) = neighbor_graphs(d, k()?)?;
            cost_lfda(&ci, d, spec.universe)?
        }
        BaseLearner::Fda => LabelCosts {
            label: between_class_costs(d, spec.universe)?,
            constraint: Constraint::Scatter(within_class_costs(d)?.with_kind(CostKind::Constraint)),
        },
        BaseLearner::Mmc { gamma_prime } => {
            let w = within_class_costs(d)?;
            let b = between_class_costs(d, spec.universe)?;
            let m = w.entries() * gamma_prime + b.entries();
            LabelCosts {
                label: CostMatrix::new(m, CostKind::Label)?,
                constraint: Constraint::Identity,
            }
        }
    };
    Ok(Some(costs))
}

/// Fits `spec` to the labels of `d`, reusing `prepared` (built from `d.x()`).
pub fn fit_prepared(
    prepared: &PreparedInputs,
    d: &Dataset,
    spec: &LearnerSpec,
) -> Result<EmbeddingModel> {
    spec.validate()?;
    if d.len() != prepared.len() {
        return Err(Error::DimensionMismatch {
            expected: prepared.len(),
            got: d.len(),
            context: "prepared inputs vs dataset",
        });
    }
    let r = prepared.reduced_dim();
    if spec.dim > r {
        return Err(Error::invalid(
            "dim",
            format!("target dimension {} exceeds the data rank {r}", spec.dim),
        ));
    }
    let reduced = d.with_inputs(prepared.x.clone())?;
    let n = d.len();
    let label = label_costs(&reduced, spec)?;
    let gamma = spec.effective_gamma();
    let unlabel = if gamma > 0.0 {
        prepared.unlabel_cost(spec)?
    } else {
        None
    };

    let zero = CostMatrix::zeros(n, CostKind::Label);
    let cl = label.as_ref().map_or(&zero, |l| &l.label);
    let combined = match &unlabel {
        Some(cu) => combine(cl, cu, gamma)?.0,
        None => cl.clone(),
    };
    let l = laplacian_scatter(&prepared.x, &combined)?;
    let b = match &label {
        Some(lc) => lc.constraint_matrix(&prepared.x)?,
        None => DMatrix::identity(r, r),
    };
    let epsilon = spec
        .epsilon
        .unwrap_or(if spec.uses_labels() { gamma } else { 0.0 });
    let (sol, epsilon) = solve_gev_with_fallback(&l, &b, epsilon, spec.dim)?;
    let a = axis_weighting(&sol.a, &sol.eigenvalues, spec.weighting)?;
    Ok(EmbeddingModel::new(
        a,
        sol.eigenvalues,
        prepared.mean.clone(),
        prepared.basis.clone(),
        spec.weighting,
    )?
    .with_parameters(epsilon, gamma, spec.alpha))
}

/// Fits a linear embedding (ignores `spec.kernel`; see [`fit_pipeline`]).
pub fn fit(d: &Dataset, spec: &LearnerSpec) -> Result<EmbeddingModel> {
    spec.validate()?;
    let prepared = PreparedInputs::for_spec(d.x(), spec)?;
    fit_prepared(&prepared, d, spec)
}

/// Kernel PCA on the inputs, then the linear learner on the kernel coordinates.
pub fn kpca_trick_fit(
    d: &Dataset,
    kernel: &KernelSpec,
    spec: &LearnerSpec,
) -> Result<(KpcaMap, EmbeddingModel)> {
    let map = kpca_fit(d.x(), kernel, DEFAULT_EIGEN_TOL)?;
    let phi = d.with_inputs(map.training_coordinates().clone())?;
    let model = fit(&phi, spec)?;
    Ok((map, model))
}

/// An embedding with its optional kernel map in front.
#[derive(Debug, Clone, PartialEq)]
pub struct Pipeline {
    pub kpca: Option<KpcaMap>,
    pub model: EmbeddingModel,
}

impl Pipeline {
    pub fn input_dim(&self) -> usize {
        match &self.kpca {
            Some(m) => m.input_dim(),
            None => self.model.input_dim(),
        }
    }

    pub fn output_dim(&self) -> usize {
        self.model.output_dim()
    }

    /// Embeds the columns of `x`.
    pub fn embed_columns(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        match &self.kpca {
            Some(m) => self.model.embed_columns(&m.transform_columns(x)?),
            None => self.model.embed_columns(x),
        }
    }
}

/// Fits `spec`, going through kernel PCA when `spec.kernel` is set.
pub fn fit_pipeline(d: &Dataset, spec: &LearnerSpec) -> Result<Pipeline> {
    match &spec.kernel {
        Some(k) => {
            let (map, model) = kpca_trick_fit(d, k, spec)?;
            Ok(Pipeline {
                kpca: Some(map),
                model,
            })
        }
        None => Ok(Pipeline {
            kpca: None,
            model: fit(d, spec)?,
        }),
    }
}

/// A flag word, the kernel map if present, then the embedding model.
pub fn write_pipeline<W: Write>(p: &Pipeline, mut w: W) -> Result<()> {
    write_u64(&mut w, u64::from(p.kpca.is_some()))?;
    if let Some(m) = &p.kpca {
        write_kpca(m, &mut w)?;
    }
    write_model(&p.model, &mut w)
}

pub fn read_pipeline<R: Read>(mut r: R) -> Result<Pipeline> {
    let kpca = match read_u64(&mut r)? {
        0 => None,
        1 => Some(read_kpca(&mut r)?),
        f => return Err(Error::Format(format!("bad kernel flag {f}"))),
    };
    let model = read_model(&mut r)?;
    if let Some(m) = &kpca {
        if m.out_dim() != model.input_dim() {
            return Err(Error::Format(
                "kernel map and model dimensions disagree".into(),
            ));
        }
    }
    Ok(Pipeline { kpca, model })
}
