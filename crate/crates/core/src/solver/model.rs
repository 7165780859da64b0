use nalgebra::{DMatrix, DVector};

use super::WeightingMode;
use crate::error::{Error, Result};

/// A fitted linear embedding `z = A P (x − μ)`, where `P` is the optional
/// PCA basis applied before `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    pub(crate) a: DMatrix<f64>,
    pub(crate) eigenvalues: DVector<f64>,
    pub(crate) train_mean: DVector<f64>,
    pub(crate) pre_pca: Option<DMatrix<f64>>,
    pub(crate) weighting: WeightingMode,
    pub(crate) epsilon: f64,
    pub(crate) gamma: f64,
    pub(crate) alpha: u32,
}

impl EmbeddingModel {
    /// Assembles a model, checking that the pieces fit together.
    pub fn new(
        a: DMatrix<f64>,
        eigenvalues: DVector<f64>,
        train_mean: DVector<f64>,
        pre_pca: Option<DMatrix<f64>>,
        weighting: WeightingMode,
    ) -> Result<Self> {
        let inner = match &pre_pca {
            Some(p) => {
                if p.ncols() != train_mean.len() {
                    return Err(Error::DimensionMismatch {
                        expected: train_mean.len(),
                        got: p.ncols(),
                        context: "PCA basis columns vs input dimension",
                    });
                }
                p.nrows()
            }
            None => train_mean.len(),
        };
        if a.ncols() != inner {
            return Err(Error::DimensionMismatch {
                expected: inner,
                got: a.ncols(),
                context: "projection columns",
            });
        }
        if eigenvalues.len() != a.nrows() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                got: eigenvalues.len(),
                context: "one eigenvalue per projection row",
            });
        }
        Ok(Self {
            a,
            eigenvalues,
            train_mean,
            pre_pca,
            weighting,
            epsilon: 0.0,
            gamma: 0.0,
            alpha: 1,
        })
    }

    pub fn with_parameters(mut self, epsilon: f64, gamma: f64, alpha: u32) -> Self {
        self.epsilon = epsilon;
        self.gamma = gamma;
        self.alpha = alpha;
        self
    }

    /// Rows as solved, acting on the (possibly PCA-reduced) centered input.
    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn train_mean(&self) -> &DVector<f64> {
        &self.train_mean
    }

    pub fn pre_pca(&self) -> Option<&DMatrix<f64>> {
        self.pre_pca.as_ref()
    }

    pub fn weighting(&self) -> WeightingMode {
        self.weighting
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn input_dim(&self) -> usize {
        self.train_mean.len()
    }

    pub fn output_dim(&self) -> usize {
        self.a.nrows()
    }

    /// The end-to-end `d × d0` matrix `A P`.
    pub fn projection(&self) -> DMatrix<f64> {
        match &self.pre_pca {
            Some(p) => &self.a * p,
            None => self.a.clone(),
        }
    }

    pub fn embed(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_dim(x.len())?;
        let centered = x - &self.train_mean;
        Ok(match &self.pre_pca {
            Some(p) => &self.a * (p * centered),
            None => &self.a * centered,
        })
    }

    /// Embeds every column of `x`.
    pub fn embed_columns(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.check_dim(x.nrows())?;
        let mut centered = x.clone();
        for mut col in centered.column_iter_mut() {
            col -= &self.train_mean;
        }
        Ok(match &self.pre_pca {
            Some(p) => &self.a * (p * centered),
            None => &self.a * centered,
        })
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                got,
                context: "input dimension vs training data",
            });
        }
        Ok(())
    }
}
