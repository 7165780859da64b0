//! Kernel PCA coordinates, so that any linear learner can run in a kernel's
//! feature space unchanged.
//!
//! The Gram matrix is double-centered and eigendecomposed; training point `i`
//! gets coordinates `ϕ_i[k] = √λ_k V_ik` over the components kept, and a new
//! point is mapped through its centered kernel vector.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::solver::serialize::{
    expect_magic, read_f64, read_matrix, read_u64, read_usize, read_vector, write_f64, write_f64s,
    write_magic, write_matrix, write_u64,
};
use crate::solver::{fix_sign, symmetrize};

/// Components with eigenvalue at or below `tol · λ_max` are dropped.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-10;

pub const KPCA_MAGIC: &[u8; 8] = b"SSDRKPC\0";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `⟨x, x′⟩`
    Linear,
    /// `⟨x, x′⟩^degree`, no additive constant
    Polynomial { degree: u32 },
    /// `exp(−‖x − x′‖² / (2σ²))`
    Gaussian { sigma: f64 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Polynomial { degree } if degree >= 1 => Ok(()),
            KernelSpec::Polynomial { .. } => Err(Error::invalid("degree", "must be >= 1")),
            KernelSpec::Gaussian { sigma } if sigma > 0.0 && sigma.is_finite() => Ok(()),
            KernelSpec::Gaussian { sigma } => {
                Err(Error::invalid("sigma", format!("{sigma} must be positive")))
            }
        }
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        match *self {
            KernelSpec::Linear => dot(x, y),
            KernelSpec::Polynomial { degree } => dot(x, y).powi(degree as i32),
            KernelSpec::Gaussian { sigma } => {
                let sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                (-sq / (2.0 * sigma * sigma)).exp()
            }
        }
    }

    fn code(&self) -> (u64, f64) {
        match *self {
            KernelSpec::Linear => (0, 0.0),
            KernelSpec::Polynomial { degree } => (1, degree as f64),
            KernelSpec::Gaussian { sigma } => (2, sigma),
        }
    }

    fn from_code(kind: u64, param: f64) -> Result<Self> {
        let k = match kind {
            0 => KernelSpec::Linear,
            1 if param.fract() == 0.0 && param >= 1.0 && param <= u32::MAX as f64 => {
                KernelSpec::Polynomial {
                    degree: param as u32,
                }
            }
            2 => KernelSpec::Gaussian { sigma: param },
            _ => return Err(Error::Format(format!("unknown kernel ({kind}, {param})"))),
        };
        k.validate().map_err(|e| Error::Format(e.to_string()))?;
        Ok(k)
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Linear => write!(f, "linear"),
            KernelSpec::Polynomial { degree } => write!(f, "poly{degree}"),
            KernelSpec::Gaussian { sigma } => write!(f, "gaussian:{sigma}"),
        }
    }
}

/// Accepts `linear`, `polyN` / `poly:N` and `gaussian:σ`.
impl FromStr for KernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid("kernel", format!("cannot parse `{s}`"));
        let k = if s == "linear" {
            KernelSpec::Linear
        } else if let Some(rest) = s.strip_prefix("poly") {
            let degree = rest.trim_start_matches(':').parse().map_err(|_| bad())?;
            KernelSpec::Polynomial { degree }
        } else if let Some(rest) = s.strip_prefix("gaussian:") {
            KernelSpec::Gaussian {
                sigma: rest.parse().map_err(|_| bad())?,
            }
        } else {
            return Err(bad());
        };
        k.validate()?;
        Ok(k)
    }
}

/// `K_ij = k(x_i, x_j)` over the columns of `x`.
pub fn gram(x: &DMatrix<f64>, kernel: &KernelSpec) -> DMatrix<f64> {
    let n = x.ncols();
    let cols: Vec<Vec<f64>> = x
        .column_iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    let mut k = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..=j {
            let v = kernel.eval(&cols[i], &cols[j]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    k
}

/// Column means and grand mean of a Gram matrix.
fn centering_stats(k: &DMatrix<f64>) -> (DVector<f64>, f64) {
    let n = k.ncols() as f64;
    let means = DVector::from_iterator(k.ncols(), k.column_iter().map(|c| c.sum() / n));
    let grand = means.sum() / n;
    (means, grand)
}

/// `H K H` with `H = I − 11^T / n`.
pub fn center_gram(k: &DMatrix<f64>) -> DMatrix<f64> {
    let (m, g) = centering_stats(k);
    let mut c = k.clone();
    for j in 0..c.ncols() {
        for i in 0..c.nrows() {
            c[(i, j)] += g - m[i] - m[j];
        }
    }
    symmetrize(c)
}

/// A fitted kernel PCA map. Keeps the training inputs for test-time kernel
/// evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct KpcaMap {
    kernel: KernelSpec,
    train_inputs: DMatrix<f64>,
    col_means: DVector<f64>,
    grand_mean: f64,
    eigenvalues: DVector<f64>,
    /// `n × out_dim`, unit columns
    eigenvectors: DMatrix<f64>,
    /// `out_dim × n`
    coords: DMatrix<f64>,
}

pub fn kpca_fit(x: &DMatrix<f64>, kernel: &KernelSpec, tol: f64) -> Result<KpcaMap> {
    kernel.validate()?;
    let n = x.ncols();
    if n < 2 {
        return Err(Error::invalid(
            "n",
            "kernel PCA needs at least two examples",
        ));
    }
    let k = gram(x, kernel);
    let (col_means, grand_mean) = centering_stats(&k);
    let eig = SymmetricEigen::new(center_gram(&k));
    let lmax = eig.eigenvalues.max();
    if !(lmax > 0.0) {
        return Err(Error::Degenerate(
            "centered Gram matrix has no positive eigenvalue".into(),
        ));
    }
    let mut keep: Vec<usize> = (0..n)
        .filter(|&i| eig.eigenvalues[i] > tol * lmax)
        .collect();
    keep.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .total_cmp(&eig.eigenvalues[i])
            .then(i.cmp(&j))
    });

    let out_dim = keep.len();
    let mut eigenvalues = DVector::zeros(out_dim);
    let mut eigenvectors = DMatrix::zeros(n, out_dim);
    for (c, &i) in keep.iter().enumerate() {
        let mut v = eig.eigenvectors.column(i).clone_owned();
        fix_sign(&mut v);
        eigenvalues[c] = eig.eigenvalues[i];
        eigenvectors.set_column(c, &v);
    }
    let mut coords = eigenvectors.transpose();
    for (c, mut row) in coords.row_iter_mut().enumerate() {
        row *= eigenvalues[c].sqrt();
    }
    Ok(KpcaMap {
        kernel: *kernel,
        train_inputs: x.clone(),
        col_means,
        grand_mean,
        eigenvalues,
        eigenvectors,
        coords,
    })
}

impl KpcaMap {
    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn input_dim(&self) -> usize {
        self.train_inputs.nrows()
    }

    pub fn out_dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// `out_dim × n` coordinates of the training inputs.
    pub fn training_coordinates(&self) -> &DMatrix<f64> {
        &self.coords
    }

    pub fn transform(&self, x: &[f64]) -> Result<DVector<f64>> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                got: x.len(),
                context: "kernel map input dimension",
            });
        }
        let n = self.train_inputs.ncols();
        let kv = DVector::from_iterator(
            n,
            self.train_inputs
                .column_iter()
                .map(|c| self.kernel.eval(x, c.as_slice())),
        );
        let mean = kv.sum() / n as f64;
        let kc = DVector::from_iterator(
            n,
            (0..n).map(|j| kv[j] - mean - self.col_means[j] + self.grand_mean),
        );
        let mut phi = self.eigenvectors.tr_mul(&kc);
        for (c, v) in phi.iter_mut().enumerate() {
            *v /= self.eigenvalues[c].sqrt();
        }
        Ok(phi)
    }

    /// Maps every column of `x`.
    pub fn transform_columns(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let mut out = DMatrix::zeros(self.out_dim(), x.ncols());
        for (j, c) in x.column_iter().enumerate() {
            out.set_column(j, &self.transform(c.clone_owned().as_slice())?);
        }
        Ok(out)
    }
}

/// Kernel header, the training inputs, centering statistics and components.
pub fn write_kpca<W: Write>(m: &KpcaMap, mut w: W) -> Result<()> {
    let w = &mut w;
    write_magic(w, KPCA_MAGIC)?;
    let (kind, param) = m.kernel.code();
    write_u64(w, kind)?;
    write_f64(w, param)?;
    write_u64(w, m.input_dim() as u64)?;
    write_u64(w, m.train_inputs.ncols() as u64)?;
    write_u64(w, m.out_dim() as u64)?;
    write_matrix(w, &m.train_inputs)?;
    write_f64s(w, m.col_means.iter())?;
    write_f64(w, m.grand_mean)?;
    write_f64s(w, m.eigenvalues.iter())?;
    write_matrix(w, &m.eigenvectors)
}

pub fn read_kpca<R: Read>(mut r: R) -> Result<KpcaMap> {
    let r = &mut r;
    expect_magic(r, KPCA_MAGIC)?;
    let kind = read_u64(r)?;
    let param = read_f64(r)?;
    let kernel = KernelSpec::from_code(kind, param)?;
    let d0 = read_usize(r, "d0")?;
    let n = read_usize(r, "n")?;
    let out_dim = read_usize(r, "out_dim")?;
    if out_dim > n {
        return Err(Error::Format(format!("out_dim {out_dim} exceeds n = {n}")));
    }
    let train_inputs = read_matrix(r, d0, n)?;
    let col_means = read_vector(r, n)?;
    let grand_mean = read_f64(r)?;
    let eigenvalues = read_vector(r, out_dim)?;
    if eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::Format("non-positive kernel eigenvalue".into()));
    }
    let eigenvectors = read_matrix(r, n, out_dim)?;
    let mut coords = eigenvectors.transpose();
    for (c, mut row) in coords.row_iter_mut().enumerate() {
        row *= eigenvalues[c].sqrt();
    }
    Ok(KpcaMap {
        kernel,
        train_inputs,
        col_means,
        grand_mean,
        eigenvalues,
        eigenvectors,
        coords,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn sample() -> DMatrix<f64> {
        DMatrix::from_fn(3, 9, |i, j| {
            (((i * 9 + j) as f64 * 12.9898).sin() * 43758.5453).fract() * 4.0
        })
    }

    #[test]
    fn gram_trivia() {
        assert_eq!(
            gram(&DMatrix::identity(3, 3), &KernelSpec::Linear),
            DMatrix::identity(3, 3)
        );
        let p = KernelSpec::Polynomial { degree: 2 };
        assert_eq!(p.eval(&[1.0, 1.0], &[1.0, -1.0]), 0.0);
        let g = gram(&sample(), &KernelSpec::Gaussian { sigma: 0.7 });
        assert!(g.diagonal().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn parse_kernels() {
        assert_eq!(
            "poly2".parse::<KernelSpec>().unwrap(),
            KernelSpec::Polynomial { degree: 2 }
        );
        assert_eq!(
            "poly:3".parse::<KernelSpec>().unwrap(),
            KernelSpec::Polynomial { degree: 3 }
        );
        assert_eq!(
            "gaussian:1.5".parse::<KernelSpec>().unwrap(),
            KernelSpec::Gaussian { sigma: 1.5 }
        );
        assert!("gaussian:0".parse::<KernelSpec>().is_err());
        assert!("rbf".parse::<KernelSpec>().is_err());
        assert_eq!(KernelSpec::Polynomial { degree: 2 }.to_string(), "poly2");
    }

    #[test]
    fn inner_products_reproduce_centered_gram() {
        let x = sample();
        for kernel in [
            KernelSpec::Linear,
            KernelSpec::Polynomial { degree: 2 },
            KernelSpec::Gaussian { sigma: 1.3 },
        ] {
            let m = kpca_fit(&x, &kernel, DEFAULT_EIGEN_TOL).unwrap();
            let phi = m.training_coordinates();
            let kc = center_gram(&gram(&x, &kernel));
            let scale = kc.amax();
            assert!(
                (phi.transpose() * phi - &kc).amax() <= 1e-8 * scale.max(1.0),
                "{kernel}"
            );
            for j in 0..x.ncols() {
                let t = m.transform(x.column(j).clone_owned().as_slice()).unwrap();
                assert!((t - phi.column(j)).amax() < 1e-8, "{kernel}");
            }
        }
    }

    #[test]
    fn linear_kernel_preserves_distances() {
        let x = sample();
        let m = kpca_fit(&x, &KernelSpec::Linear, DEFAULT_EIGEN_TOL).unwrap();
        assert_eq!(m.out_dim(), 3);
        let phi = m.training_coordinates();
        for i in 0..9 {
            for j in 0..9 {
                let a = (x.column(i) - x.column(j)).norm();
                let b = (phi.column(i) - phi.column(j)).norm();
                assert!((a - b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn three_points_span_two_dims() {
        let x = dmatrix![0.0, 1.0, 5.0; 2.0, -1.0, 0.5; 1.0, 1.0, 1.0];
        let m = kpca_fit(&x, &KernelSpec::Gaussian { sigma: 1.0 }, DEFAULT_EIGEN_TOL).unwrap();
        assert!(m.out_dim() <= 2);
    }

    #[test]
    fn duplicates_share_coordinates() {
        let x = dmatrix![0.0, 1.0, 1.0, 3.0; 2.0, 0.0, 0.0, 1.0];
        let m = kpca_fit(&x, &KernelSpec::Polynomial { degree: 2 }, DEFAULT_EIGEN_TOL).unwrap();
        let phi = m.training_coordinates();
        assert!((phi.column(1) - phi.column(2)).amax() < 1e-12);
    }

    #[test]
    fn out_of_sample_inner_products() {
        let x = sample();
        let kernel = KernelSpec::Gaussian { sigma: 2.0 };
        let m = kpca_fit(&x, &kernel, DEFAULT_EIGEN_TOL).unwrap();
        let q = [0.3, -0.4, 1.1];
        let phi_q = m.transform(&q).unwrap();
        // centered kernel between q and training point i
        let n = 9;
        let k = gram(&x, &kernel);
        let kv: Vec<f64> = (0..n)
            .map(|j| kernel.eval(&q, x.column(j).clone_owned().as_slice()))
            .collect();
        let kv_mean = kv.iter().sum::<f64>() / n as f64;
        let col_mean: Vec<f64> = (0..n).map(|j| k.column(j).sum() / n as f64).collect();
        let grand = col_mean.iter().sum::<f64>() / n as f64;
        for i in 0..n {
            let expected = kv[i] - kv_mean - col_mean[i] + grand;
            let got = phi_q.dot(&m.training_coordinates().column(i));
            assert!((got - expected).abs() < 1e-8);
        }
        assert!(m.transform(&[1.0]).is_err());
    }

    #[test]
    fn degenerate_kernel_is_error() {
        let x = DMatrix::from_element(2, 4, 1.0);
        assert!(matches!(
            kpca_fit(&x, &KernelSpec::Linear, DEFAULT_EIGEN_TOL),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn serialization_round_trip() {
        let m = kpca_fit(
            &sample(),
            &KernelSpec::Gaussian { sigma: 0.9 },
            DEFAULT_EIGEN_TOL,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_kpca(&m, &mut buf).unwrap();
        assert_eq!(read_kpca(buf.as_slice()).unwrap(), m);
    }
}
