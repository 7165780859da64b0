//! Flat little-endian model files.

use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector};

use super::{EmbeddingModel, WeightingMode};
use crate::error::{Error, Result};

pub const MODEL_MAGIC: &[u8; 8] = b"SSDREMB\0";
pub const MODEL_VERSION: u32 = 1;

// Guards against allocating absurd buffers from a corrupt header.
const MAX_ELEMENTS: u64 = 1 << 32;

fn io_err(e: std::io::Error) -> Error {
    Error::io("<model stream>", e)
}

pub(crate) fn write_u64<W: Write>(w: &mut W, v: u64) -> Result<()> {
    w.write_all(&v.to_le_bytes()).map_err(io_err)
}

pub(crate) fn write_f64<W: Write>(w: &mut W, v: f64) -> Result<()> {
    w.write_all(&v.to_le_bytes()).map_err(io_err)
}

pub(crate) fn write_f64s<'a, W: Write>(
    w: &mut W,
    vs: impl IntoIterator<Item = &'a f64>,
) -> Result<()> {
    for v in vs {
        write_f64(w, *v)?;
    }
    Ok(())
}

/// Row-major.
pub(crate) fn write_matrix<W: Write>(w: &mut W, m: &DMatrix<f64>) -> Result<()> {
    write_f64s(w, m.transpose().iter())
}

pub(crate) fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf).map_err(io_err)?;
    Ok(u64::from_le_bytes(buf))
}

pub(crate) fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf).map_err(io_err)?;
    Ok(f64::from_le_bytes(buf))
}

pub(crate) fn read_usize<R: Read>(r: &mut R, what: &str) -> Result<usize> {
    let v = read_u64(r)?;
    if v > MAX_ELEMENTS {
        return Err(Error::Format(format!("{what} = {v} is implausibly large")));
    }
    Ok(v as usize)
}

pub(crate) fn read_vector<R: Read>(r: &mut R, n: usize) -> Result<DVector<f64>> {
    let mut v = DVector::zeros(n);
    for x in v.iter_mut() {
        *x = read_f64(r)?;
    }
    Ok(v)
}

pub(crate) fn read_matrix<R: Read>(r: &mut R, rows: usize, cols: usize) -> Result<DMatrix<f64>> {
    if (rows as u64) * (cols as u64) > MAX_ELEMENTS {
        return Err(Error::Format(format!(
            "{rows} × {cols} matrix is implausibly large"
        )));
    }
    let mut m = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = read_f64(r)?;
        }
    }
    Ok(m)
}

pub(crate) fn expect_magic<R: Read>(r: &mut R, magic: &[u8; 8]) -> Result<()> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf).map_err(io_err)?;
    if &buf != magic {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&buf),
            String::from_utf8_lossy(magic)
        )));
    }
    let mut v = [0u8; 4];
    r.read_exact(&mut v).map_err(io_err)?;
    let version = u32::from_le_bytes(v);
    if version != MODEL_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    Ok(())
}

pub(crate) fn write_magic<W: Write>(w: &mut W, magic: &[u8; 8]) -> Result<()> {
    w.write_all(magic).map_err(io_err)?;
    w.write_all(&MODEL_VERSION.to_le_bytes()).map_err(io_err)
}

/// Header `(d0, d, r, mode, ε, γ, α)` followed by the mean, the PCA basis
/// (`r = 0` when absent), `A` and the eigenvalues.
pub fn write_model<W: Write>(m: &EmbeddingModel, mut w: W) -> Result<()> {
    let w = &mut w;
    write_magic(w, MODEL_MAGIC)?;
    let r = m.pre_pca.as_ref().map_or(0, |p| p.nrows());
    write_u64(w, m.input_dim() as u64)?;
    write_u64(w, m.output_dim() as u64)?;
    write_u64(w, r as u64)?;
    write_u64(w, m.weighting.code())?;
    write_f64(w, m.epsilon)?;
    write_f64(w, m.gamma)?;
    write_u64(w, m.alpha as u64)?;
    write_f64s(w, m.train_mean.iter())?;
    if let Some(p) = &m.pre_pca {
        write_matrix(w, p)?;
    }
    write_matrix(w, &m.a)?;
    write_f64s(w, m.eigenvalues.iter())
}

pub fn read_model<R: Read>(mut r: R) -> Result<EmbeddingModel> {
    let r = &mut r;
    expect_magic(r, MODEL_MAGIC)?;
    let d0 = read_usize(r, "d0")?;
    let d = read_usize(r, "d")?;
    let rank = read_usize(r, "r")?;
    let mode_code = read_u64(r)?;
    let weighting = WeightingMode::from_code(mode_code)
        .ok_or_else(|| Error::Format(format!("unknown weighting mode {mode_code}")))?;
    let epsilon = read_f64(r)?;
    let gamma = read_f64(r)?;
    let alpha =
        u32::try_from(read_u64(r)?).map_err(|_| Error::Format("alpha overflows u32".into()))?;
    let train_mean = read_vector(r, d0)?;
    let pre_pca = if rank > 0 {
        Some(read_matrix(r, rank, d0)?)
    } else {
        None
    };
    let inner = if rank > 0 { rank } else { d0 };
    let a = read_matrix(r, d, inner)?;
    let eigenvalues = read_vector(r, d)?;
    Ok(
        EmbeddingModel::new(a, eigenvalues, train_mean, pre_pca, weighting)?
            .with_parameters(epsilon, gamma, alpha),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn round_trip_with_and_without_pca() {
        let base = EmbeddingModel::new(
            dmatrix![0.1, -2.5],
            DVector::from_vec(vec![0.75]),
            DVector::from_vec(vec![1.0, 2.0, 3.0]),
            Some(dmatrix![1.0, 0.0, 0.0; 0.0, 0.6, 0.8]),
            WeightingMode::SqrtLambda,
        )
        .unwrap()
        .with_parameters(0.5, 0.5, 4);
        let plain = EmbeddingModel::new(
            dmatrix![1.0, 2.0; 3.0, 4.0],
            DVector::from_vec(vec![-1.0, 1.0]),
            DVector::from_vec(vec![0.0, 1.0 / 3.0]),
            None,
            WeightingMode::Identity,
        )
        .unwrap();
        for m in [base, plain] {
            let mut buf = Vec::new();
            write_model(&m, &mut buf).unwrap();
            assert_eq!(read_model(buf.as_slice()).unwrap(), m);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(
            read_model(&b"NOTAMODEL\0\0\0\0"[..]),
            Err(Error::Format(_))
        ));
        let mut buf = Vec::new();
        write_magic(&mut buf, MODEL_MAGIC).unwrap();
        assert!(read_model(buf.as_slice()).is_err());
    }
}
