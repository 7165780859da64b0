use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use super::{CostKind, CostMatrix};
use crate::error::{Error, Result};

const EDGE_HEADER: &str = "i\tj\tc_ij";

fn io_err(e: std::io::Error) -> Error {
    Error::io("<cost export>", e)
}

/// Full matrix, one row per line, comma separated, no header.
pub fn write_dense_csv<W: Write>(c: &CostMatrix, mut w: W) -> Result<()> {
    for row in c.entries().row_iter() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        writeln!(w, "{}", line.join(",")).map_err(io_err)?;
    }
    Ok(())
}

/// TSV edge list of entries strictly above `threshold`, `i < j`, zero-based.
/// Values are written in shortest round-trip form.
pub fn write_edge_list<W: Write>(c: &CostMatrix, threshold: f64, mut w: W) -> Result<usize> {
    if !(threshold >= 0.0) {
        return Err(Error::invalid(
            "threshold",
            format!("{threshold} must be >= 0"),
        ));
    }
    writeln!(w, "{EDGE_HEADER}").map_err(io_err)?;
    let n = c.len();
    let mut rows = 0;
    for i in 0..n {
        for j in i + 1..n {
            let v = c.get(i, j);
            if v > threshold {
                writeln!(w, "{i}\t{j}\t{v:?}").map_err(io_err)?;
                rows += 1;
            }
        }
    }
    Ok(rows)
}

/// Reads an edge list back into an `n × n` matrix; absent pairs are zero.
pub fn read_edge_list<R: BufRead>(r: R, n: usize) -> Result<CostMatrix> {
    let mut m = DMatrix::zeros(n, n);
    for (line_no, line) in r.lines().enumerate() {
        let line = line.map_err(io_err)?;
        if line_no == 0 {
            if line.trim() != EDGE_HEADER {
                return Err(Error::Parse {
                    row: 0,
                    message: format!("expected header `{EDGE_HEADER}`"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: String| Error::Parse {
            row: line_no,
            message,
        };
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(bad(format!("expected 3 fields, got {}", fields.len())));
        }
        let i: usize = fields[0].parse().map_err(|_| bad("bad row index".into()))?;
        let j: usize = fields[1]
            .parse()
            .map_err(|_| bad("bad column index".into()))?;
        let v: f64 = fields[2].parse().map_err(|_| bad("bad value".into()))?;
        if i >= n || j >= n {
            return Err(bad(format!("index out of range for n = {n}")));
        }
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    CostMatrix::new(m, CostKind::Unlabel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::{heat_kernel_costs, HeatKernelSpec};

    fn sample() -> CostMatrix {
        let x = DMatrix::from_fn(2, 7, |i, j| (i as f64 + 1.0) * (j as f64).sin());
        heat_kernel_costs(&x, &HeatKernelSpec::global(0.8)).unwrap()
    }

    #[test]
    fn threshold_above_max_gives_header_only() {
        let mut buf = Vec::new();
        let rows = write_edge_list(&sample(), 1.5, &mut buf).unwrap();
        assert_eq!(rows, 0);
        assert_eq!(String::from_utf8(buf).unwrap(), "i\tj\tc_ij\n");
    }

    #[test]
    fn threshold_zero_lists_every_pair() {
        let mut buf = Vec::new();
        let rows = write_edge_list(&sample(), 0.0, &mut buf).unwrap();
        assert_eq!(rows, 7 * 6 / 2);
    }

    #[test]
    fn round_trip_reproduces_thresholded_matrix() {
        let c = sample();
        let t = 0.2;
        let mut buf = Vec::new();
        write_edge_list(&c, t, &mut buf).unwrap();
        let back = read_edge_list(buf.as_slice(), 7).unwrap();
        let expected = c.entries().map(|v| if v > t { v } else { 0.0 });
        assert_eq!(back.entries(), &expected);
    }

    #[test]
    fn dense_csv_shape() {
        let mut buf = Vec::new();
        write_dense_csv(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 7);
        assert!(text.lines().all(|l| l.split(',').count() == 7));
    }
}
