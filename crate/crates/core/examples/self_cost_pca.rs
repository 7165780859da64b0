//! The self cost c_ij = -1/(2n) used as the unlabeled cost with no label
//! term reproduces PCA: the fitted axis matches the top left singular
//! vector of the centered data.
//!
//! cargo run --example self_cost_pca

use nalgebra::DMatrix;
use ssdr::dataset::center_columns;
use ssdr::{fit, Dataset, LearnerSpec, Result};

fn main() -> Result<()> {
    // A stretched, rotated cloud.
    let n = 200;
    let x = DMatrix::from_fn(3, n, |r, c| {
        let t = (c as f64 * 0.37).sin() * 5.0;
        let s = (c as f64 * 1.91).cos();
        match r {
            0 => 0.8 * t - 0.6 * s,
            1 => 0.6 * t + 0.8 * s,
            _ => 0.1 * (c as f64 * 0.73).sin(),
        }
    });
    let d = Dataset::new(x.clone(), vec![None; n], 1)?;
    let model = fit(&d, &LearnerSpec::preset("PCA")?.with_dim(2))?;

    let svd = center_columns(&x).0.svd(true, false);
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let u = svd.u.unwrap();
    let a = model.projection();
    for (row, &k) in order.iter().take(2).enumerate() {
        let axis = a.row(row).transpose().normalize();
        println!(
            "axis {row}: |cos| with singular vector {k} = {:.12}",
            axis.dot(&u.column(k)).abs()
        );
    }
    Ok(())
}
