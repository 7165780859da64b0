//! Kernel variants on the Balance data through explicit kernel PCA
//! coordinates. The quadratic kernel makes the torque difference a linear
//! function of the kernel features, so the ideal 1-D projection exists in
//! kernel space; with only 30 labels the learners do not always find it.
//! Semi-supervised learners on this data depend on a tuned γ; see
//! configs/balance.conf for the cross-validated comparison.
//!
//! cargo run --release --example kernel_balance

use ssdr::dataset::{generate_balance, split, SplitSpec};
use ssdr::harness::embedded_accuracy;
use ssdr::kpca::{kpca_fit, KernelSpec};
use ssdr::learner::kpca_trick_fit;
use ssdr::{LearnerSpec, Result};

fn main() -> Result<()> {
    let d = generate_balance();
    let map = kpca_fit(d.x(), &KernelSpec::Polynomial { degree: 2 }, 1e-10)?;
    println!(
        "poly2 kernel PCA keeps {} of {} dimensions",
        map.out_dim(),
        d.len()
    );

    let s = split(
        &d,
        &SplitSpec::transductive(30, 0).with_per_class_labels(true),
        0,
    )?;
    let train = d.mask_labels(&s.labeled);
    let truth: Vec<_> = s
        .evaluation()
        .iter()
        .map(|&i| d.labels()[i].unwrap())
        .collect();
    for kernel in [
        KernelSpec::Linear,
        KernelSpec::Polynomial { degree: 2 },
        KernelSpec::Gaussian { sigma: 2.0 },
    ] {
        for name in ["FDA", "MMC", "LFDA"] {
            let (map, model) = kpca_trick_fit(&train, &kernel, &LearnerSpec::preset(name)?)?;
            let train_z = map.transform_columns(d.x())?;
            let eval = train_z.select_columns(s.evaluation());
            let train_k = train.with_inputs(train_z)?;
            let acc = embedded_accuracy(&model, &train_k, &eval, &truth, 1)?;
            println!("{:<12} {name:<8} {acc:.3}", kernel.to_string());
        }
    }
    Ok(())
}
