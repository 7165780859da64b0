//! Fits FDA, LFDA, LPP and SS-LFDA on each multimodal toy and prints the
//! transductive 1-NN accuracy of one labeled split. With an output directory
//! argument, also writes the data and each 1-D embedding as CSV.
//!
//! Learners use their preset parameters (γ = 0.1 for SS-LFDA) rather than
//! cross-validated ones, so the three-cluster SS-LFDA row stays close to
//! LFDA here; the benchmark configs tune γ.
//!
//! cargo run --example toy_projections -- [out_dir]

use std::path::PathBuf;

use ssdr::dataset::{generate_multimodal_toy, split, write_csv, SplitSpec, ToyKind};
use ssdr::harness::embedded_accuracy;
use ssdr::{fit, LearnerSpec, Result};

fn main() -> Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    for (kind, labeled) in [
        (ToyKind::TwoCluster, 30),
        (ToyKind::ThreeCluster, 20),
        (ToyKind::SslOnly, 4),
    ] {
        let d = generate_multimodal_toy(kind, 100, 1.0, 1)?;
        let s = split(
            &d,
            &SplitSpec::transductive(labeled, 0).with_per_class_labels(true),
            0,
        )?;
        let train = d.mask_labels(&s.labeled);
        let eval = d.x().select_columns(s.evaluation());
        let truth: Vec<_> = s
            .evaluation()
            .iter()
            .map(|&i| d.labels()[i].unwrap())
            .collect();

        println!("{} (n = {}, labeled = {labeled})", kind.name(), d.len());
        for name in ["FDA", "LFDA", "LPP", "SS-LFDA"] {
            let model = fit(&train, &LearnerSpec::preset(name)?)?;
            let acc = embedded_accuracy(&model, &train, &eval, &truth, 1)?;
            println!("  {name:<8} {:.3}", acc);
            if let Some(dir) = &out {
                let z = model.embed_columns(d.x())?;
                let path = dir.join(format!("{}-{name}.csv", kind.name()));
                let mut text = String::from("z,class\n");
                for (v, y) in z.row(0).iter().zip(d.labels()) {
                    text.push_str(&format!("{v},{}\n", y.unwrap()));
                }
                std::fs::write(&path, text).map_err(|e| ssdr::Error::io(&path, e))?;
            }
        }
        if let Some(dir) = &out {
            let path = dir.join(format!("{}.csv", kind.name()));
            let file = std::fs::File::create(&path).map_err(|e| ssdr::Error::io(&path, e))?;
            write_csv(&d, file, "class", "")?;
        }
    }
    Ok(())
}
