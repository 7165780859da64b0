//! Fits a kernel SS-LFDA pipeline, saves it, loads it back and classifies
//! new points from the same distribution by 1-NN in the embedded space.
//!
//! cargo run --example save_load_model

use ssdr::dataset::{generate_multimodal_toy, split, SplitSpec, ToyKind};
use ssdr::knn::{accuracy, KnnIndex};
use ssdr::kpca::KernelSpec;
use ssdr::learner::{read_pipeline, write_pipeline};
use ssdr::{fit_pipeline, LearnerSpec, Result};

fn main() -> Result<()> {
    let d = generate_multimodal_toy(ToyKind::TwoCluster, 60, 1.0, 3)?;
    let s = split(
        &d,
        &SplitSpec::transductive(30, 0).with_per_class_labels(true),
        0,
    )?;
    let train = d.mask_labels(&s.labeled);
    let spec =
        LearnerSpec::preset("SS-LFDA")?.with_kernel(Some(KernelSpec::Gaussian { sigma: 3.0 }));
    let pipeline = fit_pipeline(&train, &spec)?;

    let mut bytes = Vec::new();
    write_pipeline(&pipeline, &mut bytes)?;
    let loaded = read_pipeline(bytes.as_slice())?;
    println!(
        "model: {} bytes, identical after reload: {}",
        bytes.len(),
        loaded == pipeline
    );

    let labeled = d.x().select_columns(&s.labeled);
    let y: Vec<_> = s.labeled.iter().map(|&i| d.labels()[i].unwrap()).collect();
    let index = KnnIndex::new(loaded.embed_columns(&labeled)?, y, 1)?;

    let fresh = generate_multimodal_toy(ToyKind::TwoCluster, 60, 1.0, 99)?;
    let predicted = index.classify_columns(&loaded.embed_columns(fresh.x())?)?;
    let truth: Vec<_> = fresh.labels().iter().map(|y| y.unwrap()).collect();
    println!(
        "accuracy on {} fresh points: {:.3}",
        fresh.len(),
        accuracy(&predicted, &truth)
    );
    Ok(())
}
