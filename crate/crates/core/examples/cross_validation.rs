//! Scores the (γ, α) grid of SS-LFDA by held-out labeled folds and shows
//! which pair cross-validation selects.
//!
//! cargo run --release --example cross_validation

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ssdr::dataset::{generate_multimodal_toy, split, SplitSpec, ToyKind};
use ssdr::harness::{cross_validate, grid_scores, DEFAULT_ALPHA_GRID, DEFAULT_GAMMA_GRID};
use ssdr::learner::PreparedInputs;
use ssdr::{LearnerSpec, Result};

fn main() -> Result<()> {
    let d = generate_multimodal_toy(ToyKind::ThreeCluster, 50, 1.0, 1)?;
    let s = split(
        &d,
        &SplitSpec::transductive(20, 0).with_per_class_labels(true),
        0,
    )?;
    let train = d.mask_labels(&s.labeled);
    let spec = LearnerSpec::preset("SS-LFDA")?;
    let prepared = PreparedInputs::for_spec(train.x(), &spec)?;

    let scores = grid_scores(
        &prepared,
        &train,
        &spec,
        &DEFAULT_GAMMA_GRID,
        &DEFAULT_ALPHA_GRID,
        5,
        1,
        &mut ChaCha8Rng::seed_from_u64(0),
    )?;
    println!("gamma\talpha\tscore");
    for g in &scores {
        let score = g.score.map_or("failed".to_string(), |v| format!("{v:.3}"));
        println!("{}\t{}\t{score}", g.gamma, g.alpha);
    }
    let best = cross_validate(
        &prepared,
        &train,
        &spec,
        &DEFAULT_GAMMA_GRID,
        &DEFAULT_ALPHA_GRID,
        5,
        1,
        &mut ChaCha8Rng::seed_from_u64(0),
    )?;
    println!("selected gamma = {}, alpha = {}", best.gamma, best.alpha);
    Ok(())
}
