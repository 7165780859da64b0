//! Cross-validation of `γ` and `α` on held-out labeled examples.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::dataset::{ClassId, Dataset};
use crate::error::{Error, Result};
use crate::knn::{accuracy, KnnIndex};
use crate::learner::{fit_prepared, LearnerSpec, PreparedInputs};
use crate::solver::EmbeddingModel;

/// Selected parameters and their mean held-out accuracy (`None` when there
/// was nothing to tune).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvOutcome {
    pub gamma: f64,
    pub alpha: u32,
    pub score: Option<f64>,
}

/// Splits `(position, class)` pairs into `folds` stratified folds: each class
/// is shuffled and dealt round-robin, continuing where the previous class
/// stopped. Folds hold positions, sorted.
pub fn stratified_folds(
    labeled: &[(usize, ClassId)],
    folds: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<usize>> {
    let mut by_class: Vec<Vec<usize>> = Vec::new();
    for &(pos, c) in labeled {
        if by_class.len() <= c {
            by_class.resize(c + 1, Vec::new());
        }
        by_class[c].push(pos);
    }
    let mut out = vec![Vec::new(); folds];
    let mut next = 0;
    for mut members in by_class {
        members.shuffle(rng);
        for pos in members {
            out[next % folds].push(pos);
            next += 1;
        }
    }
    for f in &mut out {
        f.sort_unstable();
    }
    out
}

/// Nearest-neighbor accuracy of `eval` columns (with `truth`) against the
/// labeled columns of `train`, both embedded by `model`.
pub fn embedded_accuracy(
    model: &EmbeddingModel,
    train: &Dataset,
    eval: &DMatrix<f64>,
    truth: &[ClassId],
    k: usize,
) -> Result<f64> {
    Ok(accuracy(
        &embedded_predictions(model, train, eval, k)?,
        truth,
    ))
}

pub fn embedded_predictions(
    model: &EmbeddingModel,
    train: &Dataset,
    eval: &DMatrix<f64>,
    k: usize,
) -> Result<Vec<ClassId>> {
    let labeled: Vec<usize> = (0..train.len())
        .filter(|&i| train.labels()[i].is_some())
        .collect();
    if labeled.is_empty() {
        return Err(Error::NoLabels);
    }
    let z = model.embed_columns(&train.x().select_columns(&labeled))?;
    let y = labeled
        .iter()
        .map(|&i| train.labels()[i].expect("labeled"))
        .collect();
    let index = KnnIndex::new(z, y, k.min(labeled.len()))?;
    index.classify_columns(&model.embed_columns(eval)?)
}

/// Mean held-out accuracy of one grid point, `None` if a fold failed to fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridScore {
    pub gamma: f64,
    pub alpha: u32,
    pub score: Option<f64>,
}

/// Picks `(γ, α)` maximizing mean held-out k-NN accuracy.
///
/// `train` holds every training column; its labeled columns are split into
/// stratified folds and each fold's fit sees the held-out fold as unlabeled.
/// A fold whose remaining labels miss a class is skipped. Ties go to the
/// smaller `γ`, then the smaller `α`. Parameters the learner does not use are
/// not searched, and a single remaining grid point is returned unscored.
#[allow(clippy::too_many_arguments)]
pub fn cross_validate(
    prepared: &PreparedInputs,
    train: &Dataset,
    spec: &LearnerSpec,
    gamma_grid: &[f64],
    alpha_grid: &[u32],
    folds: usize,
    eval_k: usize,
    rng: &mut ChaCha8Rng,
) -> Result<CvOutcome> {
    let gammas: Vec<f64> = if spec.tunes_gamma() {
        gamma_grid.to_vec()
    } else {
        vec![spec.gamma]
    };
    let alphas: Vec<u32> = if spec.tunes_alpha() {
        alpha_grid.to_vec()
    } else {
        vec![spec.alpha]
    };
    let (gammas, alphas) = normalize_grids(gammas, alphas)?;
    if gammas.len() == 1 && alphas.len() == 1 {
        return Ok(CvOutcome {
            gamma: gammas[0],
            alpha: alphas[0],
            score: None,
        });
    }
    let scores = grid_scores(prepared, train, spec, &gammas, &alphas, folds, eval_k, rng)?;
    let mut best: Option<CvOutcome> = None;
    for g in scores {
        let Some(score) = g.score else { continue };
        if best.is_none_or(|b| score > b.score.expect("scored")) {
            best = Some(CvOutcome {
                gamma: g.gamma,
                alpha: g.alpha,
                score: Some(score),
            });
        }
    }
    best.ok_or_else(|| Error::Degenerate("every grid point failed to fit".into()))
}

fn normalize_grids(mut gammas: Vec<f64>, mut alphas: Vec<u32>) -> Result<(Vec<f64>, Vec<u32>)> {
    if gammas.is_empty() || alphas.is_empty() {
        return Err(Error::invalid(
            "grid",
            "cross-validation grids must be nonempty",
        ));
    }
    gammas.sort_by(f64::total_cmp);
    gammas.dedup();
    alphas.sort_unstable();
    alphas.dedup();
    Ok((gammas, alphas))
}

/// Scores every `(γ, α)` pair (sorted ascending, `γ` outer) on one set of
/// stratified folds drawn from `rng`.
#[allow(clippy::too_many_arguments)]
pub fn grid_scores(
    prepared: &PreparedInputs,
    train: &Dataset,
    spec: &LearnerSpec,
    gamma_grid: &[f64],
    alpha_grid: &[u32],
    folds: usize,
    eval_k: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<GridScore>> {
    let (gammas, alphas) = normalize_grids(gamma_grid.to_vec(), alpha_grid.to_vec())?;
    let labeled: Vec<(usize, ClassId)> = train
        .labels()
        .iter()
        .enumerate()
        .filter_map(|(i, y)| y.map(|c| (i, c)))
        .collect();
    let folds = folds.min(labeled.len());
    if folds < 2 {
        return Err(Error::invalid(
            "folds",
            format!("{} labeled examples cannot form two folds", labeled.len()),
        ));
    }
    let fold_sets = stratified_folds(&labeled, folds, rng);

    // Label masks and held-out truth per usable fold.
    let mut plans = Vec::new();
    for (f, held) in fold_sets.iter().enumerate() {
        let keep: Vec<usize> = labeled
            .iter()
            .map(|&(i, _)| i)
            .filter(|i| held.binary_search(i).is_err())
            .collect();
        let fold_train = train.mask_labels(&keep);
        if fold_train.class_counts().contains(&0) {
            log::warn!("cross-validation fold {f} skipped: a class has no training labels");
            continue;
        }
        let eval = train.x().select_columns(held);
        let truth: Vec<ClassId> = held
            .iter()
            .map(|&i| train.labels()[i].expect("labeled"))
            .collect();
        plans.push((fold_train, eval, truth));
    }
    if plans.is_empty() {
        return Err(Error::AllFoldsSkipped);
    }

    let mut out = Vec::with_capacity(gammas.len() * alphas.len());
    for &gamma in &gammas {
        for &alpha in &alphas {
            let candidate = spec.clone().with_gamma(gamma).with_alpha(alpha);
            let mut total = 0.0;
            let mut ok = true;
            for (fold_train, eval, truth) in &plans {
                match fit_prepared(prepared, fold_train, &candidate)
                    .and_then(|m| embedded_accuracy(&m, fold_train, eval, truth, eval_k))
                {
                    Ok(acc) => total += acc,
                    Err(e) => {
                        log::warn!("grid point gamma={gamma} alpha={alpha} failed: {e}");
                        ok = false;
                        break;
                    }
                }
            }
            let score = ok.then(|| total / plans.len() as f64);
            out.push(GridScore {
                gamma,
                alpha,
                score,
            });
        }
    }
    Ok(out)
}
