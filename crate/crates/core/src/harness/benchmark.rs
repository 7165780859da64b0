//! The realization protocol: split, tune, fit, classify, aggregate.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::cv::{cross_validate, embedded_accuracy};
use crate::dataset::{split, ClassId, Dataset, SplitIndices};
use crate::error::{Error, Result};
use crate::kpca::{kpca_fit, KernelSpec, DEFAULT_EIGEN_TOL};
use crate::learner::{fit_prepared, LearnerSpec, PreparedInputs, UnlabelCost};

// Decorrelates the fold shuffles from the split shuffles, which share the seed.
const CV_SEED_SALT: u64 = 0x5eed_cf01_d5a1_7000;

/// Outcome of one learner on one realization.
#[derive(Debug, Clone, PartialEq)]
pub enum RunOutcome {
    Ok {
        accuracy: f64,
        gamma: f64,
        alpha: u32,
    },
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnerResult {
    pub name: String,
    /// in realization order
    pub runs: Vec<RunOutcome>,
}

impl LearnerResult {
    pub fn accuracies(&self) -> Vec<f64> {
        self.runs
            .iter()
            .filter_map(|r| match r {
                RunOutcome::Ok { accuracy, .. } => Some(*accuracy),
                RunOutcome::Failed(_) => None,
            })
            .collect()
    }

    /// Mean accuracy over successful realizations.
    pub fn mean(&self) -> Option<f64> {
        let a = self.accuracies();
        (!a.is_empty()).then(|| a.iter().sum::<f64>() / a.len() as f64)
    }

    /// Standard error of the mean from the unbiased sample variance; needs
    /// two successful realizations.
    pub fn std_err(&self) -> Option<f64> {
        let a = self.accuracies();
        let m = a.len();
        if m < 2 {
            return None;
        }
        let mean = a.iter().sum::<f64>() / m as f64;
        let var = a.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (m - 1) as f64;
        Some((var / m as f64).sqrt())
    }

    pub fn failures(&self) -> usize {
        self.runs
            .iter()
            .filter(|r| matches!(r, RunOutcome::Failed(_)))
            .count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub dataset: String,
    pub realizations: usize,
    pub learners: Vec<LearnerResult>,
}

impl Report {
    pub fn learner(&self, name: &str) -> Option<&LearnerResult> {
        self.learners.iter().find(|l| l.name == name)
    }

    /// One row for the dataset, one `mean±se` column per learner, in percent.
    pub fn summary_tsv(&self) -> String {
        let mut out = String::from("dataset");
        for l in &self.learners {
            write!(out, "\t{}", l.name).unwrap();
        }
        write!(out, "\n{}", self.dataset).unwrap();
        for l in &self.learners {
            let cell = match (l.mean(), l.std_err()) {
                (Some(m), Some(se)) => format!("{:.1}±{:.1}", 100.0 * m, 100.0 * se),
                (Some(m), None) => format!("{:.1}", 100.0 * m),
                (None, _) => "failed".to_string(),
            };
            write!(out, "\t{cell}").unwrap();
        }
        out.push('\n');
        out
    }

    /// Every learner × realization with the selected parameters.
    pub fn detail_tsv(&self) -> String {
        let mut out = String::from("realization\tlearner\taccuracy\tgamma\talpha\tstatus\n");
        for r in 0..self.realizations {
            for l in &self.learners {
                match &l.runs[r] {
                    RunOutcome::Ok {
                        accuracy,
                        gamma,
                        alpha,
                    } => writeln!(out, "{r}\t{}\t{accuracy:.6}\t{gamma}\t{alpha}\tok", l.name)
                        .unwrap(),
                    RunOutcome::Failed(msg) => {
                        let msg = msg.replace(['\t', '\n'], " ");
                        writeln!(out, "{r}\t{}\t\t\t\tfailed: {msg}", l.name).unwrap()
                    }
                }
            }
        }
        out
    }

    /// Writes `summary.tsv` and `realizations.tsv` into `dir`.
    pub fn write_to_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (file, text) in [
            ("summary.tsv", self.summary_tsv()),
            ("realizations.tsv", self.detail_tsv()),
        ] {
            let path = dir.join(file);
            std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

/// Training columns with labels only on the labeled part, plus the
/// evaluation columns and their truth.
struct Realization {
    train: Dataset,
    eval_x: DMatrix<f64>,
    eval_truth: Vec<ClassId>,
}

fn realization_data(d: &Dataset, idx: &SplitIndices) -> Result<Realization> {
    let training = idx.training();
    let labeled_pos: Vec<usize> = training
        .iter()
        .enumerate()
        .filter(|(_, i)| idx.labeled.binary_search(i).is_ok())
        .map(|(p, _)| p)
        .collect();
    let train = d.select(&training).mask_labels(&labeled_pos);
    // evaluation needs ground truth
    let eval: Vec<usize> = idx
        .evaluation()
        .iter()
        .copied()
        .filter(|&i| d.labels()[i].is_some())
        .collect();
    if eval.is_empty() {
        return Err(Error::Split(
            "no evaluation example has a known label".into(),
        ));
    }
    Ok(Realization {
        train,
        eval_x: d.x().select_columns(&eval),
        eval_truth: eval
            .iter()
            .map(|&i| d.labels()[i].expect("filtered"))
            .collect(),
    })
}

/// Inputs for one kernel choice: training data (in kernel coordinates if
/// any), prepared costs, and mapped evaluation columns.
struct Workspace {
    train: Dataset,
    prepared: PreparedInputs,
    eval_x: DMatrix<f64>,
}

fn workspace(
    r: &Realization,
    kernel: Option<KernelSpec>,
    learners: &[&LearnerSpec],
) -> Result<Workspace> {
    let (train, eval_x) = match &kernel {
        Some(k) => {
            let map = kpca_fit(r.train.x(), k, DEFAULT_EIGEN_TOL)?;
            let eval_x = map.transform_columns(&r.eval_x)?;
            (
                r.train.with_inputs(map.training_coordinates().clone())?,
                eval_x,
            )
        }
        None => (r.train.clone(), r.eval_x.clone()),
    };
    let mut prepared = PreparedInputs::new(train.x())?;
    for l in learners {
        if let UnlabelCost::Heat(_) = l.unlabel {
            prepared = prepared.with_heat_for(l)?;
        }
    }
    Ok(Workspace {
        train,
        prepared,
        eval_x,
    })
}

fn run_learner(
    cfg: &ExperimentConfig,
    ws: &Workspace,
    truth: &[ClassId],
    spec: &LearnerSpec,
    realization: usize,
) -> Result<RunOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.split.seed ^ CV_SEED_SALT);
    rng.set_stream(realization as u64);
    let cv = cross_validate(
        &ws.prepared,
        &ws.train,
        spec,
        &cfg.gamma_grid,
        &cfg.alpha_grid,
        cfg.folds,
        cfg.eval_k,
        &mut rng,
    )?;
    let tuned = spec.clone().with_gamma(cv.gamma).with_alpha(cv.alpha);
    let model = fit_prepared(&ws.prepared, &ws.train, &tuned)?;
    let accuracy = embedded_accuracy(&model, &ws.train, &ws.eval_x, truth, cfg.eval_k)?;
    Ok(RunOutcome::Ok {
        accuracy,
        gamma: cv.gamma,
        alpha: cv.alpha,
    })
}

fn run_realization(cfg: &ExperimentConfig, d: &Dataset, realization: usize) -> Vec<RunOutcome> {
    let fail_all = |e: Error| vec![RunOutcome::Failed(e.to_string()); cfg.learners.len()];
    let r = match split(d, &cfg.split, realization).and_then(|idx| realization_data(d, &idx)) {
        Ok(r) => r,
        Err(e) => return fail_all(e),
    };
    let mut spaces: Vec<Result<Workspace>> = Vec::new();
    let mut kernels: Vec<Option<KernelSpec>> = Vec::new();
    for l in &cfg.learners {
        if !kernels.contains(&l.kernel) {
            kernels.push(l.kernel);
        }
    }
    for k in &kernels {
        let users: Vec<&LearnerSpec> = cfg.learners.iter().filter(|l| l.kernel == *k).collect();
        spaces.push(workspace(&r, *k, &users));
    }
    cfg.learners
        .iter()
        .map(|spec| {
            let slot = kernels
                .iter()
                .position(|k| *k == spec.kernel)
                .expect("kernel listed");
            match &spaces[slot] {
                Ok(ws) => run_learner(cfg, ws, &r.eval_truth, spec, realization)
                    .unwrap_or_else(|e| RunOutcome::Failed(e.to_string())),
                Err(e) => RunOutcome::Failed(e.to_string()),
            }
        })
        .collect()
}

/// Runs every learner on every realization of `cfg`. Realizations run in
/// parallel; results are merged in realization order, so the report does
/// not depend on scheduling.
pub fn run_benchmark(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let d = cfg.source.load()?;
    run_benchmark_on(cfg, &d)
}

/// [`run_benchmark`] on an already loaded dataset.
pub fn run_benchmark_on(cfg: &ExperimentConfig, d: &Dataset) -> Result<Report> {
    cfg.validate()?;
    let per_realization: Vec<Vec<RunOutcome>> = (0..cfg.split.realizations)
        .into_par_iter()
        .map(|r| run_realization(cfg, d, r))
        .collect();
    let learners: Vec<LearnerResult> = cfg
        .learners
        .iter()
        .enumerate()
        .map(|(j, spec)| LearnerResult {
            name: spec.to_string(),
            runs: per_realization.iter().map(|runs| runs[j].clone()).collect(),
        })
        .collect();
    for l in &learners {
        for (r, run) in l.runs.iter().enumerate() {
            if let RunOutcome::Failed(msg) = run {
                log::warn!("{} realization {r} failed: {msg}", l.name);
            }
        }
    }
    if learners.iter().all(|l| l.mean().is_none()) {
        return Err(Error::AllRealizationsFailed(cfg.split.realizations));
    }
    Ok(Report {
        dataset: cfg.name.clone(),
        realizations: cfg.split.realizations,
        learners,
    })
}
