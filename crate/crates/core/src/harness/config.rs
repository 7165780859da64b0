//! Flat `key = value` experiment files.
//!
//! ```text
//! # comment
//! dataset = generator:two-cluster
//! labeled = 10
//! per_class_labels = true
//! learners = FDA, LFDA, SS-LFDA
//! ```

use std::path::{Path, PathBuf};

use crate::costs::HeatKernelSpec;
use crate::dataset::{
    generate_balance, generate_multimodal_toy, load_csv_with, CsvOptions, Dataset, SplitSpec,
    ToyKind,
};
use crate::error::{Error, Result};
use crate::kpca::KernelSpec;
use crate::learner::LearnerSpec;
use crate::solver::WeightingMode;

pub const DEFAULT_GAMMA_GRID: [f64; 6] = [0.01, 0.1, 0.5, 1.0, 5.0, 10.0];
pub const DEFAULT_ALPHA_GRID: [u32; 4] = [1, 2, 4, 8];
pub const DEFAULT_FOLDS: usize = 5;

/// Where examples come from.
#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSource {
    Toy {
        kind: ToyKind,
        n_per_cluster: usize,
        noise: f64,
        seed: u64,
    },
    Balance,
    Csv {
        path: PathBuf,
        options: CsvOptions,
    },
}

impl DatasetSource {
    pub fn load(&self) -> Result<Dataset> {
        match self {
            DatasetSource::Toy {
                kind,
                n_per_cluster,
                noise,
                seed,
            } => generate_multimodal_toy(*kind, *n_per_cluster, *noise, *seed),
            DatasetSource::Balance => Ok(generate_balance()),
            DatasetSource::Csv { path, options } => {
                let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
                load_csv_with(std::io::BufReader::new(file), options)
            }
        }
    }

    /// Short name for report rows.
    pub fn name(&self) -> String {
        match self {
            DatasetSource::Toy { kind, .. } => kind.name().to_string(),
            DatasetSource::Balance => "balance".to_string(),
            DatasetSource::Csv { path, .. } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub source: DatasetSource,
    pub split: SplitSpec,
    pub learners: Vec<LearnerSpec>,
    pub gamma_grid: Vec<f64>,
    pub alpha_grid: Vec<u32>,
    pub folds: usize,
    pub eval_k: usize,
}

impl ExperimentConfig {
    /// A config with default grids and 25 transductive realizations.
    pub fn new(source: DatasetSource, labeled: usize, learners: Vec<LearnerSpec>) -> Self {
        Self {
            name: source.name(),
            source,
            split: SplitSpec::transductive(labeled, 0),
            learners,
            gamma_grid: DEFAULT_GAMMA_GRID.to_vec(),
            alpha_grid: DEFAULT_ALPHA_GRID.to_vec(),
            folds: DEFAULT_FOLDS,
            eval_k: 1,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.split.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.learners.is_empty() {
            return Err(Error::invalid("learners", "at least one learner"));
        }
        for l in &self.learners {
            l.validate()?;
        }
        if self.learners.iter().any(|l| l.tunes_gamma()) && self.gamma_grid.is_empty() {
            return Err(Error::invalid(
                "gamma_grid",
                "empty grid for a tuned parameter",
            ));
        }
        if self.learners.iter().any(|l| l.tunes_alpha()) && self.alpha_grid.is_empty() {
            return Err(Error::invalid(
                "alpha_grid",
                "empty grid for a tuned parameter",
            ));
        }
        if self
            .gamma_grid
            .iter()
            .any(|g| !(*g >= 0.0 && g.is_finite()))
        {
            return Err(Error::invalid(
                "gamma_grid",
                "values must be finite and >= 0",
            ));
        }
        if self.alpha_grid.contains(&0) {
            return Err(Error::invalid(
                "alpha_grid",
                "values must be positive integers",
            ));
        }
        if self.folds < 2 {
            return Err(Error::invalid("folds", "at least 2"));
        }
        if self.eval_k == 0 {
            return Err(Error::invalid("eval_k", "at least 1"));
        }
        if self.split.realizations == 0 {
            return Err(Error::invalid("realizations", "at least 1"));
        }
        Ok(())
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path.parent())
    }

    /// Parses config text. Relative dataset paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut raw = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
                line: line_no,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            raw.set(key.trim(), value.trim(), line_no)?;
        }
        raw.build(base_dir)
    }
}

#[derive(Default)]
struct RawConfig {
    dataset: Option<(String, usize)>,
    name: Option<String>,
    label_column: Option<String>,
    missing_label_token: Option<String>,
    csv_header: Option<bool>,
    toy_n: Option<usize>,
    toy_noise: Option<f64>,
    toy_seed: Option<u64>,
    labeled: Option<usize>,
    unlabeled: Option<usize>,
    transductive: Option<bool>,
    test: Option<usize>,
    realizations: Option<usize>,
    per_class_labels: Option<bool>,
    seed: Option<u64>,
    learners: Option<(Vec<String>, usize)>,
    gamma_grid: Option<Vec<f64>>,
    alpha_grid: Option<Vec<u32>>,
    folds: Option<usize>,
    eval_k: Option<usize>,
    dim: Option<usize>,
    k: Option<usize>,
    kernel: Option<KernelSpec>,
    heat: Option<HeatKernelSpec>,
    weighting: Option<WeightingMode>,
    epsilon: Option<f64>,
}

fn parse_value<T: std::str::FromStr>(value: &str, line: usize, key: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config {
        line,
        message: format!("bad value `{value}` for `{key}`"),
    })
}

fn parse_list<T: std::str::FromStr>(value: &str, line: usize, key: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(s, line, key))
        .collect()
}

fn at_line(line: usize) -> impl Fn(Error) -> Error {
    move |e| Error::Config {
        line,
        message: e.to_string(),
    }
}

impl RawConfig {
    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        match key {
            "dataset" => self.dataset = Some((value.to_string(), line)),
            "name" => self.name = Some(value.to_string()),
            "label_column" => self.label_column = Some(value.to_string()),
            "missing_label_token" => self.missing_label_token = Some(value.to_string()),
            "csv_header" => self.csv_header = Some(parse_value(value, line, key)?),
            "toy_n" => self.toy_n = Some(parse_value(value, line, key)?),
            "toy_noise" => self.toy_noise = Some(parse_value(value, line, key)?),
            "toy_seed" => self.toy_seed = Some(parse_value(value, line, key)?),
            "labeled" => self.labeled = Some(parse_value(value, line, key)?),
            "unlabeled" => self.unlabeled = Some(parse_value(value, line, key)?),
            "transductive" => self.transductive = Some(parse_value(value, line, key)?),
            "test" => self.test = Some(parse_value(value, line, key)?),
            "realizations" => self.realizations = Some(parse_value(value, line, key)?),
            "per_class_labels" => self.per_class_labels = Some(parse_value(value, line, key)?),
            "seed" => self.seed = Some(parse_value(value, line, key)?),
            "learners" => {
                let names = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty());
                self.learners = Some((names.collect(), line));
            }
            "gamma_grid" => self.gamma_grid = Some(parse_list(value, line, key)?),
            "alpha_grid" => self.alpha_grid = Some(parse_list(value, line, key)?),
            "folds" => self.folds = Some(parse_value(value, line, key)?),
            "eval_k" => self.eval_k = Some(parse_value(value, line, key)?),
            "dim" => self.dim = Some(parse_value(value, line, key)?),
            "k" => self.k = Some(parse_value(value, line, key)?),
            "kernel" => self.kernel = Some(value.parse().map_err(at_line(line))?),
            "heat" => self.heat = Some(value.parse().map_err(at_line(line))?),
            "weighting" => self.weighting = Some(value.parse().map_err(at_line(line))?),
            "epsilon" => self.epsilon = Some(parse_value(value, line, key)?),
            _ => {
                return Err(Error::Config {
                    line,
                    message: format!("unknown key `{key}`"),
                })
            }
        }
        Ok(())
    }

    fn build(self, base_dir: Option<&Path>) -> Result<ExperimentConfig> {
        let missing = |key: &str| Error::Config {
            line: 0,
            message: format!("missing required key `{key}`"),
        };
        let (dataset, dataset_line) = self.dataset.ok_or_else(|| missing("dataset"))?;
        let source = if let Some(gen) = dataset.strip_prefix("generator:") {
            if gen == "balance" {
                DatasetSource::Balance
            } else {
                DatasetSource::Toy {
                    kind: gen.parse().map_err(at_line(dataset_line))?,
                    n_per_cluster: self.toy_n.unwrap_or(100),
                    noise: self.toy_noise.unwrap_or(1.0),
                    seed: self.toy_seed.unwrap_or(0),
                }
            }
        } else {
            let path = PathBuf::from(&dataset);
            let path = match base_dir {
                Some(dir) if path.is_relative() => dir.join(path),
                _ => path,
            };
            DatasetSource::Csv {
                path,
                options: CsvOptions {
                    label_column: self.label_column.unwrap_or_else(|| "class".to_string()),
                    missing_label_token: self.missing_label_token.unwrap_or_default(),
                    has_headers: self.csv_header.unwrap_or(true),
                },
            }
        };

        let labeled = self.labeled.ok_or_else(|| missing("labeled"))?;
        let seed = self.seed.unwrap_or(0);
        let transductive = self.transductive.unwrap_or(self.unlabeled.is_none());
        let mut split = if transductive {
            if self.unlabeled.is_some() || self.test.is_some() {
                return Err(Error::Config {
                    line: 0,
                    message: "transductive splits take no `unlabeled` or `test` size".into(),
                });
            }
            SplitSpec::transductive(labeled, seed)
        } else {
            let u = self.unlabeled.ok_or_else(|| missing("unlabeled"))?;
            SplitSpec::inductive(labeled, u, self.test, seed)
        };
        split.realizations = self.realizations.unwrap_or(25);
        split.per_class_labels = self.per_class_labels.unwrap_or(false);

        let (names, learners_line) = self.learners.ok_or_else(|| missing("learners"))?;
        let mut learners = Vec::with_capacity(names.len());
        for name in names {
            let mut spec = LearnerSpec::preset(&name).map_err(at_line(learners_line))?;
            spec.dim = self.dim.unwrap_or(1);
            spec.k = self.k;
            spec.kernel = self.kernel;
            spec.epsilon = self.epsilon;
            if let Some(w) = self.weighting {
                spec.weighting = w;
            }
            if let Some(h) = self.heat {
                spec = spec.with_heat(h);
            }
            learners.push(spec);
        }

        let name = self.name.unwrap_or_else(|| source.name());
        let cfg = ExperimentConfig {
            name,
            source,
            split,
            learners,
            gamma_grid: self
                .gamma_grid
                .unwrap_or_else(|| DEFAULT_GAMMA_GRID.to_vec()),
            alpha_grid: self
                .alpha_grid
                .unwrap_or_else(|| DEFAULT_ALPHA_GRID.to_vec()),
            folds: self.folds.unwrap_or(DEFAULT_FOLDS),
            eval_k: self.eval_k.unwrap_or(1),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let text = "\
# toy run
dataset = generator:two-cluster
toy_n = 40
toy_noise = 0.5
labeled = 10
per_class_labels = true
realizations = 3
seed = 9
learners = FDA, SS-LFDA   # trailing comment
gamma_grid = 0.1, 1
alpha_grid = 1, 2
dim = 1
heat = local:5
weighting = T2
";
        let c = ExperimentConfig::parse(text, None).unwrap();
        assert_eq!(c.name, "two-cluster");
        assert_eq!(
            c.source,
            DatasetSource::Toy {
                kind: ToyKind::TwoCluster,
                n_per_cluster: 40,
                noise: 0.5,
                seed: 0
            }
        );
        assert!(c.split.is_transductive() && c.split.per_class_labels);
        assert_eq!(
            (c.split.labeled, c.split.realizations, c.split.seed),
            (10, 3, 9)
        );
        assert_eq!(c.learners.len(), 2);
        assert_eq!(c.learners[1].name, "SS-LFDA");
        assert_eq!(c.learners[1].weighting, WeightingMode::UnitRows);
        assert_eq!(
            c.learners[1].unlabel,
            crate::learner::UnlabelCost::Heat(HeatKernelSpec::local(5))
        );
        assert_eq!(c.gamma_grid, vec![0.1, 1.0]);
        assert_eq!(c.alpha_grid, vec![1, 2]);
    }

    #[test]
    fn csv_paths_resolve_against_config_dir() {
        let text = "dataset = data/iono.csv\nlabeled = 10\nunlabeled = 100\nlearners = DNE\nlabel_column = y\ncsv_header = false\n";
        let c = ExperimentConfig::parse(text, Some(Path::new("/cfg"))).unwrap();
        match &c.source {
            DatasetSource::Csv { path, options } => {
                assert_eq!(path, Path::new("/cfg/data/iono.csv"));
                assert_eq!(options.label_column, "y");
                assert!(!options.has_headers);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(c.name, "iono");
        assert!(!c.split.is_transductive());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err =
            ExperimentConfig::parse("dataset = generator:balance\nbogus = 1\n", None).unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }), "{err}");
        let err = ExperimentConfig::parse("dataset = generator:balance\nlabeled = x\n", None)
            .unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }));
        let err = ExperimentConfig::parse("labeled = 3\nlearners = DNE\n", None).unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
        let err = ExperimentConfig::parse(
            "dataset = generator:balance\nlabeled = 3\nlearners = NOPE\n",
            None,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config { line: 3, .. }));
    }

    #[test]
    fn empty_tuned_grid_is_rejected() {
        let text = "dataset = generator:balance\nlabeled = 30\nlearners = SS-DNE\ngamma_grid = \n";
        assert!(ExperimentConfig::parse(text, None).is_err());
        let text = "dataset = generator:balance\nlabeled = 30\nlearners = DNE\ngamma_grid = \n";
        assert!(ExperimentConfig::parse(text, None).is_ok());
    }
}
