use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Dataset;
use crate::error::{Error, Result};

/// Sizes and seeding of the labeled / unlabeled / test partition.
///
/// `unlabeled: None` selects the transductive setting: every example that is
/// not labeled becomes unlabeled and is also the evaluation set.
/// `test: None` in the inductive setting takes every remaining example.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSpec {
    pub labeled: usize,
    pub unlabeled: Option<usize>,
    pub test: Option<usize>,
    pub seed: u64,
    pub realizations: usize,
    pub per_class_labels: bool,
}

impl SplitSpec {
    pub fn transductive(labeled: usize, seed: u64) -> Self {
        Self {
            labeled,
            unlabeled: None,
            test: None,
            seed,
            realizations: 25,
            per_class_labels: false,
        }
    }

    pub fn inductive(labeled: usize, unlabeled: usize, test: Option<usize>, seed: u64) -> Self {
        Self {
            labeled,
            unlabeled: Some(unlabeled),
            test,
            seed,
            realizations: 25,
            per_class_labels: false,
        }
    }

    pub fn with_realizations(mut self, realizations: usize) -> Self {
        self.realizations = realizations;
        self
    }

    pub fn with_per_class_labels(mut self, on: bool) -> Self {
        self.per_class_labels = on;
        self
    }

    pub fn is_transductive(&self) -> bool {
        self.unlabeled.is_none()
    }
}

/// Disjoint, ascending index sets of one realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub labeled: Vec<usize>,
    pub unlabeled: Vec<usize>,
    pub test: Vec<usize>,
    transductive: bool,
}

impl SplitIndices {
    /// Training columns: labeled followed by unlabeled.
    pub fn training(&self) -> Vec<usize> {
        self.labeled
            .iter()
            .chain(&self.unlabeled)
            .copied()
            .collect()
    }

    /// Indices whose predicted labels are scored: the unlabeled set in the
    /// transductive setting, the test set otherwise.
    pub fn evaluation(&self) -> &[usize] {
        if self.transductive {
            &self.unlabeled
        } else {
            &self.test
        }
    }

    pub fn is_transductive(&self) -> bool {
        self.transductive
    }
}

pub fn split(d: &Dataset, spec: &SplitSpec, realization: usize) -> Result<SplitIndices> {
    if realization >= spec.realizations {
        return Err(Error::Split(format!(
            "realization {realization} out of range 0..{}",
            spec.realizations
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(realization as u64);

    let c = d.n_classes();
    let mut labeled = if spec.per_class_labels {
        if spec.labeled < c || !spec.labeled.is_multiple_of(c) {
            return Err(Error::Split(format!(
                "per-class labeling needs a multiple of {c} labels, got {}",
                spec.labeled
            )));
        }
        let per_class = spec.labeled / c;
        let mut chosen = Vec::with_capacity(spec.labeled);
        for class in 0..c {
            let mut members: Vec<usize> = (0..d.len())
                .filter(|&i| d.labels()[i] == Some(class))
                .collect();
            if members.len() < per_class {
                return Err(Error::Split(format!(
                    "class {} has {} labeled examples, {per_class} required",
                    d.class_names()[class],
                    members.len()
                )));
            }
            members.shuffle(&mut rng);
            chosen.extend_from_slice(&members[..per_class]);
        }
        chosen
    } else {
        let mut eligible: Vec<usize> = (0..d.len()).filter(|&i| d.labels()[i].is_some()).collect();
        if eligible.len() < spec.labeled {
            return Err(Error::Split(format!(
                "{} labels requested, {} labeled examples available",
                spec.labeled,
                eligible.len()
            )));
        }
        eligible.shuffle(&mut rng);
        eligible.truncate(spec.labeled);
        eligible
    };
    labeled.sort_unstable();

    let mut is_labeled = vec![false; d.len()];
    for &i in &labeled {
        is_labeled[i] = true;
    }
    let mut rest: Vec<usize> = (0..d.len()).filter(|&i| !is_labeled[i]).collect();
    rest.shuffle(&mut rng);

    let (mut unlabeled, mut test) = match spec.unlabeled {
        None => (rest, Vec::new()),
        Some(u) => {
            let t = spec.test.unwrap_or(rest.len().saturating_sub(u));
            if u + t > rest.len() {
                return Err(Error::Split(format!(
                    "l + u + t = {} exceeds dataset size {}",
                    spec.labeled + u + t,
                    d.len()
                )));
            }
            let test = rest[u..u + t].to_vec();
            rest.truncate(u);
            (rest, test)
        }
    };
    unlabeled.sort_unstable();
    test.sort_unstable();
    Ok(SplitIndices {
        labeled,
        unlabeled,
        test,
        transductive: spec.is_transductive(),
    })
}
