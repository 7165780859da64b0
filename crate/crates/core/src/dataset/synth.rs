//! Synthetic datasets: the balance-scale rule and three 2-D toy geometries.

use std::str::FromStr;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{ClassId, Dataset};
use crate::error::{Error, Result};

/// Class names of [`generate_balance`], in class-id order.
pub const BALANCE_CLASSES: [&str; 3] = ["B", "L", "R"];

/// All 5^4 combinations of (left_weight, left_distance, right_weight,
/// right_distance) in 1..=5, the first attribute varying slowest. The class
/// is the side with the larger weight × distance moment, or balanced.
pub fn generate_balance() -> Dataset {
    let mut values = Vec::with_capacity(625 * 4);
    let mut labels = Vec::with_capacity(625);
    for lw in 1..=5u32 {
        for ld in 1..=5u32 {
            for rw in 1..=5u32 {
                for rd in 1..=5u32 {
                    values.extend([lw, ld, rw, rd].map(f64::from));
                    let class = match (lw * ld).cmp(&(rw * rd)) {
                        std::cmp::Ordering::Equal => 0,
                        std::cmp::Ordering::Greater => 1,
                        std::cmp::Ordering::Less => 2,
                    };
                    labels.push(class);
                }
            }
        }
    }
    let x = DMatrix::from_vec(4, 625, values);
    Dataset::labeled(x, labels, 3)
        .and_then(|d| d.with_class_names(BALANCE_CLASSES.map(String::from).to_vec()))
        .and_then(|d| {
            d.with_feature_names(
                [
                    "left_weight",
                    "left_distance",
                    "right_weight",
                    "right_distance",
                ]
                .map(String::from)
                .to_vec(),
            )
        })
        .expect("balance dataset is well formed")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ToyKind {
    /// Two well separated clusters that each hold one blob of each class;
    /// both classes are bimodal with coinciding means, so a global
    /// within/between scatter criterion finds no discriminative axis.
    TwoCluster,
    /// One class split into two clusters flanking the other; all clusters
    /// are stretched across the discriminative axis.
    ThreeCluster,
    /// Labels alone and the unlabeled neighborhood graph alone each point
    /// to a wrong axis; only their combination recovers the right one.
    SslOnly,
}

impl ToyKind {
    pub const ALL: [ToyKind; 3] = [ToyKind::TwoCluster, ToyKind::ThreeCluster, ToyKind::SslOnly];

    pub fn name(self) -> &'static str {
        match self {
            ToyKind::TwoCluster => "two-cluster",
            ToyKind::ThreeCluster => "three-cluster",
            ToyKind::SslOnly => "ssl-only",
        }
    }
}

impl FromStr for ToyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ToyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid("kind", format!("unknown toy kind `{s}`")))
    }
}

/// One Gaussian component of a toy: a center, per-axis standard deviations
/// (scaled by the caller's noise level) and a class.
struct Component {
    center: [f64; 2],
    spread: [f64; 2],
    class: ClassId,
}

// Geometry constants. Units are arbitrary; spreads are the per-axis
// standard deviations at noise 1.
const TWO_CLUSTER_HALF_GAP: f64 = 4.0;
const TWO_CLUSTER_BLOB_OFFSET: f64 = 1.0;
const TWO_CLUSTER_SPREAD: [f64; 2] = [0.3, 0.3];
const TWO_CLUSTER_CLASS_SHIFT: f64 = 0.1;

const THREE_CLUSTER_SPACING: f64 = 3.0;
const THREE_CLUSTER_SPREAD: [f64; 2] = [0.1, 3.0];

const SSL_ONLY_HALF_GAP: f64 = 4.0;
const SSL_ONLY_SPREAD: [f64; 2] = [2.0, 0.05];

fn components(kind: ToyKind) -> Vec<Component> {
    let comp = |x: f64, spread: [f64; 2], class: ClassId| Component {
        center: [x, 0.0],
        spread,
        class,
    };
    let shifted = |x: f64, y: f64, spread: [f64; 2], class: ClassId| Component {
        center: [x, y],
        spread,
        class,
    };
    match kind {
        // Clusters at x = ±4, each made of two blobs at ±1 around its center:
        // classes along x read A B | B A. The small shift in y gives the
        // class means a consistent, useless offset for a global Fisher ratio
        // to latch onto.
        ToyKind::TwoCluster => {
            let (g, o, s) = (
                TWO_CLUSTER_HALF_GAP,
                TWO_CLUSTER_BLOB_OFFSET,
                TWO_CLUSTER_SPREAD,
            );
            let dy = TWO_CLUSTER_CLASS_SHIFT;
            vec![
                shifted(-g - o, dy, s, 0),
                shifted(-g + o, -dy, s, 1),
                shifted(g - o, -dy, s, 1),
                shifted(g + o, dy, s, 0),
            ]
        }
        // Class 1 at x = ±3, class 0 at x = 0; every cluster is thin in x and
        // long in y, the direction of largest variance.
        ToyKind::ThreeCluster => {
            let (g, s) = (THREE_CLUSTER_SPACING, THREE_CLUSTER_SPREAD);
            vec![comp(-g, s, 1), comp(0.0, s, 0), comp(g, s, 1)]
        }
        // One long thin cluster per class, end to end along x. The local
        // graph squeezes both onto y, where the classes coincide; a handful
        // of labels pins down x only up to the near-zero spread in y, which
        // an unregularized Fisher ratio amplifies.
        ToyKind::SslOnly => {
            let (g, s) = (SSL_ONLY_HALF_GAP, SSL_ONLY_SPREAD);
            vec![comp(-g, s, 0), comp(g, s, 1)]
        }
    }
}

/// Points per cluster are split evenly between that cluster's components.
pub fn generate_multimodal_toy(
    kind: ToyKind,
    n_per_cluster: usize,
    noise: f64,
    seed: u64,
) -> Result<Dataset> {
    if n_per_cluster < 2 {
        return Err(Error::invalid(
            "n_per_cluster",
            "at least 2 points per cluster",
        ));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(Error::invalid(
            "noise",
            format!("{noise} is not a finite stddev"),
        ));
    }
    let comps = components(kind);
    let clusters = cluster_count(kind);
    let total = n_per_cluster * clusters;
    let per_comp = split_evenly(total, comps.len());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let mut values = Vec::with_capacity(2 * total);
    let mut labels = Vec::with_capacity(total);
    for (comp, &count) in comps.iter().zip(&per_comp) {
        for _ in 0..count {
            for axis in 0..2 {
                let z: f64 = unit.sample(&mut rng);
                values.push(comp.center[axis] + noise * comp.spread[axis] * z);
            }
            labels.push(comp.class);
        }
    }
    let x = DMatrix::from_vec(2, total, values);
    Dataset::labeled(x, labels, 2)
}

fn cluster_count(kind: ToyKind) -> usize {
    match kind {
        ToyKind::TwoCluster => 2,
        ToyKind::ThreeCluster => 3,
        ToyKind::SslOnly => 2,
    }
}

fn split_evenly(total: usize, parts: usize) -> Vec<usize> {
    (0..parts)
        .map(|i| total / parts + usize::from(i < total % parts))
        .collect()
}

/// Index of the generating component of every example, in output order.
pub fn toy_components(kind: ToyKind, n_per_cluster: usize) -> Vec<usize> {
    let comps = components(kind).len();
    split_evenly(n_per_cluster * cluster_count(kind), comps)
        .into_iter()
        .enumerate()
        .flat_map(|(c, count)| std::iter::repeat_n(c, count))
        .collect()
}
