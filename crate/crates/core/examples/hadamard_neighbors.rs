//! Shows how the Hadamard power sharpens a heat-kernel graph: the Frobenius
//! norm is kept and weight moves to the strongest pairs. The top-pair
//! ranking, and so the good-nearby ratio, does not change with the power;
//! the share of total weight on same-class pairs does.
//!
//! cargo run --example hadamard_neighbors

use ssdr::costs::{hadamard_power, heat_kernel_costs, HeatKernelSpec};
use ssdr::dataset::{center_columns, generate_multimodal_toy, ToyKind};
use ssdr::knn::{good_nearby_ratio, good_neighbors_score, threshold_for_top_pairs};
use ssdr::Result;

fn main() -> Result<()> {
    let d = generate_multimodal_toy(ToyKind::TwoCluster, 50, 1.0, 2)?;
    let labels: Vec<_> = d.labels().iter().map(|y| y.unwrap()).collect();
    println!(
        "good neighbors (LOO 1-NN): {:.3}",
        good_neighbors_score(&d, None)?
    );

    let cu = heat_kernel_costs(&center_columns(d.x()).0, &HeatKernelSpec::local(7))?;
    let top = 5 * d.len();
    println!("alpha\tfrobenius\tmax\tgood_nearby@{top}\tsame_class_weight");
    for alpha in [1, 2, 4, 8] {
        let c = hadamard_power(&cu, alpha)?;
        let t = threshold_for_top_pairs(&c, top);
        let max = c.entries().max();
        let (mut same, mut total) = (0.0, 0.0);
        for i in 0..d.len() {
            for j in 0..i {
                total += c.get(i, j);
                if labels[i] == labels[j] {
                    same += c.get(i, j);
                }
            }
        }
        println!(
            "{alpha}\t{:.4}\t{max:.4}\t{:.3}\t{:.3}",
            c.frobenius_norm(),
            good_nearby_ratio(&c, &labels, t)?,
            same / total
        );
    }
    Ok(())
}
