//! Anatomy of an ROC curve: sweep every achievable threshold over a score
//! matrix, trace (fpr, tpr) from (0,0) to (1,1), and integrate. The same
//! number falls out of the Mann-Whitney rank statistic, which the library
//! cross-checks internally on every call.

use netrank::dynamics::{generate_er_network, simulate, MapKind};
use netrank::evaluation::{confusion, roc_auc, threshold_adjacency, tpr_fpr};
use netrank::ranking::{rank_all_nodes, RankingEngine, RelieffConfig};

fn main() -> netrank::Result<()> {
    let truth = generate_er_network(8, 0.25, 3)?;
    let panel = simulate(&truth, MapKind::logistic(4.0), 0.5, 300, 1000, 5)?;
    let scores = rank_all_nodes(&panel, &RankingEngine::Relieff(RelieffConfig::default()))?;

    let roc = roc_auc(&scores, &truth)?;
    println!("{} curve points, auc {:.4}\n", roc.points.len(), roc.auc);
    println!("{:>12}  {:>6}  {:>6}", "threshold", "fpr", "tpr");
    for &(theta, fpr, tpr) in roc.points.iter().take(8) {
        println!("{theta:>12.5}  {fpr:>6.3}  {tpr:>6.3}");
    }
    println!("{:>12}", "...");

    // Each curve point corresponds to a hard reconstruction. Picking one
    // threshold gives a confusion table; its (fpr, tpr) sits on the curve.
    let theta = roc.points[roc.points.len() / 2].0;
    let predicted = threshold_adjacency(&scores, theta)?;
    let counts = confusion(&predicted, &truth)?;
    let (tpr, fpr) = tpr_fpr(&scores, &truth, theta)?;
    println!(
        "\ntheta {theta:.5}: tp {} fn {} fp {} tn {} -> point ({fpr:.3}, {tpr:.3})",
        counts.true_positives,
        counts.false_negatives,
        counts.false_positives,
        counts.true_negatives,
    );
    Ok(())
}
