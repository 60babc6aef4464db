//! The cheapest reconstruction: score driver j for target i by the absolute
//! Pearson correlation between j's series and i's next value. It is a real
//! competitor in weakly coupled regimes and a useful sanity floor for the
//! model-based engines.

use netrank::dynamics::{generate_er_network, simulate, MapKind};
use netrank::evaluation::{correlation_baseline, roc_auc};
use netrank::ranking::{rank_all_nodes, RankingEngine, RelieffConfig};

fn main() -> netrank::Result<()> {
    let truth = generate_er_network(20, 0.1, 13)?;

    println!("{:>6}  {:>10}  {:>8}", "eps", "baseline", "relieff");
    for eps in [0.05, 0.25, 0.5, 0.8] {
        let panel = simulate(&truth, MapKind::logistic(4.0), eps, 1500, 1000, 6)?;
        let base = roc_auc(&correlation_baseline(&panel)?, &truth)?.auc;
        let scores = rank_all_nodes(&panel, &RankingEngine::Relieff(RelieffConfig::default()))?;
        let relieff = roc_auc(&scores, &truth)?.auc;
        println!("{eps:>6}  {base:>10.4}  {relieff:>8.4}");
    }
    println!("\nthe baseline holds its own at moderate coupling; the gap opens as coupling grows");
    Ok(())
}
