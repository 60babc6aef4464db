//! Wall-clock scaling of the engines with system size at fixed series
//! length. The log-log slope summarizes the growth law; the nearest-neighbor
//! engine stays close to linear because the neighbor search is shared across
//! all node problems.

use netrank::experiment::{bench_scaling, EngineKind};

fn main() -> netrank::Result<()> {
    let report = bench_scaling(
        &[12, 25, 50],
        200,
        &[
            EngineKind::Forest,
            EngineKind::Relieff,
            EngineKind::CorrBaseline,
        ],
        7,
    )?;

    println!("{:>4}  {:<13}  {:>9}", "n", "engine", "seconds");
    for s in &report.samples {
        println!("{:>4}  {:<13}  {:>9.4}", s.n, s.engine.name(), s.seconds);
    }
    println!();
    for (engine, slope) in &report.slopes {
        println!("{engine}: time ~ n^{slope:.2}");
    }
    Ok(())
}
