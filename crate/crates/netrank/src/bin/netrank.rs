//! Command-line front end: simulate panels, rank them, evaluate
//! reconstructions, run sweeps, and benchmark the engines.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use netrank::dynamics::{
    add_observation_noise, generate_er_network, mean_pairwise_correlation, simulate,
};
use netrank::error::{Error, Result};
use netrank::evaluation::{confusion, correlation_baseline, roc_auc, threshold_adjacency};
use netrank::experiment::{
    aggregate, bench_scaling, run_experiment, run_seeds, EngineKind, ExperimentSpec,
};
use netrank::io::{
    panel_fingerprint, read_adjacency, read_importance_csv, read_panel_csv, write_adjacency,
    write_aggregate_csv, write_bench_csv, write_confusion_csv, write_importance_csv,
    write_importance_meta, write_panel_csv, write_panel_meta, write_records_csv, write_roc_csv,
    ImportanceMeta, PanelMeta,
};
use netrank::ranking::{rank_all_nodes, ForestConfig, RankingEngine, RelieffConfig};

#[derive(Parser)]
#[command(
    name = "netrank",
    version,
    about = "Reconstruct interaction networks from chaotic time series"
)]
struct Cli {
    /// Worker threads for simulation and ranking (default: one per core).
    /// Results are identical for any value.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

/// `--config` plus the flag overrides shared by every subcommand. Flags win
/// over the config file; grid flags replace the whole grid.
#[derive(Args, Clone, Default)]
struct SpecArgs {
    /// TOML experiment description; missing fields take defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// System sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Coupling strengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    /// Series lengths, comma separated.
    #[arg(long = "length", value_delimiter = ',')]
    lengths: Vec<usize>,
    /// Observation noise levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    sigma: Vec<f64>,
    /// Engines (forest, relieff, corr-baseline), comma separated.
    #[arg(long = "engine", value_delimiter = ',')]
    engines: Vec<String>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; its meaning per subcommand is described there.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SpecArgs {
    fn resolve(&self) -> Result<ExperimentSpec> {
        let mut spec = match &self.config {
            Some(path) => toml::from_str(&fs::read_to_string(path)?)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
            None => ExperimentSpec::default(),
        };
        if !self.n.is_empty() {
            spec.n = self.n.clone();
        }
        if !self.eps.is_empty() {
            spec.eps = self.eps.clone();
        }
        if !self.lengths.is_empty() {
            spec.lengths = self.lengths.clone();
        }
        if !self.sigma.is_empty() {
            spec.sigma = self.sigma.clone();
        }
        if !self.engines.is_empty() {
            spec.engines = self
                .engines
                .iter()
                .map(|s| EngineKind::parse(s))
                .collect::<Result<Vec<_>>>()?;
        }
        if let Some(seed) = self.seed {
            spec.seed = seed;
        }
        if let Some(out) = &self.out {
            spec.out = Some(out.clone());
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one panel (the first value of every grid) and write it with
    /// its provenance sidecar and the truth network. --out names a directory
    /// (default `.`): writes panel.csv, panel.csv.meta.json, graph.txt.
    Simulate {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Score a panel with exactly one engine and write the importance matrix
    /// plus its sidecar. --out names the CSV (default `scores.csv`).
    Rank {
        /// Panel CSV produced by `simulate`.
        panel: PathBuf,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// ROC curve and AUC of a score matrix against a truth network.
    /// --out names the curve CSV (default `roc.csv`).
    Evaluate {
        /// Importance CSV produced by `rank`.
        scores: PathBuf,
        /// Truth network in edge-list form.
        truth: PathBuf,
        /// Also binarize the scores at this threshold and report counts.
        #[arg(long)]
        theta: Option<f64>,
        /// Where the labeled counts go (with --theta).
        #[arg(long, requires = "theta")]
        confusion_out: Option<PathBuf>,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Run the full sweep; write one record per run plus the aggregate
    /// table. --out names the records CSV (default `records.csv`); the
    /// aggregate lands next to it as `<stem>.aggregate.csv`.
    Sweep {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Time the ranking step across system sizes (first length grid value)
    /// and fit a log-log slope per engine. --out names the CSV
    /// (default `bench.csv`).
    Bench {
        #[command(flatten)]
        spec: SpecArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Simulate { spec } => cmd_simulate(&spec.resolve()?),
        Command::Rank { panel, spec } => cmd_rank(&panel, &spec.resolve()?),
        Command::Evaluate {
            scores,
            truth,
            theta,
            confusion_out,
            spec,
        } => cmd_evaluate(
            &scores,
            &truth,
            theta,
            confusion_out.as_deref(),
            &spec.resolve()?,
        ),
        Command::Sweep { spec } => cmd_sweep(&spec.resolve()?),
        Command::Bench { spec } => cmd_bench(&spec.resolve()?),
    }
}

fn cmd_simulate(spec: &ExperimentSpec) -> Result<()> {
    let (n, eps, length, sigma) = (spec.n[0], spec.eps[0], spec.lengths[0], spec.sigma[0]);
    let seeds = run_seeds(spec.seed, n, eps, length, sigma, 0);
    let truth = generate_er_network(n, spec.rho, seeds.graph)?;
    let clean = simulate(&truth, spec.map, eps, length, spec.transient, seeds.ic)?;
    let panel = if sigma > 0.0 {
        add_observation_noise(&clean, sigma, seeds.noise)?
    } else {
        clean
    };

    let dir = spec.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let panel_path = dir.join("panel.csv");
    write_panel_csv(&panel_path, &panel)?;
    write_panel_meta(
        &panel_path,
        &PanelMeta {
            map: spec.map,
            n,
            eps,
            length,
            sigma,
            rho: spec.rho,
            transient: spec.transient,
            graph_seed: seeds.graph,
            ic_seed: seeds.ic,
            noise_seed: seeds.noise,
        },
    )?;
    write_adjacency(dir.join("graph.txt"), &truth)?;

    match mean_pairwise_correlation(&panel) {
        Ok(c) => println!(
            "simulated {} nodes x {} steps ({} map, eps {eps}, sigma {sigma}); \
             {} links; mean |corr| {c:.4}",
            n,
            length,
            spec.map.name(),
            truth.n_links(),
        ),
        Err(_) => println!(
            "simulated {} nodes x {} steps ({} map, eps {eps}, sigma {sigma}); {} links",
            n,
            length,
            spec.map.name(),
            truth.n_links(),
        ),
    }
    println!(
        "wrote {}, its sidecar, and {}",
        panel_path.display(),
        dir.join("graph.txt").display()
    );
    Ok(())
}

fn cmd_rank(panel_path: &Path, spec: &ExperimentSpec) -> Result<()> {
    if spec.engines.len() != 1 {
        return Err(Error::Config(format!(
            "rank needs exactly one engine, got {}; pass --engine",
            spec.engines.len()
        )));
    }
    let kind = spec.engines[0];
    let panel = read_panel_csv(panel_path)?;
    let seed = spec.seed;
    let (engine, config) = match kind {
        EngineKind::Forest => {
            let cfg = ForestConfig {
                seed,
                ..spec.forest.clone()
            };
            let value = serde_json::to_value(&cfg)?;
            (Some(RankingEngine::Forest(cfg)), value)
        }
        EngineKind::Relieff => {
            let cfg = RelieffConfig {
                seed,
                ..spec.relieff.clone()
            };
            let value = serde_json::to_value(&cfg)?;
            (Some(RankingEngine::Relieff(cfg)), value)
        }
        EngineKind::CorrBaseline => (None, serde_json::json!({})),
    };
    let scores = match &engine {
        Some(engine) => rank_all_nodes(&panel, engine)?,
        None => correlation_baseline(&panel)?,
    };
    let out = spec
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("scores.csv"));
    write_importance_csv(&out, &scores)?;
    write_importance_meta(
        &out,
        &ImportanceMeta {
            engine: kind.name().to_string(),
            config,
            seed,
            panel_hash: panel_fingerprint(&panel),
        },
    )?;
    println!(
        "ranked {} nodes with {kind} (seed {seed}); wrote {} and its sidecar",
        scores.n(),
        out.display()
    );
    Ok(())
}

fn cmd_evaluate(
    scores_path: &Path,
    truth_path: &Path,
    theta: Option<f64>,
    confusion_out: Option<&Path>,
    spec: &ExperimentSpec,
) -> Result<()> {
    let scores = read_importance_csv(scores_path)?;
    let truth = read_adjacency(truth_path)?;
    let roc = roc_auc(&scores, &truth)?;
    let out = spec.out.clone().unwrap_or_else(|| PathBuf::from("roc.csv"));
    write_roc_csv(&out, &roc)?;
    println!(
        "auc {:.6} over {} curve points; wrote {}",
        roc.auc,
        roc.points.len(),
        out.display()
    );
    if let Some(theta) = theta {
        let predicted = threshold_adjacency(&scores, theta)?;
        let counts = confusion(&predicted, &truth)?;
        println!(
            "theta {theta}: tp {} fn {} fp {} tn {} (tpr {:.4}, fpr {:.4})",
            counts.true_positives,
            counts.false_negatives,
            counts.false_positives,
            counts.true_negatives,
            counts.tpr(),
            counts.fpr(),
        );
        if let Some(path) = confusion_out {
            write_confusion_csv(path, &counts)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn aggregate_path(records_path: &Path) -> PathBuf {
    let mut path = records_path.to_path_buf();
    path.set_extension("aggregate.csv");
    path
}

fn fmt_cell(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.4}"))
        .unwrap_or_else(|| String::from("-"))
}

fn cmd_sweep(spec: &ExperimentSpec) -> Result<()> {
    let records = run_experiment(spec)?;
    let out = spec
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("records.csv"));
    write_records_csv(&out, &records)?;
    let rows = aggregate(&records)?;
    let agg_out = aggregate_path(&out);
    write_aggregate_csv(&agg_out, &rows)?;

    let failures = records.iter().filter(|r| r.error.is_some()).count();
    println!(
        "{} runs ({} failed); wrote {} and {}",
        records.len(),
        failures,
        out.display(),
        agg_out.display()
    );
    for row in &rows {
        println!(
            "n {:>3}  eps {:<5}  L {:>6}  sigma {:<5}  {:<13}  auc {} +- {}  ({}/{} ok)",
            row.n,
            row.eps,
            row.length,
            row.sigma,
            row.engine.name(),
            fmt_cell(row.auc_mean),
            fmt_cell(row.auc_std),
            row.n_ok,
            row.n_runs,
        );
    }
    Ok(())
}

fn cmd_bench(spec: &ExperimentSpec) -> Result<()> {
    let report = bench_scaling(&spec.n, spec.lengths[0], &spec.engines, spec.seed)?;
    let out = spec
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("bench.csv"));
    write_bench_csv(&out, &report)?;
    for sample in &report.samples {
        println!(
            "n {:>3}  {:<13}  {:.4}s",
            sample.n,
            sample.engine.name(),
            sample.seconds
        );
    }
    for (engine, slope) in &report.slopes {
        println!("{engine}: log-log slope {slope:.3}");
    }
    println!("wrote {}", out.display());
    Ok(())
}
