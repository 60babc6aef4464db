//! File formats: trajectory panels, graphs, score matrices, ROC curves, and
//! sweep outputs.
//!
//! Floats are written in shortest round-trip form, so reading a file back
//! reproduces the exact values, and identical results serialize to identical
//! bytes. Panels and score matrices carry a JSON sidecar (`<file>.meta.json`)
//! with their generation provenance.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{AdjacencyMatrix, MapKind, TrajectoryPanel};
use crate::error::{Error, Result};
use crate::evaluation::{ConfusionCounts, RocResult};
use crate::experiment::{AggregateRow, BenchReport, EngineKind, RunRecord};
use crate::ranking::{ImportanceMatrix, ImportanceScores};

fn format_error(path: &Path, reason: impl Into<String>) -> Error {
    Error::Format {
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

/// `{}` on f64 prints the shortest string that parses back to the same bits.
fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn parse_field<T: FromStr>(path: &Path, raw: &str, what: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| format_error(path, format!("bad {what} {raw:?}")))
}

fn parse_opt(path: &Path, raw: &str, what: &str) -> Result<Option<f64>> {
    if raw.is_empty() {
        Ok(None)
    } else {
        parse_field(path, raw, what).map(Some)
    }
}

/// Sidecar path for a data file: `runs/panel.csv` -> `runs/panel.csv.meta.json`.
pub fn meta_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn node_header(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("node_{i}")).collect()
}

fn check_node_header(path: &Path, headers: &csv::StringRecord) -> Result<usize> {
    let n = headers.len();
    for (i, h) in headers.iter().enumerate() {
        if h != format!("node_{i}") {
            return Err(format_error(
                path,
                format!("expected column node_{i}, found {h:?}"),
            ));
        }
    }
    Ok(n)
}

// ---- trajectory panels ----

/// Generation provenance stored next to a panel file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PanelMeta {
    pub map: MapKind,
    pub n: usize,
    pub eps: f64,
    pub length: usize,
    pub sigma: f64,
    pub rho: f64,
    pub transient: usize,
    pub graph_seed: u64,
    pub ic_seed: u64,
    pub noise_seed: u64,
}

/// One column per node (`node_0, ..., node_{N-1}`), one row per time step.
pub fn write_panel_csv(path: impl AsRef<Path>, panel: &TrajectoryPanel) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    writer.write_record(node_header(panel.n_nodes()))?;
    for t in 0..panel.n_steps() {
        writer.write_record((0..panel.n_nodes()).map(|i| fmt_f64(panel.value(i, t))))?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_panel_csv(path: impl AsRef<Path>) -> Result<TrajectoryPanel> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path)?;
    let n = check_node_header(path, reader.headers()?)?;
    let mut rows: Vec<Vec<f64>> = vec![Vec::new(); n];
    for (t, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != n {
            return Err(format_error(
                path,
                format!("row {t} has {} fields, expected {n}", record.len()),
            ));
        }
        for (i, raw) in record.iter().enumerate() {
            rows[i].push(parse_field(
                path,
                raw,
                &format!("value at step {t}, node {i}"),
            )?);
        }
    }
    TrajectoryPanel::from_rows(rows)
}

/// Writes the sidecar for `panel_path`.
pub fn write_panel_meta(panel_path: impl AsRef<Path>, meta: &PanelMeta) -> Result<()> {
    let mut text = serde_json::to_string_pretty(meta)?;
    text.push('\n');
    fs::write(meta_path(panel_path.as_ref()), text)?;
    Ok(())
}

pub fn read_panel_meta(panel_path: impl AsRef<Path>) -> Result<PanelMeta> {
    let path = meta_path(panel_path.as_ref());
    let meta = serde_json::from_str(&fs::read_to_string(&path)?)
        .map_err(|e| format_error(&path, e.to_string()))?;
    Ok(meta)
}

// ---- adjacency matrices ----

/// Plain text: a first line with the node count, then one `src dst` pair per
/// link, meaning `src` influences `dst` (0-indexed).
pub fn write_adjacency(path: impl AsRef<Path>, adj: &AdjacencyMatrix) -> Result<()> {
    let mut out = format!("{}\n", adj.n());
    for (target, driver) in adj.links() {
        writeln!(out, "{driver} {target}").expect("string write");
    }
    fs::write(path.as_ref(), out)?;
    Ok(())
}

pub fn read_adjacency(path: impl AsRef<Path>) -> Result<AdjacencyMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let first = lines
        .next()
        .ok_or_else(|| format_error(path, "empty file"))?;
    let n: usize = parse_field(path, first.trim(), "node count")?;
    let mut adj = AdjacencyMatrix::new(n).map_err(|e| format_error(path, e.to_string()))?;
    for line in lines {
        let mut fields = line.split_whitespace();
        let (src, dst) = match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(format_error(
                    path,
                    format!("expected `src dst`, found {line:?}"),
                ))
            }
        };
        let src: usize = parse_field(path, src, "source node")?;
        let dst: usize = parse_field(path, dst, "destination node")?;
        adj.set(dst, src, true)
            .map_err(|e| format_error(path, format!("link {src} -> {dst}: {e}")))?;
    }
    Ok(adj)
}

// ---- importance matrices ----

/// Ranking provenance stored next to a score matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImportanceMeta {
    /// Engine name: `forest`, `relieff`, or `corr-baseline`.
    pub engine: String,
    /// The engine configuration as JSON; empty object for the baseline.
    pub config: serde_json::Value,
    pub seed: u64,
    /// Fingerprint of the panel the scores were computed from; see
    /// [`panel_fingerprint`].
    pub panel_hash: String,
}

/// FNV-1a hash over the panel dimensions and the exact bit patterns of its
/// values, as 16 hex digits. Two panels collide only if they are (almost
/// certainly) identical, so a score matrix can be matched to its input.
pub fn panel_fingerprint(panel: &TrajectoryPanel) -> String {
    let mut state: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |word: u64| {
        for byte in word.to_le_bytes() {
            state ^= u64::from(byte);
            state = state.wrapping_mul(0x100_0000_01b3);
        }
    };
    eat(panel.n_nodes() as u64);
    eat(panel.n_steps() as u64);
    for i in 0..panel.n_nodes() {
        for &v in panel.row(i) {
            eat(v.to_bits());
        }
    }
    format!("{state:016x}")
}

/// N x N scores with the same `node_` header as panels; row `i` holds the
/// driver scores for target `i`.
pub fn write_importance_csv(path: impl AsRef<Path>, scores: &ImportanceMatrix) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    writer.write_record(node_header(scores.n()))?;
    for i in 0..scores.n() {
        writer.write_record(scores.row(i).iter().map(|&v| fmt_f64(v)))?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_importance_csv(path: impl AsRef<Path>) -> Result<ImportanceMatrix> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path)?;
    let n = check_node_header(path, reader.headers()?)?;
    let mut rows = Vec::with_capacity(n);
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != n {
            return Err(format_error(
                path,
                format!("row {i} has {} fields, expected {n}", record.len()),
            ));
        }
        let scores = record
            .iter()
            .map(|raw| parse_field(path, raw, &format!("score in row {i}")))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(ImportanceScores {
            target_node: i,
            scores,
        });
    }
    ImportanceMatrix::from_rows(rows)
}

pub fn write_importance_meta(csv_path: impl AsRef<Path>, meta: &ImportanceMeta) -> Result<()> {
    let mut text = serde_json::to_string_pretty(meta)?;
    text.push('\n');
    fs::write(meta_path(csv_path.as_ref()), text)?;
    Ok(())
}

pub fn read_importance_meta(csv_path: impl AsRef<Path>) -> Result<ImportanceMeta> {
    let path = meta_path(csv_path.as_ref());
    let meta = serde_json::from_str(&fs::read_to_string(&path)?)
        .map_err(|e| format_error(&path, e.to_string()))?;
    Ok(meta)
}

// ---- ROC curves and confusion counts ----

/// `threshold,fpr,tpr` rows in curve order, then a `# auc,<value>` summary
/// line. The first threshold is infinity (written `inf`).
pub fn write_roc_csv(path: impl AsRef<Path>, roc: &RocResult) -> Result<()> {
    let mut out = String::from("threshold,fpr,tpr\n");
    for &(threshold, fpr, tpr) in &roc.points {
        writeln!(
            out,
            "{},{},{}",
            fmt_f64(threshold),
            fmt_f64(fpr),
            fmt_f64(tpr)
        )
        .expect("string write");
    }
    writeln!(out, "# auc,{}", fmt_f64(roc.auc)).expect("string write");
    fs::write(path.as_ref(), out)?;
    Ok(())
}

pub fn read_roc_csv(path: impl AsRef<Path>) -> Result<RocResult> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some("threshold,fpr,tpr") => {}
        other => return Err(format_error(path, format!("bad header {other:?}"))),
    }
    let mut points = Vec::new();
    let mut auc = None;
    for line in lines {
        if let Some(raw) = line.strip_prefix("# auc,") {
            auc = Some(parse_field(path, raw, "auc")?);
        } else {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(format_error(
                    path,
                    format!("expected 3 fields, found {line:?}"),
                ));
            }
            points.push((
                parse_field(path, fields[0], "threshold")?,
                parse_field(path, fields[1], "fpr")?,
                parse_field(path, fields[2], "tpr")?,
            ));
        }
    }
    let auc = auc.ok_or_else(|| format_error(path, "missing `# auc` summary line"))?;
    Ok(RocResult { points, auc })
}

/// Labeled counts, one `metric,count` row each.
pub fn write_confusion_csv(path: impl AsRef<Path>, counts: &ConfusionCounts) -> Result<()> {
    let out = format!(
        "metric,count\ntrue_positives,{}\nfalse_negatives,{}\nfalse_positives,{}\ntrue_negatives,{}\n",
        counts.true_positives, counts.false_negatives, counts.false_positives,
        counts.true_negatives,
    );
    fs::write(path.as_ref(), out)?;
    Ok(())
}

// ---- sweep records and tables ----

const RECORD_HEADER: [&str; 18] = [
    "map",
    "map_param",
    "n",
    "eps",
    "length",
    "sigma",
    "rho",
    "transient",
    "realization",
    "engine",
    "graph_seed",
    "ic_seed",
    "noise_seed",
    "engine_seed",
    "auc",
    "mean_correlation",
    "error",
    "engine_params",
];

/// One row per run. Wall time is deliberately not stored: the file is part of
/// the deterministic output contract, and replaying a record recomputes
/// everything else bit-for-bit.
pub fn write_records_csv(path: impl AsRef<Path>, records: &[RunRecord]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    writer.write_record(RECORD_HEADER)?;
    for r in records {
        writer.write_record([
            r.map.name().to_string(),
            fmt_f64(r.map.param()),
            r.n.to_string(),
            fmt_f64(r.eps),
            r.length.to_string(),
            fmt_f64(r.sigma),
            fmt_f64(r.rho),
            r.transient.to_string(),
            r.realization.to_string(),
            r.engine.name().to_string(),
            r.graph_seed.to_string(),
            r.ic_seed.to_string(),
            r.noise_seed.to_string(),
            r.engine_seed.to_string(),
            fmt_opt(r.auc),
            fmt_opt(r.mean_correlation),
            r.error.clone().unwrap_or_default(),
            r.engine_params.clone(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads records back with `wall_time_seconds` set to zero (it is not stored).
pub fn read_records_csv(path: impl AsRef<Path>) -> Result<Vec<RunRecord>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path)?;
    {
        let headers = reader.headers()?;
        if headers.len() != RECORD_HEADER.len()
            || headers.iter().zip(RECORD_HEADER).any(|(a, b)| a != b)
        {
            return Err(format_error(path, format!("unexpected header {headers:?}")));
        }
    }
    let mut records = Vec::new();
    for record in reader.records() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or_default();
        let map = MapKind::from_parts(field(0), parse_field(path, field(1), "map_param")?)
            .map_err(|e| format_error(path, e.to_string()))?;
        let error = field(16);
        records.push(RunRecord {
            map,
            n: parse_field(path, field(2), "n")?,
            eps: parse_field(path, field(3), "eps")?,
            length: parse_field(path, field(4), "length")?,
            sigma: parse_field(path, field(5), "sigma")?,
            rho: parse_field(path, field(6), "rho")?,
            transient: parse_field(path, field(7), "transient")?,
            realization: parse_field(path, field(8), "realization")?,
            engine: EngineKind::parse(field(9)).map_err(|e| format_error(path, e.to_string()))?,
            graph_seed: parse_field(path, field(10), "graph_seed")?,
            ic_seed: parse_field(path, field(11), "ic_seed")?,
            noise_seed: parse_field(path, field(12), "noise_seed")?,
            engine_seed: parse_field(path, field(13), "engine_seed")?,
            auc: parse_opt(path, field(14), "auc")?,
            mean_correlation: parse_opt(path, field(15), "mean_correlation")?,
            error: (!error.is_empty()).then(|| error.to_string()),
            engine_params: field(17).to_string(),
            wall_time_seconds: 0.0,
        });
    }
    Ok(records)
}

/// One row per (grid point, engine) group; empty cells where a group had no
/// successful runs.
pub fn write_aggregate_csv(path: impl AsRef<Path>, rows: &[AggregateRow]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    writer.write_record([
        "map",
        "map_param",
        "n",
        "eps",
        "length",
        "sigma",
        "engine",
        "n_runs",
        "n_ok",
        "auc_mean",
        "auc_std",
        "corr_mean",
        "corr_std",
    ])?;
    for r in rows {
        writer.write_record([
            r.map.name().to_string(),
            fmt_f64(r.map.param()),
            r.n.to_string(),
            fmt_f64(r.eps),
            r.length.to_string(),
            fmt_f64(r.sigma),
            r.engine.name().to_string(),
            r.n_runs.to_string(),
            r.n_ok.to_string(),
            fmt_opt(r.auc_mean),
            fmt_opt(r.auc_std),
            fmt_opt(r.corr_mean),
            fmt_opt(r.corr_std),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// `n,engine,seconds` rows followed by `# slope,<engine>,<value>` summary
/// lines (omitted when only one size was timed).
pub fn write_bench_csv(path: impl AsRef<Path>, report: &BenchReport) -> Result<()> {
    let mut out = String::from("n,engine,seconds\n");
    for s in &report.samples {
        writeln!(out, "{},{},{}", s.n, s.engine.name(), fmt_f64(s.seconds)).expect("string write");
    }
    for &(engine, slope) in &report.slopes {
        writeln!(out, "# slope,{},{}", engine.name(), fmt_f64(slope)).expect("string write");
    }
    fs::write(path.as_ref(), out)?;
    Ok(())
}
