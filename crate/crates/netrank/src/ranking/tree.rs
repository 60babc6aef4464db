//! Variance-reduction regression trees on pre-binned features.
//!
//! Split search runs on bin histograms instead of per-node sorts, which is
//! what makes thousand-tree forests on panels with ~10^4 steps affordable.
//! Features with at most [`DEFAULT_MAX_BINS`] distinct values are binned
//! losslessly (one bin per value), so small problems see every candidate
//! threshold an exact splitter would; denser features fall back to value
//! quantiles. Thresholds are midpoints between the closest observed values
//! either side of a cut, and rows are routed by `value <= threshold`, so
//! growth and prediction agree exactly.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::RegressionDataset;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

pub(crate) const DEFAULT_MAX_BINS: usize = 256;

/// Marker for leaf nodes in the flattened tree.
const LEAF: u32 = u32::MAX;

/// Feature columns quantised to ordered bins plus the candidate thresholds
/// between consecutive bins.
pub(crate) struct BinnedFeatures {
    n_rows: usize,
    codes: Vec<Vec<u8>>,
    cuts: Vec<Vec<f64>>,
}

fn bin_column(col: &[f64], max_bins: usize) -> (Vec<u8>, Vec<f64>) {
    let mut sorted = col.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mut distinct = sorted.clone();
    distinct.dedup();

    let mut cuts: Vec<f64> = if distinct.len() <= max_bins {
        distinct.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    } else {
        let n = sorted.len();
        (1..max_bins)
            .filter_map(|b| {
                let r = b * n / max_bins;
                let (lo, hi) = (sorted[r - 1], sorted[r]);
                (hi > lo).then_some(0.5 * (lo + hi))
            })
            .collect()
    };
    cuts.dedup();

    let codes = col
        .iter()
        .map(|&v| cuts.partition_point(|&c| c < v) as u8)
        .collect();
    (codes, cuts)
}

impl BinnedFeatures {
    pub(crate) fn from_columns(columns: &[&[f64]], max_bins: usize) -> Result<Self> {
        let max_bins = max_bins.clamp(2, 256);
        if columns.is_empty() {
            return Err(Error::invalid("need at least one feature column"));
        }
        let n_rows = columns[0].len();
        let mut codes = Vec::with_capacity(columns.len());
        let mut cuts = Vec::with_capacity(columns.len());
        for col in columns {
            let (c, t) = bin_column(col, max_bins);
            codes.push(c);
            cuts.push(t);
        }
        Ok(Self {
            n_rows,
            codes,
            cuts,
        })
    }

    pub(crate) fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub(crate) fn n_features(&self) -> usize {
        self.codes.len()
    }

    fn max_n_bins(&self) -> usize {
        self.cuts.iter().map(|c| c.len() + 1).max().unwrap_or(1)
    }
}

#[derive(Debug, Clone, Copy)]
struct Node {
    /// Split feature, or `LEAF`.
    feature: u32,
    /// Highest bin code routed left.
    cut: u8,
    /// `value <= threshold` routes left.
    threshold: f64,
    left: u32,
    right: u32,
    /// Mean training target under this node.
    prediction: f64,
}

const NODE_PLACEHOLDER: Node = Node {
    feature: LEAF,
    cut: 0,
    threshold: 0.0,
    left: 0,
    right: 0,
    prediction: 0.0,
};

/// A fitted regression tree plus the summed SSE reduction each feature
/// achieved across its splits.
#[derive(Debug, Clone)]
pub struct RegressionTree {
    nodes: Vec<Node>,
    importance: Vec<f64>,
}

impl RegressionTree {
    /// Predicts from a dense feature row.
    pub fn predict(&self, features: &[f64]) -> f64 {
        self.predict_with(|j| features[j])
    }

    /// Predicts with an arbitrary feature accessor.
    pub fn predict_with(&self, get: impl Fn(usize) -> f64) -> f64 {
        let mut node = &self.nodes[0];
        while node.feature != LEAF {
            node = if get(node.feature as usize) <= node.threshold {
                &self.nodes[node.left as usize]
            } else {
                &self.nodes[node.right as usize]
            };
        }
        node.prediction
    }

    /// Summed SSE reduction per feature.
    pub fn importance(&self) -> &[f64] {
        &self.importance
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| n.feature == LEAF).count()
    }

    /// `(feature, threshold)` of every internal node, in allocation order.
    pub fn splits(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.nodes
            .iter()
            .filter(|n| n.feature != LEAF)
            .map(|n| (n.feature as usize, n.threshold))
    }
}

pub(crate) struct TreeParams {
    pub mtry: usize,
    pub min_samples_split: usize,
}

/// Reusable buffers for growing many trees on one dataset.
pub(crate) struct TreeScratch {
    hist_count: Vec<u32>,
    hist_sum: Vec<f64>,
    touched: Vec<u8>,
    feat_order: Vec<u32>,
    partition: Vec<u32>,
    stack: Vec<(u32, u32, u32)>,
}

impl TreeScratch {
    pub(crate) fn new(bf: &BinnedFeatures) -> Self {
        let bins = bf.max_n_bins();
        Self {
            hist_count: vec![0; bins],
            hist_sum: vec![0.0; bins],
            touched: Vec::with_capacity(bins),
            feat_order: (0..bf.n_features() as u32).collect(),
            partition: Vec::with_capacity(bf.n_rows()),
            stack: Vec::new(),
        }
    }
}

struct BestSplit {
    gain: f64,
    feature: u32,
    cut: u8,
    left_count: u32,
}

/// Grows one tree on the rows `rows[..]` (a training multiset; it gets
/// partitioned in place).
pub(crate) fn grow_tree(
    bf: &BinnedFeatures,
    targets: &[f64],
    rows: &mut [u32],
    params: &TreeParams,
    rng: &mut ChaCha8Rng,
    scratch: &mut TreeScratch,
) -> RegressionTree {
    let p = bf.n_features();
    let mut nodes = vec![NODE_PLACEHOLDER];
    let mut importance = vec![0.0; p];
    // Scratch may be reused across trees; the draws of this tree must not
    // depend on how earlier trees reordered the candidate buffer.
    scratch.feat_order.clear();
    scratch.feat_order.extend(0..p as u32);
    scratch.stack.clear();
    scratch.stack.push((0, 0, rows.len() as u32));

    while let Some((slot, start, end)) = scratch.stack.pop() {
        let segment = &rows[start as usize..end as usize];
        let n = segment.len();
        let mut sum = 0.0;
        let mut min_y = f64::INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for &r in segment {
            let y = targets[r as usize];
            sum += y;
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
        let prediction = sum / n as f64;
        nodes[slot as usize].prediction = prediction;

        if n < params.min_samples_split || min_y == max_y {
            continue;
        }

        let mut best: Option<BestSplit> = None;
        sample_features(&mut scratch.feat_order, params.mtry, rng);
        for c in 0..params.mtry {
            let feature = scratch.feat_order[c];
            scan_feature(bf, targets, segment, feature, sum, scratch, &mut best);
        }

        let Some(split) = best else { continue };
        importance[split.feature as usize] += split.gain;

        let mid = partition_rows(
            &bf.codes[split.feature as usize],
            &mut rows[start as usize..end as usize],
            split.cut,
            &mut scratch.partition,
        );
        debug_assert_eq!(mid as u32, split.left_count);

        let li = nodes.len() as u32;
        nodes.push(NODE_PLACEHOLDER);
        nodes.push(NODE_PLACEHOLDER);
        let node = &mut nodes[slot as usize];
        node.feature = split.feature;
        node.cut = split.cut;
        node.threshold = bf.cuts[split.feature as usize][split.cut as usize];
        node.left = li;
        node.right = li + 1;
        scratch.stack.push((li + 1, start + mid as u32, end));
        scratch.stack.push((li, start, start + mid as u32));
    }

    RegressionTree { nodes, importance }
}

/// Partial Fisher-Yates: afterwards `order[..mtry]` is a uniform draw of
/// distinct features, in draw order.
fn sample_features(order: &mut [u32], mtry: usize, rng: &mut ChaCha8Rng) {
    let p = order.len();
    if mtry >= p {
        // Degenerate draw: evaluate all features in stored order.
        return;
    }
    for t in 0..mtry {
        let pick = t + rng.gen_range(0..p - t);
        order.swap(t, pick);
    }
}

/// Accumulates the bin histogram of one feature over a node's rows and
/// scans it for the best variance-reducing cut.
fn scan_feature(
    bf: &BinnedFeatures,
    targets: &[f64],
    segment: &[u32],
    feature: u32,
    total_sum: f64,
    scratch: &mut TreeScratch,
    best: &mut Option<BestSplit>,
) {
    let cuts = &bf.cuts[feature as usize];
    if cuts.is_empty() {
        return;
    }
    let n_bins = cuts.len() + 1;
    let codes = &bf.codes[feature as usize];
    let n = segment.len();

    // The histogram buffers are all-zero between scans. For small nodes a
    // full clear would dominate, so those track the touched bins and clear
    // only them afterwards; dense nodes sweep the whole prefix.
    let sparse = n < n_bins / 2;
    if sparse {
        scratch.touched.clear();
    }
    for &r in segment {
        let b = codes[r as usize] as usize;
        if sparse && scratch.hist_count[b] == 0 {
            scratch.touched.push(b as u8);
        }
        scratch.hist_count[b] += 1;
        scratch.hist_sum[b] += targets[r as usize];
    }

    let total = n as f64;
    let parent_term = total_sum * total_sum / total;
    let mut left_count = 0u32;
    let mut left_sum = 0.0;

    let mut consider = |b: usize, count: u32, sum: f64, best: &mut Option<BestSplit>| {
        left_count += count;
        left_sum += sum;
        if left_count == 0 || left_count as usize == n {
            return;
        }
        let nl = left_count as f64;
        let nr = total - nl;
        let right_sum = total_sum - left_sum;
        let gain = left_sum * left_sum / nl + right_sum * right_sum / nr - parent_term;
        if gain > best.as_ref().map_or(0.0, |b| b.gain) {
            *best = Some(BestSplit {
                gain,
                feature,
                cut: b as u8,
                left_count,
            });
        }
    };

    if sparse {
        scratch.touched.sort_unstable();
        for idx in 0..scratch.touched.len() {
            let b = scratch.touched[idx] as usize;
            if b + 1 == n_bins {
                break;
            }
            consider(b, scratch.hist_count[b], scratch.hist_sum[b], best);
        }
        for idx in 0..scratch.touched.len() {
            let b = scratch.touched[idx] as usize;
            scratch.hist_count[b] = 0;
            scratch.hist_sum[b] = 0.0;
        }
    } else {
        for b in 0..n_bins - 1 {
            consider(b, scratch.hist_count[b], scratch.hist_sum[b], best);
        }
        scratch.hist_count[..n_bins].fill(0);
        scratch.hist_sum[..n_bins].fill(0.0);
    }
}

/// Stable partition of `segment` by `code <= cut`; returns the left count.
fn partition_rows(codes: &[u8], segment: &mut [u32], cut: u8, spill: &mut Vec<u32>) -> usize {
    spill.clear();
    let mut w = 0;
    for idx in 0..segment.len() {
        let r = segment[idx];
        if codes[r as usize] <= cut {
            segment[w] = r;
            w += 1;
        } else {
            spill.push(r);
        }
    }
    segment[w..].copy_from_slice(spill);
    w
}

/// Fits a single regression tree to a dataset.
///
/// `mtry` features are drawn uniformly at each node; splits minimise the
/// children's summed squared error and growth stops at nodes smaller than
/// `min_samples_split`, with constant targets, or without a strictly
/// improving split.
pub fn fit_regression_tree(
    ds: &RegressionDataset,
    mtry: usize,
    min_samples_split: usize,
    seed: u64,
) -> Result<RegressionTree> {
    let p = ds.n_features();
    if mtry == 0 || mtry > p {
        return Err(Error::invalid(format!(
            "mtry must lie in [1, {p}], got {mtry}"
        )));
    }
    if min_samples_split < 2 {
        return Err(Error::invalid(format!(
            "min_samples_split must be at least 2, got {min_samples_split}"
        )));
    }
    let columns: Vec<&[f64]> = ds.columns().iter().map(|c| c.as_slice()).collect();
    let bf = BinnedFeatures::from_columns(&columns, DEFAULT_MAX_BINS)?;
    let mut scratch = TreeScratch::new(&bf);
    let mut rows: Vec<u32> = (0..ds.n_examples() as u32).collect();
    let mut rng = rng_from_seed(seed);
    let params = TreeParams {
        mtry,
        min_samples_split,
    };
    Ok(grow_tree(
        &bf,
        ds.targets(),
        &mut rows,
        &params,
        &mut rng,
        &mut scratch,
    ))
}
