//! Empirical measurements on a generated graph.
//!
//! Floating-point reductions over vertices go through [`pairwise_sum`], whose
//! grouping depends only on the input length, so results do not change with
//! the number of worker threads.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{Adjacency, Graph};

pub const STATS_SCHEMA_VERSION: u32 = 1;

/// Number of vertices of each degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    pub n: usize,
    pub counts: BTreeMap<usize, usize>,
}

impl DegreeHistogram {
    pub fn from_degrees(degrees: impl IntoIterator<Item = usize>) -> Self {
        let mut counts = BTreeMap::new();
        let mut n = 0;
        for d in degrees {
            *counts.entry(d).or_insert(0) += 1;
            n += 1;
        }
        DegreeHistogram { n, counts }
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn fraction(&self, k: usize) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.count(k) as f64 / self.n as f64
        }
    }

    pub fn max_degree(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    /// Adds another histogram's counts into this one.
    pub fn merge(&mut self, other: &DegreeHistogram) {
        self.n += other.n;
        for (&k, &c) in &other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
    }
}

pub fn degree_histogram<G: AsRef<Adjacency>>(g: &G) -> DegreeHistogram {
    DegreeHistogram::from_degrees(g.as_ref().degrees())
}

/// `2 · edge_count / n`; zero for the empty vertex set.
pub fn average_degree<G: AsRef<Adjacency>>(g: &G) -> f64 {
    let adj = g.as_ref();
    if adj.n() == 0 {
        return 0.0;
    }
    2.0 * adj.edge_count() as f64 / adj.n() as f64
}

pub fn max_degree<G: AsRef<Adjacency>>(g: &G) -> usize {
    g.as_ref().degrees().max().unwrap_or(0)
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Fraction of neighbor pairs of `v` that are adjacent; `0` when `deg(v) < 2`.
pub fn local_clustering<G: AsRef<Adjacency>>(g: &G, v: usize) -> f64 {
    let adj = g.as_ref();
    let nv = adj.neighbors(v);
    let d = nv.len();
    if d < 2 {
        return 0.0;
    }
    // Each edge among the neighbors is seen from both endpoints.
    let twice_links: usize = nv
        .iter()
        .map(|&u| sorted_intersection_len(adj.neighbors(u), nv))
        .sum();
    let pairs = d * (d - 1) / 2;
    (twice_links / 2) as f64 / pairs as f64
}

/// Local clustering of every vertex, in vertex order.
pub fn local_clustering_all<G: AsRef<Adjacency> + Sync>(g: &G) -> Vec<f64> {
    (0..g.as_ref().n())
        .into_par_iter()
        .map(|v| local_clustering(g, v))
        .collect()
}

/// Mean of the local coefficients over all vertices; vertices of degree
/// below two count as zero.
pub fn global_clustering<G: AsRef<Adjacency> + Sync>(g: &G) -> f64 {
    let n = g.as_ref().n();
    if n == 0 {
        return 0.0;
    }
    pairwise_sum(&local_clustering_all(g)) / n as f64
}

/// Sum with a fixed binary-tree grouping (blocks of 128 summed left to right).
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 128;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Inner/outer split at radius `βR`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionStats {
    pub beta: f64,
    /// `|I(β)|`: vertices with `r ≤ βR`.
    pub inner_count: usize,
    pub outer_count: usize,
    /// `e(I, O)`.
    pub crossing_edges: usize,
    /// `D_k(β)`: outer vertices with exactly `k` outer neighbors.
    pub restricted_degrees: BTreeMap<usize, usize>,
}

pub fn partition_stats(g: &Graph, beta: f64) -> Result<PartitionStats> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain("beta", beta, "(0, 1)"));
    }
    let cut = beta * g.params().radius();
    let inner: Vec<bool> = g.coords().iter().map(|p| p.r <= cut).collect();
    let adj = g.adjacency();

    let inner_count = inner.iter().filter(|&&b| b).count();
    let crossing_edges = adj.edges().filter(|&(u, v)| inner[u] != inner[v]).count();
    let mut restricted_degrees = BTreeMap::new();
    for v in (0..adj.n()).filter(|&v| !inner[v]) {
        let k = adj.neighbors(v).iter().filter(|&&u| !inner[u]).count();
        *restricted_degrees.entry(k).or_insert(0) += 1;
    }
    Ok(PartitionStats {
        beta,
        inner_count,
        outer_count: adj.n() - inner_count,
        crossing_edges,
        restricted_degrees,
    })
}

/// `L_k`, the number of vertices of degree at least `k`, indexed by `k`.
///
/// The result has length `max_degree + 2`, so it always ends with `0`.
pub fn tail_counts(hist: &DegreeHistogram) -> Vec<usize> {
    let max = hist.max_degree();
    let mut tail = vec![0; max + 2];
    for k in (0..=max).rev() {
        tail[k] = tail[k + 1] + hist.count(k);
    }
    tail
}

/// Estimator for [`powerlaw_slope_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SlopeEstimator {
    /// Least squares on `log(count / bin width)` against the log-center of
    /// logarithmically growing bins.
    LogBinned { factor: f64 },
    /// Least squares on `log count_k` against `log k`, one point per
    /// non-empty degree.
    LeastSquares,
    /// Discrete maximum-likelihood exponent
    /// `1 + m / Σ ln(k_i / (k_min − 1/2))`, reported as its negative.
    MaximumLikelihood,
}

impl Default for SlopeEstimator {
    fn default() -> Self {
        SlopeEstimator::LogBinned { factor: 1.3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub k_min: usize,
    pub k_max: usize,
    /// Number of points (or, for maximum likelihood, distinct degrees) used.
    pub bins: usize,
    pub estimator: SlopeEstimator,
}

pub const MIN_SLOPE_BINS: usize = 5;

/// Fitted log-log slope of the degree distribution on `[k_min, k_max]`,
/// using the default log-binned estimator.
pub fn powerlaw_slope(hist: &DegreeHistogram, k_min: usize, k_max: usize) -> Result<SlopeFit> {
    powerlaw_slope_with(hist, k_min, k_max, SlopeEstimator::default())
}

pub fn powerlaw_slope_with(
    hist: &DegreeHistogram,
    k_min: usize,
    k_max: usize,
    estimator: SlopeEstimator,
) -> Result<SlopeFit> {
    if k_min == 0 {
        return Err(Error::domain("k_min", 0.0, "[1, k_max)"));
    }
    if k_min >= k_max {
        return Err(Error::domain("k_min", k_min as f64, format!("[1, k_max = {k_max})")));
    }
    let in_range: Vec<(usize, usize)> = hist
        .counts
        .range(k_min..=k_max)
        .filter(|&(_, &c)| c > 0)
        .map(|(&k, &c)| (k, c))
        .collect();

    let (slope, bins) = match estimator {
        SlopeEstimator::LeastSquares => {
            require_bins(in_range.len())?;
            let pts: Vec<(f64, f64)> = in_range
                .iter()
                .map(|&(k, c)| ((k as f64).ln(), (c as f64).ln()))
                .collect();
            (least_squares_slope(&pts), pts.len())
        }
        SlopeEstimator::LogBinned { factor } => {
            if !(factor > 1.0) {
                return Err(Error::domain("factor", factor, "(1, ∞)"));
            }
            let pts = log_binned_points(hist, k_min, k_max, factor);
            require_bins(pts.len())?;
            (least_squares_slope(&pts), pts.len())
        }
        SlopeEstimator::MaximumLikelihood => {
            require_bins(in_range.len())?;
            let shift = k_min as f64 - 0.5;
            let (m, s) = in_range.iter().fold((0.0, 0.0), |(m, s), &(k, c)| {
                (m + c as f64, s + c as f64 * (k as f64 / shift).ln())
            });
            (-(1.0 + m / s), in_range.len())
        }
    };
    Ok(SlopeFit {
        slope,
        k_min,
        k_max,
        bins,
        estimator,
    })
}

fn require_bins(found: usize) -> Result<()> {
    if found < MIN_SLOPE_BINS {
        return Err(Error::InsufficientBins {
            needed: MIN_SLOPE_BINS,
            found,
        });
    }
    Ok(())
}

/// `(log-center, log density)` for each non-empty bin. Bins are integer
/// ranges `[e_i, e_{i+1})` with `e_{i+1} = max(e_i + 1, ⌈factor · e_i⌉)`.
/// Empty bins are skipped.
fn log_binned_points(hist: &DegreeHistogram, k_min: usize, k_max: usize, factor: f64) -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    let mut lo = k_min;
    while lo <= k_max {
        let hi = ((lo as f64 * factor).ceil() as usize).max(lo + 1).min(k_max + 1);
        let total: usize = hist.counts.range(lo..hi).map(|(_, &c)| c).sum();
        if total > 0 {
            let width = (hi - lo) as f64;
            let center = (lo..hi).map(|k| (k as f64).ln()).sum::<f64>() / width;
            pts.push((center, (total as f64 / width).ln()));
        }
        lo = hi;
    }
    pts
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(sxy, sxx), &(x, y)| {
        (sxy + (x - mx) * (y - my), sxx + (x - mx) * (x - mx))
    });
    sxy / sxx
}

/// Options for [`StatsReport`].
#[derive(Debug, Clone, Default)]
pub struct StatsOptions {
    /// Partition radius fraction; only used when coordinates are available.
    pub beta: Option<f64>,
    /// Degree range for the power-law fit.
    pub slope_range: Option<(usize, usize)>,
    pub estimator: SlopeEstimator,
}

/// Machine-readable summary of all measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub schema_version: u32,
    pub n: usize,
    pub edge_count: usize,
    pub average_degree: f64,
    pub max_degree: usize,
    /// `ln(max_degree) / ln(n)`, when both logarithms are positive.
    pub max_degree_exponent: Option<f64>,
    pub global_clustering: f64,
    pub degree_histogram: BTreeMap<usize, usize>,
    pub degree_fraction: BTreeMap<usize, f64>,
    /// `L_k / n` for `k = 1 ..= max_degree`.
    pub tail_fraction: BTreeMap<usize, f64>,
    pub partition: Option<PartitionStats>,
    pub powerlaw_slope: Option<SlopeFit>,
}

impl StatsReport {
    pub fn from_adjacency(adj: &Adjacency, options: &StatsOptions) -> Result<Self> {
        let hist = degree_histogram(adj);
        let n = adj.n();
        let max = hist.max_degree();
        let tail = tail_counts(&hist);
        let powerlaw_slope = match options.slope_range {
            Some((lo, hi)) => Some(powerlaw_slope_with(&hist, lo, hi, options.estimator)?),
            None => None,
        };
        let max_degree_exponent = (n > 1 && max > 1).then(|| (max as f64).ln() / (n as f64).ln());
        Ok(StatsReport {
            schema_version: STATS_SCHEMA_VERSION,
            n,
            edge_count: adj.edge_count(),
            average_degree: average_degree(adj),
            max_degree: max,
            max_degree_exponent,
            global_clustering: global_clustering(adj),
            degree_fraction: hist.counts.keys().map(|&k| (k, hist.fraction(k))).collect(),
            tail_fraction: (1..=max).map(|k| (k, tail[k] as f64 / n as f64)).collect(),
            degree_histogram: hist.counts,
            partition: None,
            powerlaw_slope,
        })
    }

    pub fn from_graph(g: &Graph, options: &StatsOptions) -> Result<Self> {
        let mut report = Self::from_adjacency(g.adjacency(), options)?;
        if let Some(beta) = options.beta {
            report.partition = Some(partition_stats(g, beta)?);
        }
        Ok(report)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
