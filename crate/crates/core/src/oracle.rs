//! Independent references: Monte Carlo measure estimates and multi-seed
//! comparison campaigns against the closed-form predictions.
//!
//! The Monte Carlo sampler draws radii by rejection from an exponential
//! envelope rather than by inverting the CDF, and evaluates region membership
//! with [`distance`] only, so it shares no code path with the measure
//! formulas or with [`crate::sampling`].

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::build_bucketed;
use crate::geometry::{distance, measure_ball_origin, normalize_angle, Params, PolarPoint};
use crate::predictions::{
    expected_crossing_edges_bound, expected_inner_count, expected_restricted_degree_count,
    predicted_average_degree, predicted_degree_fraction, predicted_max_degree_radius_and_exponent,
    predicted_tail_fraction,
};
use crate::sampling::{sample_coordinates, SeededStream};
use crate::stats::{degree_histogram, global_clustering, partition_stats, tail_counts};

pub const MIN_MC_SAMPLES: usize = 1_000;
pub const DEFAULT_VALIDATION_SAMPLES: usize = 10_000_000;
pub const DEFAULT_SMOKE_SAMPLES: usize = 100_000;
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub std_error: f64,
    pub samples: usize,
}

impl MCEstimate {
    fn from_hits(hits: u64, samples: usize) -> Self {
        let n = samples as f64;
        let h = hits as f64;
        let var = ((h - h * h / n) / (n - 1.0)).max(0.0);
        MCEstimate {
            mean: h / n,
            std_error: (var / n).sqrt(),
            samples,
        }
    }
}

/// Regions whose measure can be estimated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// `B_0(x)`.
    BallOrigin { x: f64 },
    /// `(B_{r,0}(R) ∩ B_0(R)) \ B_0(x)`.
    Intersection { r: f64, x: f64 },
    /// `(B_{r1,0}(R) ∩ B_{r2,θ}(R) ∩ B_0(R)) \ B_0(x)`.
    Triple { r1: f64, r2: f64, theta: f64, x: f64 },
}

impl Region {
    fn contains(&self, p: &PolarPoint, radius: f64) -> bool {
        let from_origin = distance(&PolarPoint::ORIGIN, p);
        match *self {
            Region::BallOrigin { x } => from_origin <= x,
            Region::Intersection { r, x } => {
                from_origin > x && distance(&PolarPoint { r, theta: 0.0 }, p) <= radius
            }
            Region::Triple { r1, r2, theta, x } => {
                from_origin > x
                    && distance(&PolarPoint { r: r1, theta: 0.0 }, p) <= radius
                    && distance(&PolarPoint { r: r2, theta }, p) <= radius
            }
        }
    }
}

/// Draws one point from the model density. The radius comes from the
/// envelope `∝ e^{αy}` on `[0, R]`, accepted with probability `1 − e^{−2αy}`.
fn rejection_point(stream: &mut SeededStream, alpha: f64, radius: f64) -> PolarPoint {
    let floor = (-alpha * radius).exp();
    let r = loop {
        let u = stream.next_unit();
        let y = (radius + (u * (1.0 - floor) + floor).ln() / alpha).clamp(0.0, radius);
        if stream.next_unit() < -(-2.0 * alpha * y).exp_m1() {
            break y;
        }
    };
    let theta = normalize_angle(PI * (2.0 * stream.next_unit() - 1.0));
    PolarPoint { r, theta }
}

/// Estimates `μ(region)` from `samples` model points. Work is split into
/// fixed chunks, each drawn from its own fork of `stream`, so the result
/// does not depend on the thread count.
pub fn mc_measure(region: &Region, params: &Params, samples: usize, stream: &SeededStream) -> Result<MCEstimate> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::domain(
            "samples",
            samples as f64,
            format!("[{MIN_MC_SAMPLES}, ∞)"),
        ));
    }
    let (alpha, radius) = (params.alpha(), params.radius());
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut s = stream.fork(i as u64);
            let len = CHUNK.min(samples - i * CHUNK);
            (0..len)
                .filter(|_| region.contains(&rejection_point(&mut s, alpha, radius), radius))
                .count() as u64
        })
        .sum();
    Ok(MCEstimate::from_hits(hits, samples))
}

/// `0.2, 0.3, …, 0.9`.
pub const DEFAULT_X_FRACTIONS: [f64; 8] = [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const DEFAULT_VALIDATION_ALPHAS: [f64; 3] = [0.6, 0.75, 1.0];
pub const DEFAULT_VALIDATION_N: usize = 10_000;
pub const DEFAULT_VALIDATION_SIGMAS: f64 = 3.0;
pub const DEFAULT_REQUIRED_PASS_FRACTION: f64 = 0.99;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureCheck {
    pub alpha: f64,
    pub x_fraction: f64,
    pub x: f64,
    pub exact: f64,
    pub estimate: MCEstimate,
    /// `√(exact (1 − exact) / samples)`, the standard error of the estimate
    /// if `exact` is the true measure.
    pub null_std_error: f64,
    /// `|mean − exact| / null_std_error`.
    pub z: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct MeasureValidationConfig {
    pub alphas: Vec<f64>,
    pub x_fractions: Vec<f64>,
    pub c: f64,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub sigmas: f64,
    pub required_pass_fraction: f64,
}

impl Default for MeasureValidationConfig {
    fn default() -> Self {
        MeasureValidationConfig {
            alphas: DEFAULT_VALIDATION_ALPHAS.to_vec(),
            x_fractions: DEFAULT_X_FRACTIONS.to_vec(),
            c: 0.0,
            n: DEFAULT_VALIDATION_N,
            samples: DEFAULT_VALIDATION_SAMPLES,
            seed: 1,
            sigmas: DEFAULT_VALIDATION_SIGMAS,
            required_pass_fraction: DEFAULT_REQUIRED_PASS_FRACTION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureValidationReport {
    pub samples: usize,
    pub sigmas: f64,
    pub checks: Vec<MeasureCheck>,
    pub pass_fraction: f64,
    pub required_pass_fraction: f64,
    pub passed: bool,
}

impl MeasureValidationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Compares [`measure_ball_origin`] with [`mc_measure`] over an
/// `α × x` grid. Each configuration gets its own seed derived from
/// `config.seed`.
pub fn validate_ball_origin(config: &MeasureValidationConfig) -> Result<MeasureValidationReport> {
    let mut checks = Vec::new();
    for &alpha in &config.alphas {
        let params = Params::new(alpha, config.c, config.n)?;
        for &frac in &config.x_fractions {
            let index = checks.len() as u64;
            let stream = SeededStream::new(config.seed.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
            let x = frac * params.radius();
            let exact = measure_ball_origin(x, &params)?;
            let estimate = mc_measure(&Region::BallOrigin { x }, &params, config.samples, &stream)?;
            // The plug-in std_error is zero when no sample hits a tiny region,
            // so the band uses the spread implied by the closed form instead.
            let null_std_error = (exact * (1.0 - exact) / config.samples as f64).sqrt();
            let diff = (estimate.mean - exact).abs();
            let z = if diff == 0.0 { 0.0 } else { diff / null_std_error };
            checks.push(MeasureCheck {
                alpha,
                x_fraction: frac,
                x,
                exact,
                estimate,
                null_std_error,
                z,
                pass: diff <= config.sigmas * null_std_error,
            });
        }
    }
    let passes = checks.iter().filter(|c| c.pass).count();
    let pass_fraction = if checks.is_empty() {
        1.0
    } else {
        passes as f64 / checks.len() as f64
    };
    Ok(MeasureValidationReport {
        samples: config.samples,
        sigmas: config.sigmas,
        checks,
        pass_fraction,
        required_pass_fraction: config.required_pass_fraction,
        passed: pass_fraction >= config.required_pass_fraction,
    })
}

/// Tolerance bands for [`campaign`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampaignTolerances {
    /// Relative error of the mean average degree.
    pub average_degree: f64,
    /// Bound on `(max − min) / mean` of the average degree across seeds.
    pub average_degree_dispersion: f64,
    /// Absolute error of `ln(max degree) / ln n`.
    pub max_degree_exponent: f64,
    /// Relative error of each degree fraction that is checked.
    pub degree_fraction: f64,
    /// Degree fractions are checked only where `n · predicted` reaches this.
    pub degree_fraction_min_count: f64,
    pub degree_fraction_k_max: usize,
    /// Relative error of `L_k / n` at `k = n^{tail_exponent}`.
    pub tail_fraction: f64,
    pub tail_exponent: f64,
    /// Strict lower bound on the mean global clustering.
    pub clustering_floor: f64,
    /// `|I(β)|` must lie within this factor of its expectation.
    pub inner_count_factor: f64,
}

impl Default for CampaignTolerances {
    fn default() -> Self {
        CampaignTolerances {
            average_degree: 0.05,
            average_degree_dispersion: 0.10,
            max_degree_exponent: 0.12,
            degree_fraction: 0.10,
            degree_fraction_min_count: 500.0,
            degree_fraction_k_max: 20,
            tail_fraction: 0.15,
            tail_exponent: 0.4,
            clustering_floor: 0.05,
            inner_count_factor: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Reported without a tolerance band.
    Info,
}

impl Verdict {
    fn check(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub quantity: String,
    pub predicted: Option<f64>,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// `(max − min) / |mean|`.
    pub dispersion: f64,
    pub tolerance: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedFailure {
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub params: Params,
    pub beta: f64,
    pub seeds: Vec<u64>,
    pub tolerances: CampaignTolerances,
    pub rows: Vec<ComparisonRow>,
    pub failures: Vec<SeedFailure>,
}

impl ComparisonTable {
    pub fn row(&self, quantity: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }

    /// No row failed and every seed ran.
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.rows.iter().all(|r| r.verdict != Verdict::Fail)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,predicted,mean,min,max,dispersion,tolerance,verdict\n");
        for r in &self.rows {
            let predicted = r.predicted.map(|v| format!("{v:e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{:e},{:e},{:e},{:e},{},{}",
                r.quantity,
                predicted,
                r.mean,
                r.min,
                r.max,
                r.dispersion,
                r.tolerance,
                r.verdict.as_str()
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "alpha = {}, C = {}, n = {}, beta = {}, seeds = {:?}",
            self.params.alpha(),
            self.params.c(),
            self.params.n(),
            self.beta,
            self.seeds
        );
        let _ = writeln!(
            out,
            "{:<28} {:>13} {:>13} {:>10} {:>16} {:>7}",
            "quantity", "predicted", "mean", "dispersion", "tolerance", "verdict"
        );
        for r in &self.rows {
            let predicted = r.predicted.map(|v| format!("{v:.6}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "{:<28} {:>13} {:>13.6} {:>10.4} {:>16} {:>7}",
                r.quantity,
                predicted,
                r.mean,
                r.dispersion,
                r.tolerance,
                r.verdict.as_str()
            );
        }
        for f in &self.failures {
            let _ = writeln!(out, "seed {} failed: {}", f.seed, f.message);
        }
        out
    }
}

/// Per-seed measurements feeding a [`ComparisonTable`].
#[derive(Debug, Clone)]
struct SeedMeasurement {
    average_degree: f64,
    max_degree_exponent: f64,
    degree_fraction: Vec<f64>,
    tail_fraction: f64,
    clustering: f64,
    inner_count: f64,
    crossing_edges: f64,
    restricted: Vec<f64>,
}

fn measure_seed(params: &Params, seed: u64, beta: f64, tail_k: usize, k_max: usize) -> Result<SeedMeasurement> {
    let coords = sample_coordinates(params, &mut SeededStream::new(seed));
    let graph = build_bucketed(coords, *params)?;
    let n = graph.n() as f64;
    let hist = degree_histogram(&graph);
    let tail = tail_counts(&hist);
    let partition = partition_stats(&graph, beta)?;
    let max = hist.max_degree() as f64;
    Ok(SeedMeasurement {
        average_degree: crate::stats::average_degree(&graph),
        max_degree_exponent: if max > 0.0 && n > 1.0 { max.ln() / n.ln() } else { 0.0 },
        degree_fraction: (0..=k_max).map(|k| hist.fraction(k)).collect(),
        tail_fraction: tail.get(tail_k).copied().unwrap_or(0) as f64 / n,
        clustering: global_clustering(&graph),
        inner_count: partition.inner_count as f64,
        crossing_edges: partition.crossing_edges as f64,
        restricted: (0..=k_max)
            .map(|k| partition.restricted_degrees.get(&k).copied().unwrap_or(0) as f64)
            .collect(),
    })
}

fn summarize(values: &[f64]) -> (f64, f64, f64, f64) {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let dispersion = if mean == 0.0 { 0.0 } else { (max - min) / mean.abs() };
    (mean, min, max, dispersion)
}

fn row(quantity: String, predicted: Option<f64>, values: &[f64], tolerance: String, verdict: impl FnOnce(f64, f64) -> Verdict) -> ComparisonRow {
    let (mean, min, max, dispersion) = summarize(values);
    ComparisonRow {
        quantity,
        predicted,
        mean,
        min,
        max,
        dispersion,
        tolerance,
        verdict: verdict(mean, dispersion),
    }
}

fn relative_error(mean: f64, predicted: f64) -> f64 {
    ((mean - predicted) / predicted).abs()
}

/// The tail checkpoint `k = round(n^{exponent})`, at least 1.
pub fn tail_checkpoint(n: usize, exponent: f64) -> usize {
    ((n as f64).powf(exponent).round() as usize).max(1)
}

/// Generates and measures one graph per seed (in parallel), then compares
/// the seed means with the predictions. A seed whose pipeline fails is
/// recorded in `failures` and left out of the rows.
pub fn campaign(params: &Params, seeds: &[u64], beta: f64, tolerances: &CampaignTolerances) -> Result<ComparisonTable> {
    if seeds.is_empty() {
        return Err(Error::InvalidInput("campaign needs at least one seed".into()));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain("beta", beta, "(0, 1)"));
    }
    let t = tolerances;
    let tail_k = tail_checkpoint(params.n(), t.tail_exponent);
    let k_max = t.degree_fraction_k_max;

    let outcomes: Vec<Result<SeedMeasurement>> = seeds
        .par_iter()
        .map(|&seed| measure_seed(params, seed, beta, tail_k, k_max))
        .collect();
    let mut measured = Vec::new();
    let mut failures = Vec::new();
    for (&seed, outcome) in seeds.iter().zip(outcomes) {
        match outcome {
            Ok(m) => measured.push(m),
            Err(e) => failures.push(SeedFailure {
                seed,
                message: e.to_string(),
            }),
        }
    }

    let mut rows = Vec::new();
    if !measured.is_empty() {
        let col = |f: &dyn Fn(&SeedMeasurement) -> f64| measured.iter().map(f).collect::<Vec<f64>>();
        let n = params.n() as f64;

        let avg = predicted_average_degree(params);
        let avg_values = col(&|m| m.average_degree);
        rows.push(row(
            "average_degree".into(),
            Some(avg),
            &avg_values,
            format!("rel <= {}", t.average_degree),
            |mean, _| Verdict::check(relative_error(mean, avg) <= t.average_degree),
        ));
        let (_, _, _, dispersion) = summarize(&avg_values);
        rows.push(row(
            "average_degree_dispersion".into(),
            None,
            &[dispersion],
            format!("<= {}", t.average_degree_dispersion),
            |mean, _| Verdict::check(mean <= t.average_degree_dispersion),
        ));

        let (_, exponent) = predicted_max_degree_radius_and_exponent(params);
        rows.push(row(
            "max_degree_exponent".into(),
            Some(exponent),
            &col(&|m| m.max_degree_exponent),
            format!("abs <= {}", t.max_degree_exponent),
            |mean, _| Verdict::check((mean - exponent).abs() <= t.max_degree_exponent),
        ));

        for k in 0..=k_max {
            let predicted = predicted_degree_fraction(k, params);
            let checked = n * predicted >= t.degree_fraction_min_count;
            rows.push(row(
                format!("degree_fraction[{k}]"),
                Some(predicted),
                &col(&|m| m.degree_fraction[k]),
                if checked {
                    format!("rel <= {}", t.degree_fraction)
                } else {
                    "-".into()
                },
                |mean, _| {
                    if checked {
                        Verdict::check(relative_error(mean, predicted) <= t.degree_fraction)
                    } else {
                        Verdict::Info
                    }
                },
            ));
        }

        let tail = predicted_tail_fraction(tail_k, params)?;
        rows.push(row(
            format!("tail_fraction[{tail_k}]"),
            Some(tail),
            &col(&|m| m.tail_fraction),
            format!("rel <= {}", t.tail_fraction),
            |mean, _| Verdict::check(relative_error(mean, tail) <= t.tail_fraction),
        ));

        rows.push(row(
            "global_clustering".into(),
            None,
            &col(&|m| m.clustering),
            format!("> {}", t.clustering_floor),
            |mean, _| Verdict::check(mean > t.clustering_floor),
        ));

        let inner = expected_inner_count(beta, params)?;
        rows.push(row(
            "inner_count".into(),
            Some(inner),
            &col(&|m| m.inner_count),
            format!("factor <= {}", t.inner_count_factor),
            |mean, _| {
                let ratio = mean / inner;
                Verdict::check(ratio <= t.inner_count_factor && ratio >= 1.0 / t.inner_count_factor)
            },
        ));

        let bound = expected_crossing_edges_bound(beta, params)?;
        rows.push(row(
            "crossing_edges".into(),
            Some(bound.value),
            &col(&|m| m.crossing_edges),
            "reference only".into(),
            |_, _| Verdict::Info,
        ));

        for k in 0..=k_max {
            let expected = expected_restricted_degree_count(k, beta, params)?;
            if expected.value < t.degree_fraction_min_count {
                continue;
            }
            rows.push(row(
                format!("restricted_degree[{k}]"),
                Some(expected.value),
                &col(&|m| m.restricted[k]),
                "asymptotic only".into(),
                |_, _| Verdict::Info,
            ));
        }
    }

    Ok(ComparisonTable {
        params: *params,
        beta,
        seeds: seeds.to_vec(),
        tolerances: *tolerances,
        rows,
        failures,
    })
}
