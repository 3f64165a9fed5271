//! Closed-form asymptotic predictions for `G(α, C, n)`.
//!
//! Throughout, `c_α = 2α / (π(α − 1/2))` and `ξ = c_α e^{−C/2}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ball_origin_unchecked, Params};

pub mod gamma;

pub use gamma::{ln_gamma, ln_upper_incomplete_gamma, upper_incomplete_gamma};

pub const PREDICTION_SCHEMA_VERSION: u32 = 1;

/// `c_α = 2α / (π(α − 1/2))`.
pub fn degree_scale(params: &Params) -> f64 {
    let a = params.alpha();
    2.0 * a / (PI * (a - 0.5))
}

/// `ξ = c_α e^{−C/2}`, the lower limit in the degree-fraction formula.
pub fn xi(params: &Params) -> f64 {
    degree_scale(params) * (-0.5 * params.c()).exp()
}

/// Asymptotic fraction of vertices of degree exactly `k`:
/// `(2α e^{−αC} / k!) c_α^{2α} Γ(k − 2α, ξ)`.
pub fn predicted_degree_fraction(k: usize, params: &Params) -> f64 {
    let a = params.alpha();
    let kf = k as f64;
    let ln_gamma_part = ln_upper_incomplete_gamma(kf - 2.0 * a, xi(params))
        .expect("xi is positive and finite for valid params");
    let ln_value = (2.0 * a).ln() - a * params.c() - ln_gamma(kf + 1.0)
        + 2.0 * a * degree_scale(params).ln()
        + ln_gamma_part;
    ln_value.exp()
}

/// Asymptotic fraction of vertices of degree at least `k ≥ 1`:
/// `c_α^{2α} e^{−αC} k^{−2α}`.
pub fn predicted_tail_fraction(k: usize, params: &Params) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("k", 0.0, "[1, ∞)"));
    }
    let a = params.alpha();
    Ok(degree_scale(params).powf(2.0 * a) * (-a * params.c()).exp() * (k as f64).powf(-2.0 * a))
}

/// `2α² e^{−C/2} / (π(α − 1/2)²)`.
pub fn predicted_average_degree(params: &Params) -> f64 {
    let a = params.alpha();
    2.0 * a * a * (-0.5 * params.c()).exp() / (PI * (a - 0.5) * (a - 0.5))
}

/// Expected degree of a vertex at radius `r`: `(n − 1) c_α e^{−r/2}`.
pub fn expected_degree_at_radius(r: f64, params: &Params) -> Result<f64> {
    params.check_radius("r", r)?;
    Ok((params.n() as f64 - 1.0) * degree_scale(params) * (-0.5 * r).exp())
}

/// `(r_0, exponent)` with `r_0 = (2 − 1/α) ln n` and maximum degree
/// `n^{1/(2α) + o(1)}`.
pub fn predicted_max_degree_radius_and_exponent(params: &Params) -> (f64, f64) {
    let a = params.alpha();
    ((2.0 - 1.0 / a) * (params.n() as f64).ln(), 1.0 / (2.0 * a))
}

/// Radius at which the expected degree equals `k`:
/// `r_k = 2(ln(n − 1) − ln k + ln c_α)`. Requires `1 ≤ k ≤ n − 1`.
pub fn degree_k_radius(k: f64, params: &Params) -> Result<f64> {
    let upper = params.n() as f64 - 1.0;
    if !(k >= 1.0 && k <= upper) {
        return Err(Error::domain("k", k, format!("[1, n - 1 = {upper}]")));
    }
    Ok(2.0 * (upper.ln() - k.ln() + degree_scale(params).ln()))
}

/// Exponent bounding the degree range of the exact-degree formula:
/// `δ = min{(2α−1) / (4(2α+1)α), 2(2α−1) / (5(2α+1))}`.
pub fn degree_fraction_delta(params: &Params) -> f64 {
    let a = params.alpha();
    let first = (2.0 * a - 1.0) / (4.0 * (2.0 * a + 1.0) * a);
    let second = 2.0 * (2.0 * a - 1.0) / (5.0 * (2.0 * a + 1.0));
    first.min(second)
}

/// `δ = min{2(2β − 1), 1/2}` for the outer-subgraph degree counts.
pub fn restricted_degree_delta(beta: f64) -> f64 {
    (2.0 * (2.0 * beta - 1.0)).min(0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RestrictedDegreeExpectation {
    pub beta: f64,
    pub k: usize,
    pub value: f64,
    /// `false` when `β ≤ max{3/5, 1/(2α)}` or `k > n^δ`; the value is still
    /// reported.
    pub within_validity: bool,
}

/// Expected `D_k(β)`: `n` times [`predicted_degree_fraction`].
pub fn expected_restricted_degree_count(
    k: usize,
    beta: f64,
    params: &Params,
) -> Result<RestrictedDegreeExpectation> {
    check_beta(beta)?;
    let beta_ok = beta > (0.6f64).max(1.0 / (2.0 * params.alpha()));
    let k_ok = (k as f64) <= (params.n() as f64).powf(restricted_degree_delta(beta));
    Ok(RestrictedDegreeExpectation {
        beta,
        k,
        value: params.n() as f64 * predicted_degree_fraction(k, params),
        within_validity: beta_ok && k_ok,
    })
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain("beta", beta, "(0, 1)"));
    }
    Ok(())
}

/// `E|I(β)| = n μ(B_0(βR))`.
pub fn expected_inner_count(beta: f64, params: &Params) -> Result<f64> {
    check_beta(beta)?;
    Ok(params.n() as f64 * ball_origin_unchecked(beta * params.radius(), params))
}

/// An order-of-magnitude value whose constant is not known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBound {
    pub beta: f64,
    pub value: f64,
    pub constant: f64,
    /// Always `true`: the constant is a placeholder, not a proven bound.
    pub reference_only: bool,
}

/// `K · n^{1 − (2α−1)(1−β)} · ln n` with `K = 1`.
pub fn expected_crossing_edges_bound(beta: f64, params: &Params) -> Result<ReferenceBound> {
    check_beta(beta)?;
    let n = params.n() as f64;
    let a = params.alpha();
    let constant = 1.0;
    Ok(ReferenceBound {
        beta,
        value: constant * n.powf(1.0 - (2.0 * a - 1.0) * (1.0 - beta)) * n.ln(),
        constant,
        reference_only: true,
    })
}

#[derive(Debug, Clone)]
pub struct PredictionOptions {
    pub k_min: usize,
    pub k_max: usize,
    pub betas: Vec<f64>,
}

impl Default for PredictionOptions {
    fn default() -> Self {
        PredictionOptions {
            k_min: 0,
            k_max: 20,
            betas: vec![0.8],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaValue {
    pub beta: f64,
    pub value: f64,
}

/// Predicted counterpart of [`crate::stats::StatsReport`]; shared quantities
/// use the same keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub schema_version: u32,
    pub params: Params,
    pub average_degree: f64,
    pub degree_fraction: BTreeMap<usize, f64>,
    pub tail_fraction: BTreeMap<usize, f64>,
    pub max_degree_exponent: f64,
    pub max_degree_radius: f64,
    pub powerlaw_slope: f64,
    pub xi: f64,
    /// `n^δ`, the upper end of the exact-degree formula's stated range.
    pub degree_fraction_k_limit: f64,
    pub degree_k_radius: BTreeMap<usize, f64>,
    pub expected_restricted_degrees: Vec<RestrictedDegreeExpectation>,
    pub expected_inner_count: Vec<BetaValue>,
    pub crossing_edges_bound: Vec<ReferenceBound>,
}

impl PredictionReport {
    pub fn compute(params: &Params, options: &PredictionOptions) -> Result<Self> {
        if options.k_min > options.k_max {
            return Err(Error::domain(
                "k_min",
                options.k_min as f64,
                format!("[0, k_max = {}]", options.k_max),
            ));
        }
        let ks = options.k_min..=options.k_max;
        let (r0, exponent) = predicted_max_degree_radius_and_exponent(params);
        let n_minus_one = params.n().saturating_sub(1);

        let mut expected_restricted_degrees = Vec::new();
        let mut expected_inner = Vec::new();
        let mut crossing = Vec::new();
        for &beta in &options.betas {
            for k in ks.clone() {
                expected_restricted_degrees.push(expected_restricted_degree_count(k, beta, params)?);
            }
            expected_inner.push(BetaValue {
                beta,
                value: expected_inner_count(beta, params)?,
            });
            crossing.push(expected_crossing_edges_bound(beta, params)?);
        }

        Ok(PredictionReport {
            schema_version: PREDICTION_SCHEMA_VERSION,
            params: *params,
            average_degree: predicted_average_degree(params),
            degree_fraction: ks.clone().map(|k| (k, predicted_degree_fraction(k, params))).collect(),
            tail_fraction: ks
                .clone()
                .filter(|&k| k >= 1)
                .map(|k| Ok((k, predicted_tail_fraction(k, params)?)))
                .collect::<Result<_>>()?,
            max_degree_exponent: exponent,
            max_degree_radius: r0,
            powerlaw_slope: -(2.0 * params.alpha() + 1.0),
            xi: xi(params),
            degree_fraction_k_limit: (params.n() as f64).powf(degree_fraction_delta(params)),
            degree_k_radius: ks
                .filter(|&k| k >= 1 && k <= n_minus_one)
                .map(|k| Ok((k, degree_k_radius(k as f64, params)?)))
                .collect::<Result<_>>()?,
            expected_restricted_degrees,
            expected_inner_count: expected_inner,
            crossing_edges_bound: crossing,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
