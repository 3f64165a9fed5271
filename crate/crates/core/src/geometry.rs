//! Hyperbolic distances, connection-angle thresholds and ball measures in the
//! native polar representation.
//!
//! All measures are taken with respect to the model's point density: radius
//! with density `α sinh(αr) / (cosh(αR) − 1)` on `[0, R]`, angle uniform.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

/// Default absolute tolerance for [`measure_intersection_quadrature`].
pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-9;

/// Largest accepted `αR`; `cosh(αR)` overflows near 710.
pub const MAX_ALPHA_RADIUS: f64 = 700.0;

/// Largest accepted disk radius; `sinh(r)·sinh(y)` must stay finite.
pub const MAX_RADIUS: f64 = 300.0;

/// Model parameters `(α, C, n)` with the derived disk radius `R = 2 ln n + C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct Params {
    alpha: f64,
    #[serde(rename = "C")]
    c: f64,
    n: usize,
    #[serde(rename = "R")]
    radius: f64,
}

#[derive(Deserialize)]
struct RawParams {
    alpha: f64,
    #[serde(rename = "C")]
    c: f64,
    n: usize,
}

impl TryFrom<RawParams> for Params {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Params::new(raw.alpha, raw.c, raw.n)
    }
}

impl Params {
    pub fn new(alpha: f64, c: f64, n: usize) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.5 {
            return Err(Error::InvalidParams(format!(
                "alpha must satisfy alpha > 1/2 (got {alpha})"
            )));
        }
        if !c.is_finite() {
            return Err(Error::InvalidParams(format!("C must be finite (got {c})")));
        }
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        let radius = 2.0 * (n as f64).ln() + c;
        if radius <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "disk radius R = 2 ln n + C must be positive (got {radius})"
            )));
        }
        if alpha * radius > MAX_ALPHA_RADIUS {
            return Err(Error::InvalidParams(format!(
                "alpha * R = {} exceeds {MAX_ALPHA_RADIUS}; cosh(alpha R) would overflow",
                alpha * radius
            )));
        }
        if radius > MAX_RADIUS {
            return Err(Error::InvalidParams(format!(
                "R = {radius} exceeds {MAX_RADIUS}; hyperbolic functions would overflow"
            )));
        }
        Ok(Params {
            alpha,
            c,
            n,
            radius,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Disk radius `R = 2 ln n + C`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `cosh(αR) − 1`, evaluated as `2 sinh²(αR/2)`.
    pub(crate) fn density_norm(&self) -> f64 {
        let s = (0.5 * self.alpha * self.radius).sinh();
        2.0 * s * s
    }

    /// Radial density `α sinh(αy) / (cosh(αR) − 1)`.
    pub(crate) fn radial_density(&self, y: f64) -> f64 {
        self.alpha * (self.alpha * y).sinh() / self.density_norm()
    }

    /// Builds a point, checking `0 ≤ r ≤ R`.
    pub fn point(&self, r: f64, theta: f64) -> Result<PolarPoint> {
        let p = PolarPoint::new(r, theta)?;
        if p.r > self.radius {
            return Err(Error::domain("r", r, format!("[0, R = {}]", self.radius)));
        }
        Ok(p)
    }

    pub(crate) fn check_radius(&self, what: &'static str, value: f64) -> Result<()> {
        if !(0.0..=self.radius).contains(&value) {
            return Err(Error::domain(what, value, format!("[0, R = {}]", self.radius)));
        }
        Ok(())
    }
}

/// A location `(r, θ)`: `r` is the hyperbolic distance from the origin and
/// `θ ∈ (−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

impl PolarPoint {
    /// Builds a point with `r ≥ 0`, normalizing the angle into `(−π, π]`.
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::domain("r", r, "[0, ∞)"));
        }
        if !theta.is_finite() {
            return Err(Error::domain("theta", theta, "finite angles"));
        }
        Ok(PolarPoint {
            r,
            theta: normalize_angle(theta),
        })
    }

    pub const ORIGIN: PolarPoint = PolarPoint { r: 0.0, theta: 0.0 };
}

/// Maps any finite angle into `(−π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t > PI {
        t - TAU
    } else {
        t
    }
}

/// Circular distance between two angles, in `[0, π]`.
pub fn angular_separation(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % TAU;
    d.min(TAU - d)
}

/// Hyperbolic distance between two points.
///
/// `cosh d = cosh r cosh r' − sinh r sinh r' cos Δθ`, rewritten as
/// `cosh(r − r') + 2 sinh r sinh r' sin²(Δθ/2)` so that nearby points do not
/// cancel.
pub fn distance(p: &PolarPoint, q: &PolarPoint) -> f64 {
    let half = 0.5 * angular_separation(p.theta, q.theta);
    let s = half.sin();
    let arg = (p.r - q.r).abs().cosh() + 2.0 * p.r.sinh() * q.r.sinh() * s * s;
    arg.max(1.0).acosh()
}

/// Edge predicate of the model: `distance(p, q) ≤ R`.
#[inline]
pub fn connects(p: &PolarPoint, q: &PolarPoint, params: &Params) -> bool {
    distance(p, q) <= params.radius
}

/// `θ_r(y)`: the largest angular separation at which a point at radius `y` is
/// within distance `R` of a point at radius `r`.
///
/// Equals `arccos((cosh r cosh y − cosh R) / (sinh r sinh y))`, clamped into
/// `[0, π]`. Evaluated through the half-angle form
/// `sin²(θ/2) = (cosh R − cosh(r − y)) / (2 sinh r sinh y)`.
pub fn angle_threshold_exact(r: f64, y: f64, params: &Params) -> f64 {
    angle_threshold_for_radius(r, y, params.radius)
}

pub(crate) fn angle_threshold_for_radius(r: f64, y: f64, radius: f64) -> f64 {
    if r <= 0.0 || y <= 0.0 || r + y <= radius {
        return PI;
    }
    let s2 = (radius.cosh() - (r - y).cosh()) / (2.0 * r.sinh() * y.sinh());
    if s2 >= 1.0 {
        PI
    } else if s2 <= 0.0 {
        0.0
    } else {
        2.0 * s2.sqrt().asin()
    }
}

/// Leading term `2 e^{(R − r − y)/2}` of `θ_r(y)`, valid for `y ≥ R − r`.
pub fn angle_threshold_approx(r: f64, y: f64, params: &Params) -> Result<f64> {
    let radius = params.radius;
    if y < radius - r {
        return Err(Error::domain(
            "y",
            y,
            format!("[R - r, ∞) = [{}, ∞)", radius - r),
        ));
    }
    Ok(2.0 * (0.5 * (radius - r - y)).exp())
}

/// `μ(B_0(x)) = (cosh(αx) − 1) / (cosh(αR) − 1)`.
pub fn measure_ball_origin(x: f64, params: &Params) -> Result<f64> {
    params.check_radius("x", x)?;
    Ok(ball_origin_unchecked(x, params))
}

pub(crate) fn ball_origin_unchecked(x: f64, params: &Params) -> f64 {
    let a = params.alpha;
    let num = (0.5 * a * x).sinh();
    let den = (0.5 * a * params.radius).sinh();
    (num / den) * (num / den)
}

/// `μ((B_r(R) ∩ B_0(R)) \ B_0(x))` by quadrature, to absolute error `tol`.
///
/// Integrates `(1/π) θ_r(y) p(y)` over `y ∈ [x, R]`. On `y ≤ R − r` the angle
/// is `π` and the integral is the closed-form radial mass; the remaining piece
/// is integrated after substituting `y = a + s²`, which removes the
/// square-root kink where `θ_r(y)` leaves `π`.
pub fn measure_intersection_quadrature(r: f64, x: f64, params: &Params, tol: f64) -> Result<f64> {
    params.check_radius("r", r)?;
    params.check_radius("x", x)?;
    if !(tol > 0.0) {
        return Err(Error::domain("tol", tol, "(0, ∞)"));
    }
    let radius = params.radius;
    let flat_hi = (radius - r).clamp(x, radius);
    let flat = ball_origin_unchecked(flat_hi, params) - ball_origin_unchecked(x, params);

    let span = radius - flat_hi;
    if span <= 0.0 {
        return Ok(flat);
    }
    let norm = params.density_norm();
    let alpha = params.alpha;
    let integrand = |s: f64| {
        let y = (flat_hi + s * s).min(radius);
        let theta = angle_threshold_for_radius(r, y, radius);
        2.0 * s * theta * alpha * (alpha * y).sinh() / (norm * PI)
    };
    let curved = adaptive_simpson(integrand, 0.0, span.sqrt(), tol)?;
    Ok(flat + curved)
}

/// Leading-order asymptotic form of `μ((B_r(R) ∩ B_0(R)) \ B_0(x))`.
///
/// For `x ≤ R − r` this is `2α e^{−r/2} / (π(α − 1/2))`; beyond that the same
/// prefactor times `1 − (1 + (α−½)/(α+½) e^{−2αx}) e^{−(α−½)(R−x)}`, clamped
/// at zero.
pub fn measure_intersection_approx(r: f64, x: f64, params: &Params) -> Result<f64> {
    params.check_radius("r", r)?;
    params.check_radius("x", x)?;
    let a = params.alpha;
    let radius = params.radius;
    let prefactor = 2.0 * a * (-0.5 * r).exp() / (PI * (a - 0.5));
    if x <= radius - r {
        return Ok(prefactor);
    }
    let inner = 1.0 + (a - 0.5) / (a + 0.5) * (-2.0 * a * x).exp();
    let factor = 1.0 - inner * (-(a - 0.5) * (radius - x)).exp();
    Ok((prefactor * factor).max(0.0))
}

/// Whether `0 ≤ θ ≤ e^{−r2/2} − e^{−r1/2}`, the regime in which the ball
/// around `(r2, θ)` contains the part of `B_0(R) ∩ B_{r1,0}(R)` outside the
/// inner ball. Requires `r1 ≥ r2`.
pub fn double_intersection_regime(r1: f64, r2: f64, theta: f64) -> Result<bool> {
    if r1 < r2 {
        return Err(Error::domain("r1", r1, format!("[r2 = {r2}, ∞)")));
    }
    let bound = (-0.5 * r2).exp() - (-0.5 * r1).exp();
    Ok((0.0..=bound).contains(&theta))
}
