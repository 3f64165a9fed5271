//! Seeded sampling of vertex coordinates.
//!
//! Every random draw comes from a [`SeededStream`], a ChaCha8 generator keyed
//! by a 64-bit seed. ChaCha is counter based and specified bit-for-bit, so a
//! given seed produces the same coordinates on every platform.

use std::f64::consts::PI;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::{ball_origin_unchecked, normalize_angle, Params, PolarPoint};

/// Name of the generator backing [`SeededStream`], recorded in manifests.
pub const STREAM_ALGORITHM: &str = "chacha8";

/// Deterministic stream of uniform variates in `[0, 1)`.
#[derive(Debug, Clone)]
pub struct SeededStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl SeededStream {
    pub fn new(seed: u64) -> Self {
        SeededStream {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// An independent sub-stream of the same seed, used to split work into
    /// chunks whose output does not depend on the thread count.
    pub fn fork(&self, stream: u64) -> SeededStream {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream.wrapping_add(1));
        SeededStream {
            seed: self.seed,
            rng,
        }
    }

    /// Next uniform variate in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// CDF of the radial density, `(cosh(αr) − 1) / (cosh(αR) − 1)`.
pub fn radial_cdf(r: f64, params: &Params) -> Result<f64> {
    params.check_radius("r", r)?;
    Ok(ball_origin_unchecked(r, params))
}

/// Radial density `α sinh(αr) / (cosh(αR) − 1)`.
pub fn radial_density(r: f64, params: &Params) -> Result<f64> {
    params.check_radius("r", r)?;
    Ok(params.radial_density(r))
}

/// Inverse of [`radial_cdf`]: `(1/α) acosh(1 + u (cosh(αR) − 1))`.
///
/// Computed as `(2/α) asinh(√u · sinh(αR/2))`, which is the same function
/// without the cancellation near `u = 0`.
pub fn sample_radius(u: f64, params: &Params) -> f64 {
    let a = params.alpha();
    let radius = params.radius();
    let r = 2.0 / a * (u.sqrt() * (0.5 * a * radius).sinh()).asinh();
    r.clamp(0.0, radius)
}

/// Draws `n` points: vertex `i` uses variates `2i` (radius) and `2i + 1`
/// (angle `π(2u − 1)`, folded into `(−π, π]`).
pub fn sample_coordinates(params: &Params, stream: &mut SeededStream) -> Vec<PolarPoint> {
    (0..params.n())
        .map(|_| {
            let r = sample_radius(stream.next_unit(), params);
            let theta = normalize_angle(PI * (2.0 * stream.next_unit() - 1.0));
            PolarPoint { r, theta }
        })
        .collect()
}
