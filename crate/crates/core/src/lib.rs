//! Random hyperbolic graphs `G(α, C, n)` in the native disk representation.
//!
//! Vertices get polar coordinates `(r, θ)` in a disk of radius `R = 2 ln n + C`,
//! with radial density `α sinh(αr) / (cosh(αR) − 1)` and uniform angle. Two
//! vertices are adjacent when their hyperbolic distance is at most `R`.
//!
//! The crate is split into:
//!
//! - [`geometry`]: distances, connection-angle thresholds and ball measures.
//! - [`sampling`]: seeded, reproducible coordinate sampling.
//! - [`generator`]: naive and bucketed edge construction (identical output).
//! - [`stats`]: degree, clustering and partition measurements.
//! - [`predictions`]: closed-form asymptotic values, including `Γ(a, x)`.
//! - [`oracle`]: Monte Carlo references and multi-seed comparison campaigns.
//! - [`io`]: the plain-text edge-list and coordinate CSV formats.

pub mod error;
pub mod generator;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod predictions;
pub mod quadrature;
pub mod sampling;
pub mod stats;

pub use error::{Error, Result};
pub use generator::{build_bucketed, build_naive, Adjacency, Graph};
pub use geometry::{Params, PolarPoint};
pub use sampling::{sample_coordinates, SeededStream};
