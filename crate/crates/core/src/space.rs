//! The geodesic-space contract shared by every backend.
//!
//! A backend is a compact metric space with a uniqueness radius `epsilon`:
//! any two points at distance at most `epsilon` are joined by exactly one
//! shortest path. Everything in this crate talks to a space only through
//! [`GeodesicSpace`], so the shortening and sweep-out machinery runs
//! unchanged on the analytic model spaces and on triangle meshes.

use std::fmt;

use thiserror::Error;

/// Coordinate validity tolerance (unit norms, barycentric sums).
pub const COORD_TOL: f64 = 1e-12;

/// Errors raised by backends.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpaceError {
    #[error("points belong to different backends ({left} vs {right})")]
    MixedBackends { left: String, right: String },
    #[error("points are {distance} apart, beyond the uniqueness radius {epsilon}")]
    TooFar { distance: f64, epsilon: f64 },
    #[error("shortest path is not unique: {0}")]
    NotUnique(String),
    #[error("gap {gap} at segment {index} is not below the uniqueness radius {epsilon}")]
    GapTooWide {
        index: usize,
        gap: f64,
        epsilon: f64,
    },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("path straightening did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
}

/// A compact, locally uniquely geodesic metric space.
///
/// Implementations must be immutable after construction (or use only
/// thread-safe interior state for diagnostics) so one backend can serve many
/// concurrent queries.
pub trait GeodesicSpace: Send + Sync {
    type Point: Clone + PartialEq + fmt::Debug + Send + Sync;

    /// Backend tag written into curve documents.
    fn name(&self) -> &'static str;

    /// Uniqueness radius.
    fn epsilon(&self) -> f64;

    fn dimension_hint(&self) -> usize {
        2
    }

    /// Intrinsic distance.
    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<f64, SpaceError>;

    /// Points along the unique shortest path from `a` to `b`, one per
    /// requested arc-length fraction in `[0, 1]`.
    ///
    /// Fails with [`SpaceError::TooFar`] when `d(a, b) > epsilon`.
    fn geodesic_points(
        &self,
        a: &Self::Point,
        b: &Self::Point,
        fractions: &[f64],
    ) -> Result<Vec<Self::Point>, SpaceError>;

    /// Checks the coordinate invariants of a point.
    fn check_point(&self, p: &Self::Point) -> Result<(), SpaceError>;

    /// Flat coordinate array used by the JSON curve format.
    fn encode_point(&self, p: &Self::Point) -> Vec<f64>;

    fn decode_point(&self, coords: &[f64]) -> Result<Self::Point, SpaceError>;
}

/// Returns `MixedBackends` unless `tag` names `space`.
pub fn check_backend<S: GeodesicSpace + ?Sized>(space: &S, tag: &str) -> Result<(), SpaceError> {
    if tag == space.name() {
        Ok(())
    } else {
        Err(SpaceError::MixedBackends {
            left: space.name().to_string(),
            right: tag.to_string(),
        })
    }
}

/// Uniformly spaced fractions `0, 1/(n-1), ..., 1`.
pub fn uniform_fractions(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}
